use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "solvchaos", version, about = "Orbits, degree growth, finite-field statistics and closed-form checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Iterate one start point and write the pairs (x_n, x_{n+1}).
    Orbit(OrbitArgs),
    /// Certify precision by a round trip, then write all images of a segment.
    Segment(SegmentArgs),
    /// Algebraic entropy from degree growth (plane maps) or heights (ell maps).
    Entropy(EntropyArgs),
    /// Mean orbit length over F_p for a range of primes.
    Ffstats(FfstatsArgs),
    /// Run one verification; exit status 0 on pass, 1 on failure.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Also write an SVG figure to this path.
    #[arg(long)]
    pub svg: Option<String>,
    /// Seed for random starts and sampling; recorded in every output.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OrbitArgs {
    #[arg(long, default_value = "tan:k=3")]
    pub map: String,
    /// Number of iterations.
    #[arg(short = 'n', long = "iters", default_value_t = 1000)]
    pub n: usize,
    /// Working precision in bits (plane maps; ell maps are exact).
    #[arg(long, default_value_t = 256)]
    pub bits: u32,
    /// Start "x0,x1" (one value for 1D maps, "x0,y0,x1,y1" for ell maps);
    /// random rationals from the seed when omitted.
    #[arg(long)]
    pub start: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SegmentArgs {
    #[arg(long, default_value = "tan:k=3")]
    pub map: String,
    #[arg(short = 'n', long = "iters", default_value_t = 12)]
    pub n: usize,
    /// Segment start "x,y".
    #[arg(long, default_value = "1/10,1/5")]
    pub from: String,
    /// Segment end "x,y".
    #[arg(long, default_value = "3/10,7/5")]
    pub to: String,
    /// Number of evenly spaced points on the segment.
    #[arg(long, default_value_t = 2000)]
    pub points: usize,
    /// Round-trip deviation that certifies the precision.
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldArg {
    /// Two primes near 2^31, cross-checked over Q on disagreement.
    Primes,
    Rational,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyArgs {
    #[arg(long, default_value = "tan:k=3")]
    pub map: String,
    /// Iterations: defaults to 8 for plane maps, 30 for ell:k=2, 7 for ell:k=3.
    #[arg(short = 'n', long = "iters")]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value = "primes")]
    pub field: FieldArg,
    /// Random lines per degree computation.
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    /// Start "x0,y0,x1,y1" for ell maps.
    #[arg(long, default_value = "0,1,1,2")]
    pub start: String,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FfstatsArgs {
    /// Comma-separated map specifications.
    #[arg(long = "map", default_value = "tan:k=3,hv:a=1,mcm:a=2")]
    pub maps: String,
    #[arg(long, default_value_t = 500)]
    pub pmin: u64,
    #[arg(long, default_value_t = 5000)]
    pub pmax: u64,
    /// Number of primes, spread evenly over [pmin, pmax].
    #[arg(long, default_value_t = 20)]
    pub nprimes: usize,
    /// Random starts per prime.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Orbit length cap; p^2 when omitted.
    #[arg(long)]
    pub cap: Option<u64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// Orbit against the explicit solution (logistic, tan:k=K).
    ClosedForm,
    /// Exact conservation (tan:k=2, ell:k=2 for C, ell:k=3 for g2 and g3).
    Invariant,
    /// Forward-backward deviation over a segment.
    Roundtrip,
    /// Exact ell orbit stays on its curve and steps back to the start.
    Elliptic,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    #[arg(long, default_value = "tan:k=3")]
    pub map: String,
    /// Iterations: 40 for closed-form, 50 for invariant and elliptic, 12 for roundtrip.
    #[arg(short = 'n', long = "iters", visible_alias = "steps")]
    pub n: Option<usize>,
    /// Tolerance: 1e-20 (logistic) or 1e-15 (tan) for closed-form, 1e-3 for roundtrip.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Start point; random rationals from the seed when omitted
    /// (0.7 for the logistic map, 0,1,1,2 for ell maps).
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long, default_value = "1/10,1/5")]
    pub from: String,
    #[arg(long, default_value = "3/10,7/5")]
    pub to: String,
    #[arg(long, default_value_t = 1000)]
    pub points: usize,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}
