//! Degree growth of map iterates and algebraic entropy.
//!
//! A random line `(u, v) = (a1 + b1 t, a2 + b2 t)` is pushed through the map
//! in homogeneous coordinates `(U : V : W)`, each a polynomial in `t`. After
//! every step the common factor of the triple is removed, and the largest
//! coordinate degree is the degree of the iterate. The degrees are then
//! fitted by an integer linear recurrence whose dominant characteristic root
//! gives the entropy `log lambda`.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arithmetic::{height, is_prime, unipoly_gcd, ArithError, BigRat, FpElem, MPReal, Scalar, UniPoly};
use crate::maps::{iterate_orbit, MapError, MapId, PlaneMapDef, PlaneState, RationalExpr, Record, Termination};

/// Working precision for dominant roots and logarithms.
const REPORT_BITS: u32 = 256;
const MAX_ORDER: usize = 8;
const MAX_TRANSIENT: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DegreeError {
    #[error("line {0} meets the singular locus; retry with another line")]
    LineDegenerate(GenericLine),
    #[error("need at least {needed} terms, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("degree sequences disagree even in exact arithmetic: {0}")]
    Inconsistent(String),
    #[error("invalid line: {0}")]
    InvalidLine(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `(u, v) = base + t * direction`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenericLine {
    pub base: (i64, i64),
    pub direction: (i64, i64),
    pub seed: u64,
}

impl GenericLine {
    pub fn new(base: (i64, i64), direction: (i64, i64)) -> Result<Self, DegreeError> {
        let bounded = [base.0, base.1, direction.0, direction.1].iter().all(|c| c.abs() <= 100);
        if !bounded {
            return Err(DegreeError::InvalidLine("coordinates must satisfy |c| <= 100".into()));
        }
        if direction == (0, 0) {
            return Err(DegreeError::InvalidLine("direction must be nonzero".into()));
        }
        Ok(GenericLine { base, direction, seed: 0 })
    }

    /// Line with coordinates in [-50, 50] and both direction components
    /// nonzero, so neither coordinate is constant along it.
    pub fn random(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut nonzero = || loop {
            let c: i64 = rng.gen_range(-50..=50);
            if c != 0 {
                break c;
            }
        };
        let base = (nonzero(), nonzero());
        let direction = (nonzero(), nonzero());
        GenericLine { base, direction, seed }
    }
}

impl fmt::Display for GenericLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}t, {} + {}t)", self.base.0, self.direction.0, self.base.1, self.direction.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Projective point `(U : V : W)` over the line parameter, with the common
/// polynomial factor removed.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint<S: Scalar> {
    coords: [UniPoly<S>; 3],
}

impl<S: Scalar> ParamPoint<S> {
    pub fn from_line(line: &GenericLine, ctx: &S) -> Self {
        let lin = |a: i64, b: i64| UniPoly::linear(ctx.from_i64_like(a), ctx.from_i64_like(b));
        ParamPoint { coords: [lin(line.base.0, line.direction.0), lin(line.base.1, line.direction.1), UniPoly::one(ctx)] }
    }

    pub fn coords(&self) -> &[UniPoly<S>; 3] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.coords.iter().map(UniPoly::degree_or_zero).max().unwrap_or(0)
    }

    /// Divides out the triple gcd; `None` when all coordinates vanish.
    fn normalized(coords: [UniPoly<S>; 3]) -> Option<Self> {
        if coords.iter().all(UniPoly::is_zero) {
            return None;
        }
        let mut g = UniPoly::zero(coords[0].ctx());
        for c in &coords {
            if g.is_constant() && !g.is_zero() {
                break;
            }
            g = unipoly_gcd(&g, c);
        }
        let mut coords = if g.is_constant() { coords } else { coords.map(|c| c.exact_div(&g).expect("gcd divides each coordinate")) };
        // the triple is projective, so its scalar content can go too
        if let Some(s) = S::content_scale(&[coords[0].coeffs(), coords[1].coeffs(), coords[2].coeffs()]) {
            coords = coords.map(|c| c.scale(&s));
        }
        let point = ParamPoint { coords };
        assert!(point.triple_gcd().is_constant(), "triple gcd not cleared");
        Some(point)
    }

    fn triple_gcd(&self) -> UniPoly<S> {
        let g = unipoly_gcd(&self.coords[0], &self.coords[1]);
        if g.is_constant() {
            return g;
        }
        unipoly_gcd(&g, &self.coords[2])
    }
}

/// A rational expression homogenized to its total degree `m`:
/// each term `c a^i b^j` becomes `c U^i V^j W^(m-i-j)`.
struct HomogExpr<S: Scalar> {
    num: Vec<(u32, u32, S)>,
    den: Vec<(u32, u32, S)>,
    m: u32,
}

impl<S: Scalar> HomogExpr<S> {
    fn new(e: &RationalExpr, ctx: &S) -> Result<Self, ArithError> {
        let conv = |p: &crate::maps::BiPoly| {
            p.terms().iter().map(|(i, j, c)| Ok((*i, *j, ctx.from_coeff(c)?))).collect::<Result<Vec<_>, ArithError>>()
        };
        Ok(HomogExpr { num: conv(&e.num)?, den: conv(&e.den)?, m: e.degree() })
    }

    /// One forward step `(U, V, W) -> (V D, W N, W D)` before gcd clearing.
    fn step(&self, p: &ParamPoint<S>) -> [UniPoly<S>; 3] {
        let [u, v, w] = &p.coords;
        let m = self.m as usize;
        let powers = |x: &UniPoly<S>| {
            let mut out = vec![UniPoly::one(x.ctx())];
            for k in 1..=m {
                let next = out[k - 1].mul(x);
                out.push(next);
            }
            out
        };
        let (pu, pv, pw) = (powers(u), powers(v), powers(w));
        let eval = |terms: &[(u32, u32, S)]| {
            terms.iter().fold(UniPoly::zero(u.ctx()), |acc, (i, j, c)| {
                let (i, j) = (*i as usize, *j as usize);
                let mono = pu[i].mul(&pv[j]).mul(&pw[m - i - j]);
                acc.add(&mono.scale(c))
            })
        };
        let n = eval(&self.num);
        let d = eval(&self.den);
        [v.mul(&d), w.mul(&n), w.mul(&d)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeSequence {
    pub degrees: Vec<usize>,
    #[serde(serialize_with = "serialize_display")]
    pub map: MapId,
    pub field: Field,
    pub line: Option<GenericLine>,
}

fn serialize_display<T: fmt::Display, Ser: serde::Serializer>(v: &T, s: Ser) -> Result<Ser::Ok, Ser::Error> {
    s.collect_str(v)
}

impl DegreeSequence {
    /// A bare sequence, e.g. for fitting externally supplied data.
    pub fn from_degrees(map: MapId, degrees: Vec<usize>) -> Self {
        DegreeSequence { degrees, map, field: Field::Rational, line: None }
    }
}

fn degree_sequence_in<S: Scalar>(map: &PlaneMapDef, n: usize, line: &GenericLine, ctx: &S) -> Result<Vec<usize>, DegreeError> {
    let expr = HomogExpr::new(map.forward(), ctx)?;
    let mut point = ParamPoint::from_line(line, ctx);
    let mut degrees = vec![point.degree()];
    for _ in 0..n {
        let raw = expr.step(&point);
        point = ParamPoint::normalized(raw).ok_or(DegreeError::LineDegenerate(*line))?;
        degrees.push(point.degree());
    }
    Ok(degrees)
}

/// Degrees `d_0 .. d_n` of the iterates restricted to `line`.
pub fn degree_sequence(map: &PlaneMapDef, n: usize, line: &GenericLine, field: Field) -> Result<DegreeSequence, DegreeError> {
    if n == 0 {
        return Err(DegreeError::InsufficientData { needed: 1, got: 0 });
    }
    let degrees = match field {
        Field::Rational => degree_sequence_in(map, n, line, &BigRat::zero())?,
        Field::Prime(p) => degree_sequence_in(map, n, line, &FpElem::checked(0, p)?)?,
    };
    Ok(DegreeSequence { degrees, map: map.id().clone(), field, line: Some(*line) })
}

/// `d_n = sum_i coeffs[i] * d_{n-1-i}` for all `n >= transient + coeffs.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Recurrence {
    pub coeffs: Vec<i64>,
    pub transient: usize,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `x^r - c_1 x^(r-1) - ... - c_r`, highest degree first.
    pub fn char_poly(&self) -> Vec<i64> {
        std::iter::once(1).chain(self.coeffs.iter().map(|c| -c)).collect()
    }

    pub fn next_term(&self, d: &[usize]) -> i128 {
        let n = d.len();
        self.coeffs.iter().enumerate().map(|(i, c)| *c as i128 * d[n - 1 - i] as i128).sum()
    }

    pub fn holds_on(&self, d: &[usize]) -> bool {
        let r = self.order();
        (self.transient + r..d.len()).all(|n| self.next_term(&d[..n]) == d[n] as i128)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "order")]
pub enum Growth {
    /// `d_n ~ n^k`.
    Polynomial(usize),
    Exponential,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub degrees: DegreeSequence,
    pub recurrence: Option<Recurrence>,
    pub dominant_root: MPReal,
    pub entropy: MPReal,
    pub growth: Growth,
    /// Set when no recurrence of order <= 8 fits and the entropy is the
    /// last log-ratio of consecutive degrees.
    pub fallback: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecurrenceJson {
    pub coeffs: Vec<i64>,
    pub transient: usize,
}

/// Serializable view of an [`EntropyReport`].
#[derive(Debug, Clone, Serialize)]
pub struct EntropyJson {
    pub map: String,
    pub field: String,
    pub degrees: Vec<usize>,
    pub recurrence: Option<RecurrenceJson>,
    pub char_poly: Vec<i64>,
    pub dominant_root: String,
    pub entropy: f64,
    pub entropy_digits: String,
    pub growth: Growth,
    pub fallback: bool,
}

impl EntropyReport {
    pub fn char_poly(&self) -> Vec<i64> {
        self.recurrence.as_ref().map(Recurrence::char_poly).unwrap_or_default()
    }

    pub fn to_json(&self) -> EntropyJson {
        EntropyJson {
            map: self.degrees.map.to_string(),
            field: self.degrees.field.to_string(),
            degrees: self.degrees.degrees.clone(),
            recurrence: self.recurrence.as_ref().map(|r| RecurrenceJson { coeffs: r.coeffs.clone(), transient: r.transient }),
            char_poly: self.char_poly(),
            dominant_root: self.dominant_root.to_sci(30),
            entropy: self.entropy.to_f64(),
            entropy_digits: self.entropy.to_sci(30),
            growth: self.growth,
            fallback: self.fallback,
        }
    }
}

/// Solves the r x r system for the recurrence coefficients from the first
/// r equations past the transient. `None` if singular or non-integral.
fn solve_recurrence(d: &[usize], r: usize, t: usize) -> Option<Vec<i64>> {
    let q = |x: usize| BigRat::from_int(x as i64);
    let mut rows: Vec<Vec<BigRat>> = (0..r)
        .map(|k| {
            let n = t + r + k;
            let mut row: Vec<BigRat> = (1..=r).map(|i| q(d[n - i])).collect();
            row.push(q(d[n]));
            row
        })
        .collect();
    for col in 0..r {
        let pivot = (col..r).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].inv().ok()?;
        let prow: Vec<BigRat> = rows[col].iter().map(|x| x.mul(&inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
        rows[col] = prow;
    }
    rows.iter()
        .map(|row| {
            let c = &row[r];
            if c.is_integer() {
                c.numer().to_i64()
            } else {
                None
            }
        })
        .collect()
}

/// Smallest (order, transient) integer recurrence that fits `d`, with at
/// least two equations beyond those used to solve it.
pub fn find_recurrence(d: &[usize]) -> Option<Recurrence> {
    for r in 1..=MAX_ORDER {
        for t in 0..=MAX_TRANSIENT {
            if d.len() < t + 2 * r + 2 {
                break;
            }
            let Some(coeffs) = solve_recurrence(d, r, t) else { continue };
            let rec = Recurrence { coeffs, transient: t };
            if rec.holds_on(d) {
                return Some(rec);
            }
        }
    }
    None
}

/// Roots of a monic real polynomial (highest degree first) by Durand-Kerner.
fn poly_roots(monic: &[f64]) -> Vec<Complex64> {
    let n = monic.len() - 1;
    let eval = |z: Complex64| monic.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c);
    let bound = 1.0 + monic[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * bound).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let zi = roots[i];
            let denom = roots.iter().enumerate().filter(|(j, _)| *j != i).fold(Complex64::new(1.0, 0.0), |acc, (_, zj)| acc * (zi - zj));
            if denom.norm() == 0.0 {
                continue;
            }
            let delta = eval(zi) / denom;
            roots[i] = zi - delta;
            moved = moved.max(delta.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    roots
}

/// Exact quotient `p / d` of integer polynomials (highest degree first, `d`
/// monic), or `None` if `d` does not divide `p`.
fn exact_div(p: &[i128], d: &[i128]) -> Option<Vec<i128>> {
    if p.len() < d.len() {
        return None;
    }
    let mut rem = p.to_vec();
    let mut q = Vec::with_capacity(p.len() - d.len() + 1);
    for i in 0..=p.len() - d.len() {
        let c = rem[i];
        q.push(c);
        for (j, dj) in d.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    rem.iter().all(|&r| r == 0).then_some(q)
}

/// Cyclotomic polynomials Phi_1 .. Phi_max, highest degree first.
fn cyclotomics(max: usize) -> Vec<Vec<i128>> {
    let mut phis: Vec<Vec<i128>> = Vec::with_capacity(max);
    for n in 1..=max {
        let mut p = vec![0i128; n + 1];
        p[0] = 1;
        p[n] = -1;
        for d in (1..n).filter(|d| n % d == 0) {
            p = exact_div(&p, &phis[d - 1]).expect("Phi_d divides x^n - 1");
        }
        phis.push(p);
    }
    phis
}

/// Strips every cyclotomic factor. Returns the remaining polynomial and the
/// largest multiplicity of a root on the unit circle.
fn strip_unit_roots(poly: &[i64]) -> (Vec<i64>, usize) {
    let mut p: Vec<i128> = poly.iter().map(|&c| c as i128).collect();
    let mut max_mult = 0;
    // Phi_n has degree phi(n) >= sqrt(n/2), so n <= 2 deg^2 covers all factors
    let bound = 2 * (poly.len() - 1).pow(2);
    for phi in cyclotomics(bound.max(2)) {
        let mut mult = 0;
        while let Some(q) = exact_div(&p, &phi) {
            p = q;
            mult += 1;
        }
        max_mult = max_mult.max(mult);
    }
    (p.into_iter().map(|c| c as i64).collect(), max_mult)
}

/// Dominant root refined by Newton's method at `REPORT_BITS`.
fn refine_root(poly: &[i64], x0: f64) -> MPReal {
    let bits = REPORT_BITS;
    let mut x = MPReal::from_f64(bits, x0);
    for _ in 0..64 {
        let (mut p, mut dp) = (MPReal::from_int(bits, 0), MPReal::from_int(bits, 0));
        for &c in poly {
            dp = dp.mul(&x).add(&p);
            p = p.mul(&x).add(&MPReal::from_int(bits, c));
        }
        if dp.is_zero() {
            break;
        }
        let step = p.div(&dp).expect("nonzero derivative");
        x = x.sub(&step);
        if step.is_zero() || step.abs() < x.abs().mul_pow2(-(bits as i32) + 4) {
            break;
        }
    }
    x
}

fn report_from_recurrence(degrees: DegreeSequence, rec: Recurrence) -> EntropyReport {
    let poly = rec.char_poly();
    let (rest, unit_mult) = strip_unit_roots(&poly);
    let roots = if rest.len() > 1 { poly_roots(&rest.iter().map(|&c| c as f64).collect::<Vec<_>>()) } else { Vec::new() };
    let dominant = roots.iter().copied().fold(Complex64::new(0.0, 0.0), |a, z| if z.norm() > a.norm() { z } else { a });
    let bits = REPORT_BITS;
    // without unit-circle roots the dominant root is off the circle
    if dominant.norm() < 1.0 {
        let order = unit_mult.saturating_sub(1);
        return EntropyReport {
            degrees,
            recurrence: Some(rec),
            dominant_root: MPReal::from_int(bits, 1),
            entropy: MPReal::from_int(bits, 0),
            growth: Growth::Polynomial(order),
            fallback: false,
        };
    }
    let root = if dominant.im.abs() < 1e-9 * dominant.norm() {
        refine_root(&rest, dominant.re).abs()
    } else {
        MPReal::from_f64(bits, dominant.norm())
    };
    let entropy = root.ln();
    EntropyReport { degrees, recurrence: Some(rec), dominant_root: root, entropy, growth: Growth::Exponential, fallback: false }
}

/// Minimal recurrence, characteristic root and entropy of a degree sequence.
pub fn fit_recurrence(d: &DegreeSequence) -> Result<EntropyReport, DegreeError> {
    let len = d.degrees.len();
    if len < 4 {
        return Err(DegreeError::InsufficientData { needed: 4, got: len });
    }
    if let Some(rec) = find_recurrence(&d.degrees) {
        return Ok(report_from_recurrence(d.clone(), rec));
    }
    let bits = REPORT_BITS;
    let last = MPReal::from_int(bits, d.degrees[len - 1] as i64);
    let prev = MPReal::from_int(bits, d.degrees[len - 2].max(1) as i64);
    let ratio = last.div(&prev)?;
    let (root, growth) =
        if ratio > MPReal::from_int(bits, 1) { (ratio, Growth::Exponential) } else { (MPReal::from_int(bits, 1), Growth::Polynomial(0)) };
    Ok(EntropyReport { degrees: d.clone(), recurrence: None, entropy: root.ln(), dominant_root: root, growth, fallback: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldMode {
    /// Lines alternate between the two primes.
    Primes([u64; 2]),
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EntropyConfig {
    pub trials: usize,
    pub mode: FieldMode,
    pub seed: u64,
    /// Fresh lines tried in place of degenerate ones before giving up.
    pub max_retries: usize,
}

/// The two largest primes below 2^31.
pub fn default_primes() -> [u64; 2] {
    let mut found = [0; 2];
    let mut k = 0;
    let mut n = (1u64 << 31) - 1;
    while k < 2 {
        if is_prime(n) {
            found[k] = n;
            k += 1;
        }
        n -= 2;
    }
    found
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig { trials: 3, mode: FieldMode::Primes(default_primes()), seed: 0x5eed, max_retries: 8 }
    }
}

/// Runs `degree_sequence` on several random lines, cross-checks the results,
/// and fits the agreed sequence.
///
/// The generic sequence is the termwise maximum over all runs, since a bad
/// line or an unlucky prime can only lower degrees. A run that falls short is
/// re-run over Q: if Q reaches the generic sequence the prime was unlucky; if
/// Q reproduces the short run the line is special and is replaced.
pub fn entropy(map: &PlaneMapDef, n: usize, cfg: &EntropyConfig) -> Result<EntropyReport, DegreeError> {
    if cfg.trials < 2 {
        return Err(DegreeError::InsufficientData { needed: 2, got: cfg.trials });
    }
    let field_for = |i: usize| match cfg.mode {
        FieldMode::Primes(ps) => Field::Prime(ps[i % 2]),
        FieldMode::Rational => Field::Rational,
    };
    let mut next_seed = cfg.seed;
    let mut fresh_line = || {
        let line = GenericLine::random(next_seed);
        next_seed = next_seed.wrapping_add(1);
        line
    };
    let mut retries = 0;
    let lines: Vec<GenericLine> = (0..cfg.trials).map(|_| fresh_line()).collect();
    let mut runs: Vec<Result<DegreeSequence, DegreeError>> =
        lines.par_iter().enumerate().map(|(i, l)| degree_sequence(map, n, l, field_for(i))).collect();

    loop {
        for (i, run) in runs.iter_mut().enumerate() {
            while let Err(DegreeError::LineDegenerate(_)) = run {
                retries += 1;
                if retries > cfg.max_retries {
                    return Err(DegreeError::Inconsistent("too many degenerate lines".into()));
                }
                *run = degree_sequence(map, n, &fresh_line(), field_for(i));
            }
        }
        let seqs: Vec<DegreeSequence> = runs.iter().cloned().collect::<Result<_, _>>()?;
        let generic: Vec<usize> = (0..=n).map(|k| seqs.iter().map(|s| s.degrees[k]).max().unwrap_or(0)).collect();
        let mut replaced = false;
        for (i, s) in seqs.iter().enumerate() {
            if s.degrees == generic {
                continue;
            }
            let line = s.line.expect("runs carry their line");
            let exact = if s.field == Field::Rational { s.clone() } else { degree_sequence(map, n, &line, Field::Rational)? };
            if exact.degrees == generic {
                continue;
            }
            if exact.degrees == s.degrees {
                retries += 1;
                if retries > cfg.max_retries {
                    return Err(DegreeError::Inconsistent(format!("line {line} stays below the generic degrees")));
                }
                runs[i] = degree_sequence(map, n, &fresh_line(), field_for(i));
                replaced = true;
            } else {
                return Err(DegreeError::Inconsistent(format!(
                    "line {line}: {:?} over {} but {:?} over Q",
                    s.degrees, s.field, exact.degrees
                )));
            }
        }
        if !replaced {
            let agreed = seqs.into_iter().find(|s| s.degrees == generic).expect("at least one run reaches the maximum");
            return fit_recurrence(&agreed);
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeightFit {
    /// Least-squares slope of `log height(x_n)` against n on the tail.
    pub slope: MPReal,
    /// `(n, height(x_n))` for every nonzero term of the orbit.
    pub heights: Vec<(usize, u64)>,
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(points: &[(f64, MPReal)]) -> MPReal {
    let bits = REPORT_BITS;
    let n = MPReal::from_int(bits, points.len() as i64);
    let zero = MPReal::from_int(bits, 0);
    let (mut sx, mut sy, mut sxx, mut sxy) = (zero.clone(), zero.clone(), zero.clone(), zero);
    for (x, y) in points {
        let x = MPReal::from_f64(bits, *x);
        sx = sx.add(&x);
        sy = sy.add(y);
        sxx = sxx.add(&x.square());
        sxy = sxy.add(&x.mul(y));
    }
    let num = n.mul(&sxy).sub(&sx.mul(&sy));
    let den = n.mul(&sxx).sub(&sx.square());
    num.div(&den).unwrap_or_else(|_| MPReal::from_int(bits, 0))
}

/// Heights of an exact orbit and the slope of their logarithm over the
/// tail `n in [N/2, N]`, an independent estimate of the entropy.
pub fn entropy_from_heights(map: &PlaneMapDef, s0: PlaneState<BigRat>, n: usize) -> Result<HeightFit, DegreeError> {
    let orbit = iterate_orbit(map, s0, n, Record::All)?;
    if let Termination::Singular { error, .. } = orbit.termination {
        return Err(error.into());
    }
    let heights: Vec<(usize, u64)> = orbit.states.iter().enumerate().filter_map(|(k, s)| height(&s.v).ok().map(|h| (k, h))).collect();
    let tail: Vec<(f64, MPReal)> =
        heights.iter().filter(|(k, _)| *k >= n / 2).map(|(k, h)| (*k as f64, MPReal::from_int(REPORT_BITS, *h as i64).ln())).collect();
    if tail.len() < 2 {
        return Err(DegreeError::InsufficientData { needed: 2, got: tail.len() });
    }
    Ok(HeightFit { slope: ls_slope(&tail), heights })
}
