use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use solvchaos::arithmetic::{primes_between, BigRat, MPReal, Scalar};
use solvchaos::degree_growth::{entropy, EntropyConfig, FieldMode};
use solvchaos::elliptic::{curve_from_states, ell_backward, ell_height_entropy, ell_orbit, ell_step, invariant_c, ECPoint, EllState};
use solvchaos::finite_field_stats::ff_sweep;
use solvchaos::maps::{MapId, PlaneMapDef, PlaneState, Record, Termination};
use solvchaos::solvability::{
    invariant_tan2, roundtrip_test, segment_points, verify_closed_form_logistic, verify_closed_form_tan, PrecisionPolicy, SolvError,
    VerifyReport,
};

use crate::args::{Check, Command, EntropyArgs, FfstatsArgs, FieldArg, Format, OrbitArgs, SegmentArgs, VerifyArgs};
use crate::svg::{line_chart, SvgPoint, SvgScatter};
use crate::table::{emit, envelope, Table};
use crate::CliError;

enum AnyMap {
    Plane(PlaneMapDef),
    Ell(u32),
}

fn parse_map(spec: &str) -> Result<AnyMap, CliError> {
    let id: MapId = spec.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
    match id {
        MapId::Elliptic(k) if k == 2 || k == 3 => Ok(AnyMap::Ell(k)),
        MapId::Elliptic(k) => Err(CliError::Usage(format!("ell maps need k = 2 or 3, got {k}"))),
        id => Ok(AnyMap::Plane(PlaneMapDef::new(id).map_err(|e| CliError::Usage(e.to_string()))?)),
    }
}

fn plane_map(spec: &str) -> Result<PlaneMapDef, CliError> {
    match parse_map(spec)? {
        AnyMap::Plane(m) => Ok(m),
        AnyMap::Ell(_) => Err(CliError::Usage(format!("{spec} is a four-variable map; this command needs a plane map"))),
    }
}

fn parse_values(s: &str, expected: &[usize]) -> Result<Vec<BigRat>, CliError> {
    let vals =
        s.split(',').map(|t| t.trim().parse::<BigRat>().map_err(|e| CliError::Usage(e.to_string()))).collect::<Result<Vec<_>, _>>()?;
    if !expected.contains(&vals.len()) {
        return Err(CliError::Usage(format!("expected {expected:?} comma-separated values, got {:?}", s)));
    }
    Ok(vals)
}

fn parse_pair(s: &str) -> Result<PlaneState<BigRat>, CliError> {
    let v = parse_values(s, &[2])?;
    Ok(PlaneState::new(v[0].clone(), v[1].clone()))
}

fn parse_ell(s: &str) -> Result<EllState, CliError> {
    let v = parse_values(s, &[4])?;
    Ok(EllState::new(ECPoint::new(v[0].clone(), v[1].clone()), ECPoint::new(v[2].clone(), v[3].clone())))
}

fn random_rat(rng: &mut ChaCha8Rng) -> BigRat {
    BigRat::new(rng.gen_range(-99..=99), rng.gen_range(1..=99))
}

/// Initial state of a plane map; 1D maps take a single value `x0` and start
/// from `(x0, f(x0))`.
fn plane_start(map: &PlaneMapDef, start: Option<&str>, seed: u64) -> Result<PlaneState<BigRat>, CliError> {
    let one_d = map.is_one_dimensional();
    let vals = match start {
        Some(s) => parse_values(s, if one_d { &[1] } else { &[2] })?,
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..if one_d { 1 } else { 2 }).map(|_| random_rat(&mut rng)).collect()
        }
    };
    if one_d {
        let x0 = vals[0].clone();
        Ok(map.step_forward(&PlaneState::new(x0.clone(), x0))?)
    } else {
        Ok(PlaneState::new(vals[0].clone(), vals[1].clone()))
    }
}

fn real(x: &MPReal) -> String {
    x.to_sci(17)
}

fn write_table(
    table: &Table,
    common_out: Option<&str>,
    format: Format,
    cfg: &Command,
    seed: u64,
    svg: Option<String>,
) -> Result<(), CliError> {
    match format {
        Format::Csv => emit(common_out, &table.to_csv(cfg, seed)?),
        Format::Json => emit(common_out, &table.to_json(cfg, seed)?),
        Format::Svg => emit(common_out, svg.as_deref().ok_or_else(|| CliError::Usage("no SVG figure for this output".into()))?),
    }
}

fn scatter(table: &Table, title: &str, x: &str, y: &str, n: &str) -> String {
    let (xi, yi, ni) = (table.column(x), table.column(y), table.column(n));
    let pts = table.rows.iter().map(|r| SvgPoint { x: r[xi].clone(), y: r[yi].clone(), n: r[ni].parse().unwrap_or(0) }).collect();
    SvgScatter::new(title, pts).render()
}

pub fn orbit(a: &OrbitArgs, cfg: &Command) -> Result<(), CliError> {
    let table = match parse_map(&a.map)? {
        AnyMap::Plane(map) => {
            let s0 = plane_start(&map, a.start.as_deref(), a.common.seed)?;
            let fm = map.compile(&MPReal::from_int(a.bits, 0))?;
            let start = PlaneState::new(MPReal::from_rat(a.bits, &s0.u), MPReal::from_rat(a.bits, &s0.v));
            let orbit = fm.iterate(start, a.n, Record::All);
            let mut t = Table::new(&["n", "x_n", "x_next"]);
            t.notes.push(format!("start: {},{}", s0.u, s0.v));
            t.notes.push(format!(
                "precision: {} bits throughout; a chaotic orbit keeps pointwise accuracy only for about bits/log2(lambda) steps",
                a.bits
            ));
            for (i, s) in orbit.states.iter().enumerate() {
                t.push(vec![i.to_string(), real(&s.u), real(&s.v)]);
            }
            if let Termination::Singular { step, error } = &orbit.termination {
                eprintln!("orbit truncated at step {step}: {error}");
                t.notes.push(format!("truncated: step {step}: {error}"));
            }
            t
        }
        AnyMap::Ell(k) => {
            if a.common.svg.is_some() || a.common.format == Format::Svg {
                return Err(CliError::Usage("ell orbits are exact rationals; SVG output is not available".into()));
            }
            let s0 = parse_ell(a.start.as_deref().unwrap_or("0,1,1,2"))?;
            let curve = curve_from_states(&s0)?;
            let mut t = Table::new(&["n", "x_prev", "y_prev", "x", "y"]);
            t.notes.push(format!("curve: g2 = {}, g3 = {}", curve.g2, curve.g3));
            let mut s = s0;
            for i in 0..=a.n {
                t.push(vec![i.to_string(), s.prev.x.to_string(), s.prev.y.to_string(), s.curr.x.to_string(), s.curr.y.to_string()]);
                if i == a.n {
                    break;
                }
                match ell_step(&s, k, &curve) {
                    Ok(next) => s = next,
                    Err(e) => {
                        eprintln!("orbit truncated at step {}: {e}", i + 1);
                        t.notes.push(format!("truncated: step {}: {e}", i + 1));
                        break;
                    }
                }
            }
            t
        }
    };
    let svg = (table.header[1] == "x_n").then(|| scatter(&table, &format!("orbit of {}", a.map), "x_n", "x_next", "n"));
    if let (Some(path), Some(fig)) = (&a.common.svg, &svg) {
        emit(Some(path), fig)?;
    }
    write_table(&table, a.common.out.as_deref(), a.common.format, cfg, a.common.seed, svg)
}

pub fn segment(a: &SegmentArgs, cfg: &Command) -> Result<(), CliError> {
    let map = plane_map(&a.map)?;
    if a.points < 2 {
        return Err(CliError::Usage("a segment needs at least 2 points".into()));
    }
    let pts = segment_points(&parse_pair(&a.from)?, &parse_pair(&a.to)?, a.points);
    let policy = PrecisionPolicy::for_map(map.id());
    let report = roundtrip_test(&map, &pts, a.n, a.tol, &policy).map_err(|e| match e {
        SolvError::PrecisionExhausted { .. } => CliError::Fail(format!("precision not certified: {e}")),
        e => e.into(),
    })?;
    let bits = report.bits;
    let fm = map.compile(&MPReal::from_int(bits, 0))?;
    let mut t = Table::new(&["point", "n", "x", "y"]);
    t.notes.push(format!("certified: round-trip deviation {} < {} at {} bits", report.max_dev.to_sci(6), a.tol, bits));
    t.notes.push(format!("singular orbits: {}", report.excluded.len()));
    for (i, p) in pts.iter().enumerate() {
        let start = PlaneState::new(MPReal::from_rat(bits, &p.u), MPReal::from_rat(bits, &p.v));
        for (n, s) in fm.iterate(start, a.n, Record::All).states.iter().enumerate() {
            t.push(vec![i.to_string(), n.to_string(), real(&s.u), real(&s.v)]);
        }
    }
    let svg = scatter(&t, &format!("images of a segment under {}", a.map), "x", "y", "n");
    if let Some(path) = &a.common.svg {
        emit(Some(path), &svg)?;
    }
    write_table(&t, a.common.out.as_deref(), a.common.format, cfg, a.common.seed, Some(svg))
}

fn default_iters(map: &AnyMap, plane: usize, ell2: usize, ell3: usize) -> usize {
    match map {
        AnyMap::Plane(_) => plane,
        AnyMap::Ell(2) => ell2,
        AnyMap::Ell(_) => ell3,
    }
}

pub fn entropy_cmd(a: &EntropyArgs, cfg: &Command) -> Result<(), CliError> {
    let map = parse_map(&a.map)?;
    let n = a.n.unwrap_or_else(|| default_iters(&map, 8, 30, 7));
    let out = match map {
        AnyMap::Plane(map) => {
            let mode = match a.field {
                FieldArg::Primes => EntropyConfig::default().mode,
                FieldArg::Rational => FieldMode::Rational,
            };
            let ecfg = EntropyConfig { trials: a.trials, mode, seed: a.seed, ..EntropyConfig::default() };
            envelope(cfg, a.seed, entropy(&map, n, &ecfg)?.to_json())?
        }
        AnyMap::Ell(k) => {
            let fit = ell_height_entropy(k, &parse_ell(&a.start)?, n)?;
            let result = json!({
                "map": format!("ell:k={k}"),
                "method": "heights",
                "N": n,
                "slope": fit.slope.to_f64(),
                "slope_digits": fit.slope.to_sci(30),
                "heights": fit.heights,
            });
            envelope(cfg, a.seed, result)?
        }
    };
    emit(a.out.as_deref(), &out)
}

/// `count` primes spread evenly over the primes in `[lo, hi]`.
fn pick_primes(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    let all = primes_between(lo, hi);
    if count == 0 || all.len() <= count {
        return all;
    }
    if count == 1 {
        return vec![all[0]];
    }
    (0..count).map(|i| all[i * (all.len() - 1) / (count - 1)]).collect()
}

pub fn ffstats(a: &FfstatsArgs, cfg: &Command) -> Result<(), CliError> {
    let maps = a.maps.split(',').map(|s| plane_map(s.trim())).collect::<Result<Vec<_>, _>>()?;
    let primes = pick_primes(a.pmin, a.pmax, a.nprimes);
    if primes.is_empty() {
        return Err(CliError::Usage(format!("no primes in [{}, {}]", a.pmin, a.pmax)));
    }
    let mut t = Table::new(&["map", "p", "samples", "seed", "mean_length", "normalized", "flag"]);
    t.notes.push("normalized: mean length / (p + 1 + 2 sqrt(p))".into());
    let mut series = Vec::new();
    for map in &maps {
        let rows = ff_sweep(map, &primes, a.samples, a.common.seed, a.cap)?;
        let mut pts = Vec::new();
        for r in rows {
            pts.push((r.p.to_string(), r.normalized.to_string()));
            t.push(vec![
                r.map,
                r.p.to_string(),
                r.samples.to_string(),
                r.seed.to_string(),
                r.mean_length.to_string(),
                r.normalized.to_string(),
                r.flag,
            ]);
        }
        series.push((map.id().to_string(), pts));
    }
    let svg = line_chart("normalized mean orbit length vs p", &series, 1.0);
    if let Some(path) = &a.common.svg {
        emit(Some(path), &svg)?;
    }
    write_table(&t, a.common.out.as_deref(), a.common.format, cfg, a.common.seed, Some(svg))
}

fn report(check: Check, map: &str, n: usize, tol: f64, max_dev: f64, bits: u32, pass: bool) -> VerifyReport {
    let check = serde_json::to_value(check).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    VerifyReport { check, map: map.to_string(), n, tol, max_dev, bits, pass }
}

fn exact_dev(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// Returns whether the check passed.
pub fn verify(a: &VerifyArgs, cfg: &Command) -> Result<bool, CliError> {
    let map = parse_map(&a.map)?;
    let r = match (a.check, &map) {
        (Check::ClosedForm, AnyMap::Plane(m)) => {
            let n = a.n.unwrap_or(40);
            let (tol, res) = match m.id() {
                MapId::Logistic => {
                    let tol = a.tol.unwrap_or(1e-20);
                    let x0 = parse_values(a.start.as_deref().unwrap_or("0.7"), &[1])?.remove(0);
                    (tol, verify_closed_form_logistic(&x0, n, tol))
                }
                &MapId::Tan(k) => {
                    let tol = a.tol.unwrap_or(1e-15);
                    let s0 = plane_start(m, a.start.as_deref(), a.seed)?;
                    (tol, verify_closed_form_tan(k, &s0.u, &s0.v, n, tol))
                }
                other => return Err(CliError::Usage(format!("no closed form is implemented for {other}"))),
            };
            match res {
                Ok(w) => report(a.check, &a.map, n, tol, w.max_dev.to_f64(), w.bits, true),
                Err(SolvError::PrecisionExhausted { max_dev, bits, .. }) => report(a.check, &a.map, n, tol, max_dev, bits, false),
                Err(e) => return Err(e.into()),
            }
        }
        (Check::Invariant, AnyMap::Plane(m)) if m.id() == &MapId::Tan(2) => {
            let n = a.n.unwrap_or(50);
            let s0 = plane_start(m, a.start.as_deref(), a.seed)?;
            let i0 = invariant_tan2(&s0)?;
            let mut s = s0;
            let mut worst = BigRat::zero();
            for _ in 0..n {
                s = m.step_forward(&s)?;
                let d = invariant_tan2(&s)?.sub(&i0);
                if d.0.clone().abs() > worst.0 {
                    worst = BigRat(d.0.abs());
                }
            }
            report(a.check, &a.map, n, 0.0, worst.to_f64(), 0, worst.is_zero())
        }
        (Check::Invariant, &AnyMap::Ell(k)) => {
            let n = a.n.unwrap_or_else(|| default_iters(&map, 50, 50, 5));
            let s0 = parse_ell(a.start.as_deref().unwrap_or("0,1,1,2"))?;
            let orbit = ell_orbit(k, &s0, n)?;
            let curve = curve_from_states(&s0)?;
            let curve_kept = orbit.iter().all(|s| curve_from_states(s).map(|c| c == curve).unwrap_or(s.curr.on_curve(&curve)));
            let c0 = invariant_c(&s0)?;
            let c_kept = orbit.iter().all(|s| invariant_c(s).map(|c| c == c0).unwrap_or(false));
            // C is an extra invariant of k = 2 only
            let pass = curve_kept && (k != 2 || c_kept);
            report(a.check, &a.map, n, 0.0, exact_dev(pass), 0, pass)
        }
        (Check::Roundtrip, AnyMap::Plane(m)) => {
            let n = a.n.unwrap_or(12);
            let tol = a.tol.unwrap_or(1e-3);
            let pts = segment_points(&parse_pair(&a.from)?, &parse_pair(&a.to)?, a.points.max(2));
            match roundtrip_test(m, &pts, n, tol, &PrecisionPolicy::for_map(m.id())) {
                Ok(rt) => report(a.check, &a.map, n, tol, rt.max_dev.to_f64(), rt.bits, true),
                Err(SolvError::PrecisionExhausted { max_dev, bits, .. }) => report(a.check, &a.map, n, tol, max_dev, bits, false),
                Err(e) => return Err(e.into()),
            }
        }
        (Check::Elliptic, &AnyMap::Ell(k)) => {
            let n = a.n.unwrap_or_else(|| default_iters(&map, 50, 50, 5));
            let s0 = parse_ell(a.start.as_deref().unwrap_or("0,1,1,2"))?;
            let curve = curve_from_states(&s0)?;
            let orbit = ell_orbit(k, &s0, n)?;
            let on_curve = orbit.iter().all(|s| s.prev.on_curve(&curve) && s.curr.on_curve(&curve));
            let mut back = orbit.last().expect("nonempty").clone();
            for _ in 0..n {
                back = ell_backward(&back, k, &curve)?;
            }
            let pass = on_curve && back == s0;
            report(a.check, &a.map, n, 0.0, exact_dev(pass), 0, pass)
        }
        (check, _) => {
            let name = serde_json::to_value(check)?;
            return Err(CliError::Usage(format!("check {name} is not available for map {}", a.map)));
        }
    };
    emit(a.out.as_deref(), &envelope(cfg, a.seed, &r)?)?;
    Ok(r.pass)
}
