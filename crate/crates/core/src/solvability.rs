//! Closed-form solutions, invariants and the forward-backward precision test.
//!
//! With `x_n = tan(omega_n)` the map `tan:k` becomes the linear recurrence
//! `omega_{n+1} = k omega_n - omega_{n-1}`, solved by powers of
//! `lambda_pm = (k +- sqrt(k^2 - 4)) / 2`. The logistic map is solved by
//! `x_n = cos(2^n alpha)`. Both are checked against multi-precision orbits.

use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::arithmetic::{ArithError, BigRat, MPReal, Scalar};
use crate::maps::{MapError, MapId, PlaneMapDef, PlaneState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolvError {
    #[error("tolerance {tol:e} not met: deviation {max_dev:e} at {bits} bits")]
    PrecisionExhausted { max_dev: f64, bits: u32, tol: f64 },
    #[error("{0}")]
    OutOfDomain(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

pub fn lambda_plus(k: u32) -> f64 {
    let k = k as f64;
    (k + (k * k - 4.0).max(0.0).sqrt()) / 2.0
}

/// `bits(n) = ceil(c n) + guard`, with `c` the base-2 logarithm of the
/// expansion rate rounded up to tenths and never below 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrecisionPolicy {
    pub c_tenths: u32,
    pub guard: u32,
    /// Allow up to two doublings when a tolerance is missed.
    pub doubling: bool,
}

impl PrecisionPolicy {
    pub fn with_rate(lambda: f64) -> Self {
        let tenths = (lambda.log2() * 10.0 - 1e-9).ceil().max(10.0) as u32;
        PrecisionPolicy { c_tenths: tenths, guard: 64, doubling: true }
    }

    pub fn for_map(id: &MapId) -> Self {
        match id {
            MapId::Tan(k) | MapId::Power(k) => Self::with_rate(lambda_plus(*k)),
            MapId::Hv(_) => Self::with_rate(lambda_plus(3)),
            MapId::Logistic | MapId::RittReal | MapId::RittGauss => Self::with_rate(2.0),
            MapId::Mcm(_) | MapId::Elliptic(_) => Self::with_rate(1.0),
        }
    }

    pub fn bits(&self, n: usize) -> u32 {
        (self.c_tenths as usize * n).div_ceil(10) as u32 + self.guard
    }

    fn attempts(&self) -> u32 {
        if self.doubling {
            3
        } else {
            1
        }
    }
}

/// `omega_n` for the linear recurrence, kept as exact integer combinations
/// `omega_n = A_n omega_1 - A_{n-1} omega_0` with `A_0 = 0`, `A_1 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    pub k: u32,
    pub omega0: MPReal,
    pub omega1: MPReal,
    pub lambda_plus: MPReal,
    pub lambda_minus: MPReal,
}

impl LinearSolution {
    pub fn new(k: u32, omega0: MPReal, omega1: MPReal) -> Result<Self, SolvError> {
        if k < 2 {
            return Err(SolvError::OutOfDomain(format!("linear solution needs k >= 2, got {k}")));
        }
        let bits = omega0.bits().max(omega1.bits());
        let kk = MPReal::from_int(bits, k as i64);
        let disc = kk.square().sub(&MPReal::from_int(bits, 4)).sqrt();
        let lambda_plus = kk.add(&disc).mul_pow2(-1);
        let lambda_minus = kk.sub(&disc).mul_pow2(-1);
        Ok(LinearSolution { k, omega0, omega1, lambda_plus, lambda_minus })
    }

    /// `(A_{n-1}, A_n)`.
    pub fn coefficients(&self, n: usize) -> (Integer, Integer) {
        let (mut prev, mut cur) = (Integer::from(-1), Integer::from(0));
        for _ in 0..n {
            let next = Integer::from(&cur * self.k) - &prev;
            prev = cur;
            cur = next;
        }
        (prev, cur)
    }

    pub fn omega(&self, n: usize) -> MPReal {
        let bits = self.omega0.bits().max(self.omega1.bits());
        let (a_prev, a) = self.coefficients(n);
        MPReal::from_integer(bits, &a).mul(&self.omega1).sub(&MPReal::from_integer(bits, &a_prev).mul(&self.omega0))
    }
}

/// `(w1 - lambda_+ w0)(w1 - lambda_- w0) = w1^2 - k w1 w0 + w0^2`.
pub fn conique_value(w0: &MPReal, w1: &MPReal, k: u32) -> MPReal {
    let kk = w0.from_i64_like(k as i64);
    w1.square().sub(&kk.mul(w1).mul(w0)).add(&w0.square())
}

/// `(x_{n-1} - x_n) / (1 + x_{n-1} x_n)`, conserved by `tan:k=2`.
pub fn invariant_tan2<S: Scalar>(s: &PlaneState<S>) -> Result<S, MapError> {
    let den = s.u.one_like().add(&s.u.mul(&s.v));
    if den.is_zero() {
        return Err(MapError::Singular { locus: "1 + x_{n-1}*x_n = 0".into() });
    }
    Ok(s.u.sub(&s.v).div(&den)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormWitness {
    /// `alpha` for the logistic map, unused (zero) for tan checks.
    pub alpha: MPReal,
    pub bits: u32,
    pub max_dev: MPReal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub map: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub tol: f64,
    pub max_dev: f64,
    pub bits: u32,
    pub pass: bool,
}

fn with_doubling<T>(
    policy: &PrecisionPolicy,
    n: usize,
    tol: f64,
    mut run: impl FnMut(u32) -> Result<(MPReal, T), SolvError>,
) -> Result<(u32, MPReal, T), SolvError> {
    let mut last = None;
    for attempt in 0..policy.attempts() {
        let bits = policy.bits(n) << attempt;
        let (dev, extra) = run(bits)?;
        if dev.to_f64() < tol {
            return Ok((bits, dev, extra));
        }
        last = Some((dev.to_f64(), bits));
    }
    let (max_dev, bits) = last.expect("at least one attempt");
    Err(SolvError::PrecisionExhausted { max_dev, bits, tol })
}

/// Iterates `x -> 2x^2 - 1` and compares with `cos(2^n arccos x0)`.
pub fn verify_closed_form_logistic(x0: &BigRat, n: usize, tol: f64) -> Result<ClosedFormWitness, SolvError> {
    if x0.0.clone().abs() > 1 {
        return Err(SolvError::OutOfDomain(format!("|x0| must be at most 1, got {x0}")));
    }
    let map = PlaneMapDef::new(MapId::Logistic)?;
    let policy = PrecisionPolicy::for_map(&MapId::Logistic);
    let (bits, max_dev, alpha) = with_doubling(&policy, n, tol, |bits| {
        let fm = map.compile(&MPReal::from_int(bits, 0))?;
        let x = MPReal::from_rat(bits, x0);
        let alpha = x.acos();
        let mut s = PlaneState::new(x.zero_like(), x.clone());
        let mut dev = x.zero_like();
        for i in 0..=n {
            let oracle = alpha.mul_pow2(i as i32).cos();
            dev = dev.max(s.v.sub(&oracle).abs());
            if i < n {
                s = fm.step_forward(&s)?;
            }
        }
        Ok((dev, alpha))
    })?;
    Ok(ClosedFormWitness { alpha, bits, max_dev })
}

/// Compares the `tan:k` orbit with `tan(omega_n)` in the circle metric:
/// `|arctan x_n - omega_n|` reduced modulo pi.
pub fn verify_closed_form_tan(k: u32, x0: &BigRat, x1: &BigRat, n: usize, tol: f64) -> Result<ClosedFormWitness, SolvError> {
    let id = MapId::Tan(k);
    let map = PlaneMapDef::new(id.clone())?;
    let policy = PrecisionPolicy::for_map(&id);
    let (bits, max_dev, ()) = with_doubling(&policy, n, tol, |bits| {
        let fm = map.compile(&MPReal::from_int(bits, 0))?;
        let mut s = PlaneState::new(MPReal::from_rat(bits, x0), MPReal::from_rat(bits, x1));
        let sol = LinearSolution::new(k, s.u.atan(), s.v.atan())?;
        let pi = MPReal::pi(bits);
        let circle = |x: &MPReal, w: &MPReal| x.atan().sub(w).centered_mod(&pi).abs();
        let mut dev = circle(&s.u, &sol.omega(0));
        for i in 1..=n {
            dev = dev.max(circle(&s.v, &sol.omega(i)));
            if i < n {
                s = fm.step_forward(&s)?;
            }
        }
        Ok((dev, ()))
    })?;
    Ok(ClosedFormWitness { alpha: MPReal::from_int(bits, 0), bits, max_dev })
}

/// `count` evenly spaced exact points from `a` to `b` inclusive.
pub fn segment_points(a: &PlaneState<BigRat>, b: &PlaneState<BigRat>, count: usize) -> Vec<PlaneState<BigRat>> {
    if count == 1 {
        return vec![a.clone()];
    }
    let last = BigRat::from_int(count as i64 - 1);
    (0..count)
        .map(|i| {
            let t = BigRat::from_int(i as i64).div(&last).expect("count > 1");
            let lerp = |x: &BigRat, y: &BigRat| x.add(&y.sub(x).mul(&t));
            PlaneState::new(lerp(&a.u, &b.u), lerp(&a.v, &b.v))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundTripReport {
    /// Largest `max(|u' - u|, |v' - v|)` over the points that stayed regular.
    pub max_dev: MPReal,
    pub bits: u32,
    pub doublings: u32,
    /// Points whose orbit met a singular point, with the failing index.
    pub excluded: Vec<(usize, MapError)>,
}

/// Deviation after `n` steps forward and `n` back at a fixed precision.
fn roundtrip_once(
    map: &PlaneMapDef,
    points: &[PlaneState<BigRat>],
    n: usize,
    bits: u32,
) -> Result<(MPReal, Vec<(usize, MapError)>), SolvError> {
    let fm = map.compile(&MPReal::from_int(bits, 0))?;
    let devs: Vec<Result<MPReal, (usize, MapError)>> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let start = PlaneState::new(MPReal::from_rat(bits, &p.u), MPReal::from_rat(bits, &p.v));
            let mut s = start.clone();
            for _ in 0..n {
                s = fm.step_forward(&s).map_err(|e| (i, e))?;
            }
            for _ in 0..n {
                s = fm.step_backward(&s).map_err(|e| (i, e))?;
            }
            Ok(s.u.sub(&start.u).abs().max(s.v.sub(&start.v).abs()))
        })
        .collect();
    let mut max_dev = MPReal::from_int(bits, 0);
    let mut excluded = Vec::new();
    for d in devs {
        match d {
            Ok(d) => max_dev = max_dev.max(d),
            Err(e) => excluded.push(e),
        }
    }
    Ok((max_dev, excluded))
}

/// Forward-backward test: precision starts at `policy.bits(n)` and doubles
/// (at most twice) until the worst deviation is below `target`.
pub fn roundtrip_test(
    map: &PlaneMapDef,
    points: &[PlaneState<BigRat>],
    n: usize,
    target: f64,
    policy: &PrecisionPolicy,
) -> Result<RoundTripReport, SolvError> {
    if !map.is_invertible() {
        return Err(MapError::NotInvertible(map.id().to_string()).into());
    }
    let mut doublings = 0;
    let (bits, max_dev, excluded) = with_doubling(policy, n, target, |bits| {
        doublings = (bits / policy.bits(n)).trailing_zeros();
        let (dev, excluded) = roundtrip_once(map, points, n, bits)?;
        Ok((dev, excluded))
    })?;
    Ok(RoundTripReport { max_dev, bits, doublings, excluded })
}

/// Round-trip deviation at an explicit precision, without doubling.
pub fn roundtrip_at_bits(map: &PlaneMapDef, points: &[PlaneState<BigRat>], n: usize, bits: u32) -> Result<MPReal, SolvError> {
    Ok(roundtrip_once(map, points, n, bits)?.0)
}
