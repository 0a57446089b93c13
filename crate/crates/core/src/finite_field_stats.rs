//! Orbit lengths over F_p and their Hasse-Weil normalization.
//!
//! An orbit is followed until a denominator vanishes or the start state comes
//! back. For the invertible maps, reversibility forces the first repeated
//! state to be the start state; this is checked rather than assumed.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arithmetic::{is_prime, ArithError, FpElem};
use crate::maps::{FieldMap, MapError, PlaneMapDef, PlaneState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FFError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cap must be at least 1")]
    ZeroCap,
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `p + 1 + 2 g sqrt(p)`.
pub fn hw_bound(p: u64, g: u32) -> f64 {
    let p = p as f64;
    p + 1.0 + 2.0 * g as f64 * p.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Terminal {
    SingularHit,
    CycleClosed,
    /// A non-invertible map fell into a cycle that avoids the start state.
    EnteredCycle,
    CapReached,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FFOrbitResult {
    /// Distinct states visited, the start included.
    pub length: u64,
    pub terminal: Terminal,
    pub start: PlaneState<FpElem>,
    pub p: u64,
}

fn key(s: &PlaneState<FpElem>) -> u64 {
    s.u.residue() * s.u.modulus() + s.v.residue()
}

fn orbit_length(map: &FieldMap<FpElem>, invertible: bool, s0: PlaneState<FpElem>, cap: u64) -> FFOrbitResult {
    let p = s0.u.modulus();
    let mut visited = HashSet::new();
    visited.insert(key(&s0));
    let mut current = s0.clone();
    let result = |length, terminal, start| FFOrbitResult { length, terminal, start, p };
    loop {
        let length = visited.len() as u64;
        let Ok(next) = map.step_forward(&current) else {
            return result(length, Terminal::SingularHit, s0);
        };
        if next == s0 {
            return result(length, Terminal::CycleClosed, s0);
        }
        if !visited.insert(key(&next)) {
            assert!(!invertible, "{}: first repeated state {next:?} is not the start {s0:?}", map.id());
            return result(length, Terminal::EnteredCycle, s0);
        }
        if length + 1 > cap {
            return result(cap, Terminal::CapReached, s0);
        }
        current = next;
    }
}

fn compile_mod(map: &PlaneMapDef, p: u64) -> Result<FieldMap<FpElem>, FFError> {
    if !is_prime(p) {
        return Err(FFError::NotPrime(p));
    }
    Ok(map.compile(&FpElem::checked(0, p)?)?)
}

/// Follows one orbit; `cap` defaults to p^2, the size of the state space.
pub fn ff_orbit_length(map: &PlaneMapDef, s0: PlaneState<FpElem>, cap: Option<u64>) -> Result<FFOrbitResult, FFError> {
    let p = s0.u.modulus();
    let cap = cap.unwrap_or(p * p);
    if cap == 0 {
        return Err(FFError::ZeroCap);
    }
    let fm = compile_mod(map, p)?;
    Ok(orbit_length(&fm, map.is_invertible(), s0, cap))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FFStatsRow {
    pub map: String,
    pub p: u64,
    pub samples: usize,
    pub seed: u64,
    pub mean_length: f64,
    pub normalized: f64,
    /// `cap` when at least one orbit hit the cap, empty otherwise.
    pub flag: String,
}

/// Stream for prime `p`, so rows do not depend on which other primes run.
fn rng_for(seed: u64, p: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p);
    rng
}

/// Mean orbit length over `samples` uniform random starts in F_p^2.
pub fn ff_mean_length(map: &PlaneMapDef, p: u64, samples: usize, seed: u64, cap: Option<u64>) -> Result<FFStatsRow, FFError> {
    let fm = compile_mod(map, p)?;
    let cap = cap.unwrap_or(p * p);
    if cap == 0 {
        return Err(FFError::ZeroCap);
    }
    let samples = samples.max(1);
    let mut rng = rng_for(seed, p);
    let mut total = 0u64;
    let mut capped = false;
    for _ in 0..samples {
        let s0 = PlaneState::new(FpElem::new(rng.gen_range(0..p), p)?, FpElem::new(rng.gen_range(0..p), p)?);
        let r = orbit_length(&fm, map.is_invertible(), s0, cap);
        capped |= r.terminal == Terminal::CapReached;
        total += r.length;
    }
    let mean_length = total as f64 / samples as f64;
    Ok(FFStatsRow {
        map: map.id().to_string(),
        p,
        samples,
        seed,
        mean_length,
        normalized: mean_length / hw_bound(p, 1),
        flag: if capped { "cap".into() } else { String::new() },
    })
}

/// One row per prime, in increasing order of p.
pub fn ff_sweep(map: &PlaneMapDef, primes: &[u64], samples: usize, seed: u64, cap: Option<u64>) -> Result<Vec<FFStatsRow>, FFError> {
    if let Some(&bad) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(FFError::NotPrime(bad));
    }
    let mut sorted = primes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.par_iter().map(|&p| ff_mean_length(map, p, samples, seed, cap)).collect()
}
