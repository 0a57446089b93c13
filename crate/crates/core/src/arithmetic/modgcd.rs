//! Modular gcd of rational polynomials.
//!
//! Euclid's algorithm over Q suffers from coefficient swell, so gcds are
//! computed modulo word-size primes and lifted by Chinese remaindering
//! until the lift stabilises and divides both inputs.

use rug::{Integer, Rational};

use super::fp::{is_prime, FpElem, MAX_MODULUS};
use super::poly::{unipoly_gcd, UniPoly};
use super::{BigRat, Scalar};

/// Primitive integer polynomial with the same roots as `a`.
fn primitive_integer(a: &[BigRat]) -> Vec<Integer> {
    let mut lcm = Integer::from(1);
    for c in a {
        lcm.lcm_mut(c.denom());
    }
    let ints: Vec<Integer> = a.iter().map(|c| c.numer() * Integer::from(&lcm / c.denom())).collect();
    let mut content = Integer::new();
    for c in &ints {
        content.gcd_mut(c);
    }
    ints.into_iter().map(|c| c.div_exact(&content)).collect()
}

fn reduce(a: &[Integer], p: u64) -> UniPoly<FpElem> {
    let pm = Integer::from(p);
    let coeffs = a
        .iter()
        .map(|c| {
            let r = Integer::from(c.mod_u(p as u32));
            debug_assert!(r < pm);
            FpElem::new_unchecked(r.to_u64().expect("residue below p"), p)
        })
        .collect();
    UniPoly::new(coeffs, FpElem::new_unchecked(0, p))
}

/// Primes below 2^32 in decreasing order.
fn primes() -> impl Iterator<Item = u64> {
    (1..MAX_MODULUS).rev().step_by(2).filter(|&n| is_prime(n))
}

fn symmetric(c: &Integer, m: &Integer, half: &Integer) -> Integer {
    if c > half {
        Integer::from(c - m)
    } else {
        c.clone()
    }
}

fn divides(g: &UniPoly<BigRat>, a: &UniPoly<BigRat>) -> bool {
    a.rem(g).map(|r| r.is_zero()).unwrap_or(false)
}

/// Monic gcd over Q of two polynomials of positive degree.
pub(crate) fn rational_poly_gcd(a: &[BigRat], b: &[BigRat]) -> Vec<BigRat> {
    let (ai, bi) = (primitive_integer(a), primitive_integer(b));
    let lc_a = ai.last().expect("nonzero").clone();
    let lc_b = bi.last().expect("nonzero").clone();
    let gamma = Integer::from(lc_a.gcd_ref(&lc_b));
    let qa = UniPoly::new(a.to_vec(), BigRat::zero());
    let qb = UniPoly::new(b.to_vec(), BigRat::zero());

    let mut modulus = Integer::from(1);
    let mut acc: Vec<Integer> = Vec::new();
    let mut degree = usize::MAX;
    let mut last_lift: Option<Vec<Integer>> = None;
    for p in primes() {
        if lc_a.is_divisible_u(p as u32) || lc_b.is_divisible_u(p as u32) {
            continue;
        }
        let g = unipoly_gcd(&reduce(&ai, p), &reduce(&bi, p));
        let d = g.degree().expect("inputs are nonzero mod p");
        if d == 0 {
            return vec![BigRat::one()];
        }
        if d > degree {
            continue;
        }
        // scale the monic image so its leading coefficient is gamma mod p
        let gp = FpElem::new_unchecked(Integer::from(gamma.mod_u(p as u32)).to_u64().expect("small"), p);
        let image: Vec<u64> = g.coeffs().iter().map(|c| c.mul(&gp).residue()).collect();
        if d < degree {
            degree = d;
            modulus = Integer::from(p);
            acc = image.iter().map(|&r| Integer::from(r)).collect();
            last_lift = None;
        } else {
            // x = acc + modulus * ((r - acc) * modulus^-1 mod p)
            let m_inv =
                FpElem::new_unchecked(Integer::from(modulus.mod_u(p as u32)).to_u64().expect("small"), p).inv().expect("distinct primes");
            for (x, &r) in acc.iter_mut().zip(&image) {
                let xr = Integer::from(x.mod_u(p as u32)).to_u64().expect("small");
                let delta = FpElem::new_unchecked(r, p).sub(&FpElem::new_unchecked(xr, p)).mul(&m_inv);
                *x += Integer::from(&modulus * delta.residue());
            }
            modulus *= p;
        }
        let half = Integer::from(&modulus >> 1);
        let lift: Vec<Integer> = acc.iter().map(|c| symmetric(c, &modulus, &half)).collect();
        if last_lift.as_ref() == Some(&lift) {
            let cand = UniPoly::new(lift.iter().map(|c| BigRat(Rational::from(c))).collect(), BigRat::zero()).monic();
            if divides(&cand, &qa) && divides(&cand, &qb) {
                return cand.coeffs().to_vec();
            }
        }
        last_lift = Some(lift);
    }
    unreachable!("ran out of primes below 2^32")
}
