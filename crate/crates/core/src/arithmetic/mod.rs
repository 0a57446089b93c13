//! Scalar fields and univariate polynomial arithmetic.
//!
//! Every map in the catalog is evaluated through the [`Scalar`] trait, so the
//! same formulas run over exact rationals, Gaussian rationals, prime fields,
//! MPFR floats and rational functions of a line parameter.

mod bigrat;
mod fp;
mod gauss;
mod modgcd;
mod mpreal;
mod poly;
mod ratfunc;

pub use bigrat::{height, BigRat};
pub use fp::{is_prime, primes_between, FpElem, MAX_MODULUS};
pub use gauss::GaussRat;
pub use mpreal::MPReal;
pub use poly::{unipoly_gcd, UniPoly};
pub use ratfunc::RatFunc;

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("height of zero is undefined")]
    ZeroHeight,
    #[error("polynomial division by zero")]
    PolyDivisionByZero,
    #[error("coefficient {0} is not representable in this field")]
    FieldMismatch(String),
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound")]
    ModulusTooLarge(u64),
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

/// A commutative field element that carries its own context (modulus,
/// precision), so constants are always built "like" an existing element.
#[allow(clippy::wrong_self_convention)]
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_i64_like(&self, n: i64) -> Self;
    /// Embeds a catalog coefficient. Real fields reject non-real values and
    /// prime fields reject denominators divisible by the modulus.
    fn from_coeff(&self, c: &GaussRat) -> Result<Self, ArithError>;

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ArithError>;

    fn div(&self, other: &Self) -> Result<Self, ArithError> {
        Ok(self.mul(&other.inv()?))
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// Dense product of coefficient slices (low degree first). Fields with a
    /// faster kernel override this.
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let zero = a[0].zero_like();
        let mut out = vec![zero; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    }

    /// Monic gcd of two polynomials of positive degree by a field-specific
    /// algorithm, or `None` to fall back to Euclid.
    fn poly_gcd_fast(_a: &[Self], _b: &[Self]) -> Option<Vec<Self>> {
        None
    }

    /// A scalar that makes the coefficients jointly small when multiplied in
    /// (for Q: the inverse of their rational content). `None` if pointless.
    fn content_scale(_coeffs: &[&[Self]]) -> Option<Self> {
        None
    }
}
