use std::fmt;

use super::{ArithError, BigRat, Scalar};

/// Element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: BigRat,
    pub im: BigRat,
}

impl GaussRat {
    pub fn new(re: BigRat, im: BigRat) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRat) -> Self {
        GaussRat { re, im: BigRat::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::real(BigRat::from_int(n))
    }

    pub fn i() -> Self {
        GaussRat { re: BigRat::zero(), im: BigRat::one() }
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm(&self) -> BigRat {
        self.re.square().add(&self.im.square())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl From<BigRat> for GaussRat {
    fn from(q: BigRat) -> Self {
        GaussRat::real(q)
    }
}

impl Scalar for GaussRat {
    fn zero_like(&self) -> Self {
        GaussRat::default()
    }

    fn one_like(&self) -> Self {
        GaussRat::from_int(1)
    }

    fn from_i64_like(&self, n: i64) -> Self {
        GaussRat::from_int(n)
    }

    fn from_coeff(&self, c: &GaussRat) -> Result<Self, ArithError> {
        Ok(c.clone())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        GaussRat { re: self.re.add(&other.re), im: self.im.add(&other.im) }
    }

    fn sub(&self, other: &Self) -> Self {
        GaussRat { re: self.re.sub(&other.re), im: self.im.sub(&other.im) }
    }

    fn mul(&self, other: &Self) -> Self {
        GaussRat { re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)), im: self.re.mul(&other.im).add(&self.im.mul(&other.re)) }
    }

    fn neg(&self) -> Self {
        GaussRat { re: self.re.neg(), im: self.im.neg() }
    }

    fn inv(&self) -> Result<Self, ArithError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ArithError::ZeroInverse);
        }
        let ninv = n.inv()?;
        Ok(GaussRat { re: self.re.mul(&ninv), im: self.im.neg().mul(&ninv) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GaussRat {
        GaussRat::new(BigRat::new(a, b), BigRat::new(c, d))
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(GaussRat::i().square(), GaussRat::from_int(-1));
        assert_eq!(GaussRat::from_int(2).mul(&GaussRat::i()).inv().unwrap(), g(0, 1, -1, 2));
    }

    proptest! {
        #[test]
        fn field_axioms(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20,
                        e in -50i64..50, f in 1i64..20) {
            let x = g(a, b, c, d);
            let y = g(c, d, e, f);
            let z = g(e, f, a, b);
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            if !x.is_zero() {
                prop_assert_eq!(x.mul(&x.inv().unwrap()), x.one_like());
            }
        }
    }
}
