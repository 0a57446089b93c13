use std::cmp::Ordering;
use std::fmt;

use rug::float::Constant;
use rug::Float;

use super::{ArithError, BigRat, GaussRat, Scalar};

/// Binary floating-point number with an explicit working precision (bits).
///
/// Binary operations round to the larger of the two operand precisions.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct MPReal(pub Float);

impl MPReal {
    pub fn from_rat(bits: u32, q: &BigRat) -> Self {
        MPReal(Float::with_val(bits, &q.0))
    }

    pub fn from_f64(bits: u32, x: f64) -> Self {
        MPReal(Float::with_val(bits, x))
    }

    pub fn from_int(bits: u32, n: i64) -> Self {
        MPReal(Float::with_val(bits, n))
    }

    pub fn from_integer(bits: u32, n: &rug::Integer) -> Self {
        MPReal(Float::with_val(bits, n))
    }

    pub fn pi(bits: u32) -> Self {
        MPReal(Float::with_val(bits, Constant::Pi))
    }

    pub fn bits(&self) -> u32 {
        self.0.prec()
    }

    /// Same value rounded to `bits` of precision.
    pub fn with_bits(&self, bits: u32) -> Self {
        MPReal(Float::with_val(bits, &self.0))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Exact rational value of a finite float.
    pub fn to_rat(&self) -> Option<BigRat> {
        self.0.to_rational().map(BigRat)
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn abs(&self) -> Self {
        MPReal(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> Self {
        MPReal(self.0.clone().sqrt())
    }

    pub fn ln(&self) -> Self {
        MPReal(self.0.clone().ln())
    }

    pub fn tan(&self) -> Self {
        MPReal(self.0.clone().tan())
    }

    pub fn atan(&self) -> Self {
        MPReal(self.0.clone().atan())
    }

    pub fn cos(&self) -> Self {
        MPReal(self.0.clone().cos())
    }

    pub fn acos(&self) -> Self {
        MPReal(self.0.clone().acos())
    }

    /// Multiplication by 2^n, exact.
    pub fn mul_pow2(&self, n: i32) -> Self {
        let mut x = self.0.clone();
        if n >= 0 {
            x <<= n as u32;
        } else {
            x >>= (-n) as u32;
        }
        MPReal(x)
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Representative of `self` modulo `m` in [-m/2, m/2].
    pub fn centered_mod(&self, m: &MPReal) -> Self {
        let prec = self.bits().max(m.bits());
        let q = Float::with_val(prec, &self.0 / &m.0).round();
        MPReal(Float::with_val(prec, &self.0 - Float::with_val(prec, &q * &m.0)))
    }

    /// Scientific notation with `digits` significant digits.
    pub fn to_sci(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    pub fn cmp_abs(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp_abs(&other.0)
    }
}

impl fmt::Debug for MPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}b]", self.to_sci(20), self.bits())
    }
}

impl fmt::Display for MPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci(20))
    }
}

impl Scalar for MPReal {
    fn zero_like(&self) -> Self {
        MPReal(Float::new(self.bits()))
    }

    fn one_like(&self) -> Self {
        MPReal(Float::with_val(self.bits(), 1))
    }

    fn from_i64_like(&self, n: i64) -> Self {
        MPReal(Float::with_val(self.bits(), n))
    }

    fn from_coeff(&self, c: &GaussRat) -> Result<Self, ArithError> {
        if !c.im.is_zero() {
            return Err(ArithError::FieldMismatch(c.to_string()));
        }
        Ok(MPReal(Float::with_val(self.bits(), &c.re.0)))
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        MPReal(Float::with_val(self.bits().max(other.bits()), &self.0 + &other.0))
    }

    fn sub(&self, other: &Self) -> Self {
        MPReal(Float::with_val(self.bits().max(other.bits()), &self.0 - &other.0))
    }

    fn mul(&self, other: &Self) -> Self {
        MPReal(Float::with_val(self.bits().max(other.bits()), &self.0 * &other.0))
    }

    fn neg(&self) -> Self {
        MPReal(Float::with_val(self.bits(), -&self.0))
    }

    fn inv(&self) -> Result<Self, ArithError> {
        if self.0.is_zero() {
            return Err(ArithError::ZeroInverse);
        }
        Ok(MPReal(Float::with_val(self.bits(), self.0.recip_ref())))
    }

    fn div(&self, other: &Self) -> Result<Self, ArithError> {
        if other.0.is_zero() {
            return Err(ArithError::ZeroInverse);
        }
        Ok(MPReal(Float::with_val(self.bits().max(other.bits()), &self.0 / &other.0)))
    }

    fn square(&self) -> Self {
        MPReal(Float::with_val(self.bits(), self.0.square_ref()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// 2^k units in the last place of x at its own precision.
    fn ulp_pow2(x: &MPReal, k: i32) -> MPReal {
        let e = x.0.get_exp().unwrap_or(0);
        MPReal::from_int(64, 1).mul_pow2(e + k - x.bits() as i32)
    }

    #[test]
    fn pi_and_atan_agree() {
        let four_atan_one = MPReal::from_int(300, 1).atan().mul_pow2(2);
        let diff = four_atan_one.sub(&MPReal::pi(300)).abs();
        assert!(diff <= ulp_pow2(&MPReal::pi(300), 2));
    }

    #[test]
    fn centered_mod_folds() {
        let pi = MPReal::pi(128);
        let x = pi.mul(&MPReal::from_int(128, 7)).add(&MPReal::from_f64(128, 0.25));
        let r = x.centered_mod(&pi);
        assert!((r.to_f64() - 0.25).abs() < 1e-30);
    }

    proptest! {
        // Relative error of each operation at B bits is checked against a 2B-bit recomputation.
        #[test]
        fn arithmetic_error_bounded_by_precision(n1 in -10_000i64..10_000, d1 in 1i64..997,
                                                 n2 in -10_000i64..10_000, d2 in 1i64..997,
                                                 bits in 24u32..300) {
            let a = BigRat::new(n1, d1);
            let b = BigRat::new(n2, d2);
            let lo = (MPReal::from_rat(bits, &a), MPReal::from_rat(bits, &b));
            let hi = (MPReal::from_rat(2 * bits, &a), MPReal::from_rat(2 * bits, &b));
            let mut pairs = vec![
                (lo.0.add(&lo.1), hi.0.add(&hi.1)),
                (lo.0.mul(&lo.1), hi.0.mul(&hi.1)),
            ];
            if !b.is_zero() {
                pairs.push((lo.0.div(&lo.1).unwrap(), hi.0.div(&hi.1).unwrap()));
            }
            for (x, y) in pairs {
                let bound = y.abs().mul_pow2(2 - bits as i32);
                let diff = x.with_bits(2 * bits).sub(&y).abs();
                // Sums may cancel: allow the absolute error of the inputs as well.
                let input_scale = hi.0.abs().max(hi.1.abs()).mul_pow2(2 - bits as i32);
                prop_assert!(diff <= bound || diff <= input_scale);
            }
        }

        #[test]
        fn transcendental_functions_within_four_ulp(n in -40_000i64..40_000, d in 1i64..1000,
                                                    bits in 53u32..400) {
            let q = BigRat::new(n, d);
            let x = MPReal::from_rat(bits, &q);
            let x_hi = x.with_bits(2 * bits + 64);
            let checks = [
                (x.tan(), x_hi.tan()),
                (x.atan(), x_hi.atan()),
                (x.cos(), x_hi.cos()),
            ];
            for (lo, hi) in checks {
                if lo.is_zero() {
                    continue;
                }
                let diff = lo.with_bits(2 * bits + 64).sub(&hi).abs();
                prop_assert!(diff <= ulp_pow2(&lo, 2), "diff {:?} at {} bits", diff, bits);
            }
            let c = MPReal::from_rat(bits, &BigRat::new(n.rem_euclid(2001) - 1000, 1000));
            let lo = c.acos();
            let hi = c.with_bits(2 * bits + 64).acos();
            let diff = lo.with_bits(2 * bits + 64).sub(&hi).abs();
            prop_assert!(lo.is_zero() || diff <= ulp_pow2(&lo, 2));
        }
    }
}
