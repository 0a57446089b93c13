use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::fp::FpElem;
use super::{ArithError, GaussRat, Scalar};

/// Exact rational number, always in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigRat(pub Rational);

impl BigRat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        BigRat(Rational::from((num, den)))
    }

    pub fn from_int(n: i64) -> Self {
        BigRat(Rational::from(n))
    }

    pub fn zero() -> Self {
        BigRat(Rational::new())
    }

    pub fn one() -> Self {
        BigRat::from_int(1)
    }

    pub fn numer(&self) -> &Integer {
        self.0.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        *self.0.denom() == 1
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    /// Image in F_p, or `None` when p divides the denominator.
    pub fn reduce_mod(&self, p: u64) -> Option<u64> {
        let pm = Integer::from(p);
        let d = Integer::from(self.0.denom() % &pm).to_u64()?;
        if d == 0 {
            return None;
        }
        let n = Integer::from(self.0.numer() % &pm);
        let n = if n < 0 { n + &pm } else { n };
        let n = n.to_u64()?;
        let dinv = FpElem::new(d, p).ok()?.inv().ok()?;
        Some(FpElem::new(n, p).ok()?.mul(&dinv).residue())
    }
}

/// max(bit-length(numerator), bit-length(denominator)).
pub fn height(q: &BigRat) -> Result<u64, ArithError> {
    if q.0 == 0 {
        return Err(ArithError::ZeroHeight);
    }
    let n = q.0.numer().significant_bits();
    let d = q.0.denom().significant_bits();
    Ok(u64::from(n.max(d)))
}

impl fmt::Debug for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for BigRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for BigRat {
    fn from(n: i64) -> Self {
        BigRat::from_int(n)
    }
}

impl From<Rational> for BigRat {
    fn from(q: Rational) -> Self {
        BigRat(q)
    }
}

impl FromStr for BigRat {
    type Err = ArithError;

    /// Accepts `p/q`, plain integers and decimals such as `-0.125` or `7e-3`,
    /// all converted exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ArithError::Parse(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: Integer = n.trim().parse().map_err(|_| err())?;
            let d: Integer = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(BigRat(Rational::from((n, d))));
        }
        let (mantissa, exp) = match t.find(['e', 'E']) {
            Some(i) => {
                let e: i32 = t[i + 1..].parse().map_err(|_| err())?;
                (&t[..i], e)
            }
            None => (t, 0),
        };
        let (neg, digits) = match mantissa.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
        };
        let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(err());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let all: String = format!("{int_part}{frac_part}");
        let mut num: Integer = if all.is_empty() { Integer::new() } else { all.parse().map_err(|_| err())? };
        if neg {
            num = -num;
        }
        let scale = exp - frac_part.len() as i32;
        let ten = Integer::from(10);
        let q = if scale >= 0 {
            Rational::from(num * ten.clone().pow(scale as u32))
        } else {
            Rational::from((num, ten.clone().pow((-scale) as u32)))
        };
        Ok(BigRat(q))
    }
}

impl Scalar for BigRat {
    fn zero_like(&self) -> Self {
        BigRat::zero()
    }

    fn one_like(&self) -> Self {
        BigRat::one()
    }

    fn from_i64_like(&self, n: i64) -> Self {
        BigRat::from_int(n)
    }

    fn from_coeff(&self, c: &GaussRat) -> Result<Self, ArithError> {
        if !c.im.is_zero() {
            return Err(ArithError::FieldMismatch(c.to_string()));
        }
        Ok(c.re.clone())
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn add(&self, other: &Self) -> Self {
        BigRat(Rational::from(&self.0 + &other.0))
    }

    fn sub(&self, other: &Self) -> Self {
        BigRat(Rational::from(&self.0 - &other.0))
    }

    fn mul(&self, other: &Self) -> Self {
        BigRat(Rational::from(&self.0 * &other.0))
    }

    fn neg(&self) -> Self {
        BigRat(Rational::from(-&self.0))
    }

    fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroInverse);
        }
        Ok(BigRat(Rational::from(self.0.recip_ref())))
    }

    fn square(&self) -> Self {
        BigRat(Rational::from(self.0.square_ref()))
    }

    fn pow(&self, e: u32) -> Self {
        BigRat(Rational::from((&self.0).pow(e)))
    }

    fn content_scale(coeffs: &[&[Self]]) -> Option<Self> {
        let mut num = Integer::new();
        let mut den = Integer::from(1);
        for c in coeffs.iter().flat_map(|s| s.iter()) {
            num.gcd_mut(c.numer());
            den.lcm_mut(c.denom());
        }
        if num == 0 || (num == 1 && den == 1) {
            return None;
        }
        Some(BigRat(Rational::from((den, num))))
    }

    fn poly_gcd_fast(a: &[Self], b: &[Self]) -> Option<Vec<Self>> {
        Some(super::modgcd::rational_poly_gcd(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn ring_laws_and_normalization(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000,
                                       d in 1i64..1000, e in -1000i64..1000, f in 1i64..1000) {
            let (x, y, z) = (BigRat::new(a, b), BigRat::new(c, d), BigRat::new(e, f));
            prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
            prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            // re-normalizing an already reduced value is the identity
            let again = BigRat(Rational::from((x.numer().clone(), x.denom().clone())));
            prop_assert_eq!(&again, &x);
            prop_assert!(*x.denom() > 0);
            prop_assert_eq!(Integer::from(x.numer().gcd_ref(x.denom())), 1);
        }
    }

    #[test]
    fn height_examples() {
        assert_eq!(height(&BigRat::new(22, 7)).unwrap(), 5);
        assert_eq!(height(&BigRat::one()).unwrap(), 1);
        assert_eq!(height(&BigRat::new(-3, 16)).unwrap(), 5);
        assert_eq!(height(&BigRat::zero()), Err(ArithError::ZeroHeight));
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!("3/6".parse::<BigRat>().unwrap(), BigRat::new(1, 2));
        assert_eq!("-0.125".parse::<BigRat>().unwrap(), BigRat::new(-1, 8));
        assert_eq!("0.7".parse::<BigRat>().unwrap(), BigRat::new(7, 10));
        assert_eq!("7e-3".parse::<BigRat>().unwrap(), BigRat::new(7, 1000));
        assert_eq!("12".parse::<BigRat>().unwrap(), BigRat::from_int(12));
        assert_eq!("2.5E2".parse::<BigRat>().unwrap(), BigRat::from_int(250));
        assert!("1/0".parse::<BigRat>().is_err());
        assert!("abc".parse::<BigRat>().is_err());
        assert!(".".parse::<BigRat>().is_err());
    }

    #[test]
    fn reduce_mod_matches_inverse() {
        let q = BigRat::new(-3, 4);
        let r = q.reduce_mod(7).unwrap();
        // 4 * r = -3 mod 7
        assert_eq!((4 * r) % 7, 4);
        assert_eq!(BigRat::new(1, 7).reduce_mod(7), None);
    }
}
