use std::fmt;

use super::{unipoly_gcd, ArithError, GaussRat, Scalar, UniPoly};

/// Element of F(t) in canonical form: gcd(num, den) = 1 and den monic.
#[derive(Clone, PartialEq)]
pub struct RatFunc<F: Scalar> {
    num: UniPoly<F>,
    den: UniPoly<F>,
}

impl<F: Scalar> fmt::Debug for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl<F: Scalar> RatFunc<F> {
    pub fn new(num: UniPoly<F>, den: UniPoly<F>) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::ZeroInverse);
        }
        let g = unipoly_gcd(&num, &den);
        let (n, d) = if g.is_constant() { (num, den) } else { (num.exact_div(&g)?, den.exact_div(&g)?) };
        Ok(Self::from_coprime(n, d))
    }

    /// Makes the denominator monic; inputs must already be coprime.
    fn from_coprime(num: UniPoly<F>, den: UniPoly<F>) -> Self {
        if num.is_zero() {
            return RatFunc { den: UniPoly::one(num.ctx()), num };
        }
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead == lead.one_like() {
            return RatFunc { num, den };
        }
        let inv = lead.inv().expect("nonzero leading coefficient");
        RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn from_poly(p: UniPoly<F>) -> Self {
        let one = UniPoly::one(p.ctx());
        RatFunc { num: p, den: one }
    }

    /// The rational function `t`.
    pub fn var(ctx: &F) -> Self {
        RatFunc::from_poly(UniPoly::var(ctx))
    }

    pub fn num(&self) -> &UniPoly<F> {
        &self.num
    }

    pub fn den(&self) -> &UniPoly<F> {
        &self.den
    }

    /// max(deg num, deg den), the degree of the rational map t -> self(t).
    pub fn degree(&self) -> usize {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    fn ctx(&self) -> &F {
        self.num.ctx()
    }
}

impl<F: Scalar> Scalar for RatFunc<F> {
    fn zero_like(&self) -> Self {
        RatFunc::from_poly(UniPoly::zero(self.ctx()))
    }

    fn one_like(&self) -> Self {
        RatFunc::from_poly(UniPoly::one(self.ctx()))
    }

    fn from_i64_like(&self, n: i64) -> Self {
        RatFunc::from_poly(UniPoly::constant(self.ctx().from_i64_like(n)))
    }

    fn from_coeff(&self, c: &GaussRat) -> Result<Self, ArithError> {
        Ok(RatFunc::from_poly(UniPoly::constant(self.ctx().from_coeff(c)?)))
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let g = unipoly_gcd(&self.den, &other.den);
        if g.is_constant() {
            let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
            return RatFunc::from_coprime(num, self.den.mul(&other.den));
        }
        let b = self.den.exact_div(&g).expect("gcd divides");
        let d = other.den.exact_div(&g).expect("gcd divides");
        let num = self.num.mul(&d).add(&other.num.mul(&b));
        let den = b.mul(&other.den);
        let h = unipoly_gcd(&num, &g);
        if h.is_constant() {
            RatFunc::from_coprime(num, den)
        } else {
            RatFunc::from_coprime(num.exact_div(&h).expect("gcd divides"), den.exact_div(&h).expect("gcd divides"))
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return self.zero_like();
        }
        let g1 = unipoly_gcd(&self.num, &other.den);
        let g2 = unipoly_gcd(&other.num, &self.den);
        let cancel = |p: &UniPoly<F>, g: &UniPoly<F>| if g.is_constant() { p.clone() } else { p.exact_div(g).expect("gcd divides") };
        let num = cancel(&self.num, &g1).mul(&cancel(&other.num, &g2));
        let den = cancel(&self.den, &g2).mul(&cancel(&other.den, &g1));
        RatFunc::from_coprime(num, den)
    }

    fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::ZeroInverse);
        }
        Ok(RatFunc::from_coprime(self.den.clone(), self.num.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{BigRat, FpElem};
    use proptest::prelude::*;

    fn q(cs: &[i64]) -> UniPoly<BigRat> {
        UniPoly::new(cs.iter().map(|&c| BigRat::from_int(c)).collect(), BigRat::zero())
    }

    #[test]
    fn normalizes_common_factors_and_monic_denominator() {
        // (x^2 - 1) / (2x - 2) = (x + 1)/2 → den monic: (x+1)/2 as ((1/2)x + 1/2) / 1
        let r = RatFunc::new(q(&[-1, 0, 1]), q(&[-2, 2])).unwrap();
        assert_eq!(r.den(), &q(&[1]));
        assert_eq!(r.num().coeffs(), &[BigRat::new(1, 2), BigRat::new(1, 2)]);
        assert!(RatFunc::new(q(&[1]), q(&[])).is_err());
    }

    #[test]
    fn tan_addition_in_function_field() {
        let t = RatFunc::var(&BigRat::zero());
        let one = t.one_like();
        let two_t = t.add(&t);
        let f2 = two_t.div(&one.sub(&t.square())).unwrap();
        assert_eq!(f2.num(), &q(&[0, -2]));
        assert_eq!(f2.den(), &q(&[-1, 0, 1]));
        assert_eq!(f2.degree(), 2);
    }

    proptest! {
        #[test]
        fn field_operations_stay_canonical(a in prop::collection::vec(-9i64..9, 1..5),
                                           b in prop::collection::vec(-9i64..9, 1..5),
                                           c in prop::collection::vec(-9i64..9, 1..5),
                                           d in prop::collection::vec(-9i64..9, 1..5)) {
            let p = 10007u64;
            let poly = |cs: &Vec<i64>| UniPoly::new(cs.iter().map(|&x| FpElem::from_i64(x, p).unwrap()).collect(),
                                                    FpElem::new(0, p).unwrap());
            prop_assume!(!poly(&b).is_zero() && !poly(&d).is_zero());
            let x = RatFunc::new(poly(&a), poly(&b)).unwrap();
            let y = RatFunc::new(poly(&c), poly(&d)).unwrap();
            for r in [x.add(&y), x.mul(&y), x.sub(&y)] {
                prop_assert!(unipoly_gcd(r.num(), r.den()).degree() == Some(0));
                prop_assert_eq!(r.den().leading().unwrap().residue(), 1);
            }
            // (x + y) - y = x
            prop_assert_eq!(x.add(&y).sub(&y), x.clone());
            if !y.is_zero() {
                prop_assert_eq!(x.mul(&y).div(&y).unwrap(), x);
            }
        }
    }
}
