use std::fmt;

use super::{ArithError, Scalar};

/// Dense univariate polynomial over a field, lowest degree first, with no
/// trailing zero coefficients. The zero polynomial has no coefficients;
/// `zero` keeps the field context so constants can still be built from it.
#[derive(Clone)]
pub struct UniPoly<F: Scalar> {
    coeffs: Vec<F>,
    zero: F,
}

impl<F: Scalar> PartialEq for UniPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<F: Scalar> fmt::Debug for UniPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c:?}"),
                1 => format!("({c:?})t"),
                _ => format!("({c:?})t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl<F: Scalar> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>, zero: F) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs, zero: zero.zero_like() }
    }

    pub fn zero(ctx: &F) -> Self {
        UniPoly { coeffs: Vec::new(), zero: ctx.zero_like() }
    }

    pub fn constant(c: F) -> Self {
        let zero = c.zero_like();
        UniPoly::new(vec![c], zero)
    }

    pub fn one(ctx: &F) -> Self {
        UniPoly::constant(ctx.one_like())
    }

    /// The polynomial `t`.
    pub fn var(ctx: &F) -> Self {
        UniPoly { coeffs: vec![ctx.zero_like(), ctx.one_like()], zero: ctx.zero_like() }
    }

    /// `a + b t`.
    pub fn linear(a: F, b: F) -> Self {
        let zero = a.zero_like();
        UniPoly::new(vec![a, b], zero)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn ctx(&self) -> &F {
        &self.zero
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with deg(0) read as 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        UniPoly::new(out, self.zero.clone())
    }

    pub fn neg(&self) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(Scalar::neg).collect(), zero: self.zero.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        UniPoly::new(F::poly_mul(&self.coeffs, &other.coeffs), self.zero.clone())
    }

    pub fn scale(&self, c: &F) -> Self {
        UniPoly::new(self.coeffs.iter().map(|a| a.mul(c)).collect(), self.zero.clone())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UniPoly::one(&self.zero);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs.iter().rev().fold(self.zero.clone(), |acc, c| acc.mul(x).add(c))
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Euclidean division: `self = q * d + r` with deg r < deg d.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), ArithError> {
        let Some(dl) = d.leading() else {
            return Err(ArithError::PolyDivisionByZero);
        };
        let dinv = dl.inv()?;
        let dn = d.coeffs.len();
        if self.coeffs.len() < dn {
            return Ok((UniPoly::zero(&self.zero), self.clone()));
        }
        let mut r = self.coeffs.clone();
        let mut q = vec![self.zero.clone(); r.len() - dn + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dn - 1];
            if top.is_zero() {
                continue;
            }
            let c = top.mul(&dinv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(dc));
            }
            q[k] = c;
        }
        r.truncate(dn - 1);
        Ok((UniPoly::new(q, self.zero.clone()), UniPoly::new(r, self.zero.clone())))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, ArithError> {
        let Some(dl) = d.leading() else {
            return Err(ArithError::PolyDivisionByZero);
        };
        let dinv = dl.inv()?;
        let dn = d.coeffs.len();
        let mut r = self.coeffs.clone();
        while r.len() >= dn {
            let top = r.pop().expect("nonempty");
            if !top.is_zero() {
                let c = top.mul(&dinv);
                let base = r.len() + 1 - dn;
                for (j, dc) in d.coeffs[..dn - 1].iter().enumerate() {
                    r[base + j] = r[base + j].sub(&c.mul(dc));
                }
            }
        }
        Ok(UniPoly::new(r, self.zero.clone()))
    }

    /// Quotient of an exact division; errors if the remainder is nonzero.
    pub fn exact_div(&self, d: &Self) -> Result<Self, ArithError> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(ArithError::FieldMismatch("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        match other.rem(self) {
            Ok(r) => r.is_zero(),
            Err(_) => other.is_zero(),
        }
    }

    /// Substitutes `t -> arg` (composition self(arg)).
    pub fn compose(&self, arg: &Self) -> Self {
        self.coeffs.iter().rev().fold(UniPoly::zero(&self.zero), |acc, c| acc.mul(arg).add(&UniPoly::constant(c.clone())))
    }

    pub fn map_coeffs<G: Scalar>(&self, zero: &G, f: impl Fn(&F) -> G) -> UniPoly<G> {
        UniPoly::new(self.coeffs.iter().map(f).collect(), zero.clone())
    }
}

/// Monic greatest common divisor; gcd(0, 0) = 0.
pub fn unipoly_gcd<F: Scalar>(p: &UniPoly<F>, q: &UniPoly<F>) -> UniPoly<F> {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return UniPoly::one(p.ctx());
    }
    if let Some(g) = F::poly_gcd_fast(p.coeffs(), q.coeffs()) {
        return UniPoly::new(g, p.ctx().clone());
    }
    let (mut a, mut b) = if p.coeffs.len() >= q.coeffs.len() { (p.monic(), q.monic()) } else { (q.monic(), p.monic()) };
    while !b.is_zero() {
        let r = a.rem(&b).expect("nonzero divisor").monic();
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::{BigRat, FpElem};
    use proptest::prelude::*;

    fn q(cs: &[i64]) -> UniPoly<BigRat> {
        UniPoly::new(cs.iter().map(|&c| BigRat::from_int(c)).collect(), BigRat::zero())
    }

    fn fp(cs: &[i64], p: u64) -> UniPoly<FpElem> {
        UniPoly::new(cs.iter().map(|&c| FpElem::from_i64(c, p).unwrap()).collect(), FpElem::new(0, p).unwrap())
    }

    #[test]
    fn gcd_examples() {
        // x^2 - 1 and x^2 - 2x + 1 share only the root x = 1
        assert_eq!(unipoly_gcd(&q(&[-1, 0, 1]), &q(&[1, -2, 1])), q(&[-1, 1]));
        let p = q(&[4, 0, 2]);
        assert_eq!(unipoly_gcd(&p, &UniPoly::zero(&BigRat::zero())), q(&[2, 0, 1]));
        // over F_5: x = -2 = 3 is a root of x^2 + 1
        assert_eq!(unipoly_gcd(&fp(&[1, 0, 1], 5), &fp(&[2, 1], 5)), fp(&[2, 1], 5));
        assert!(unipoly_gcd(&q(&[]), &q(&[])).is_zero());
    }

    #[test]
    fn degree_and_division() {
        let a = q(&[1, 2, 3]);
        let b = q(&[0, 1, 0, 5]);
        assert_eq!(a.mul(&b).degree(), Some(5));
        let (quo, rem) = a.mul(&b).add(&q(&[7])).div_rem(&b).unwrap();
        assert_eq!(quo, a);
        assert_eq!(rem, q(&[7]));
        assert_eq!(a.div_rem(&q(&[])), Err(ArithError::PolyDivisionByZero));
        assert_eq!(q(&[1, 1]).compose(&q(&[0, 0, 1])), q(&[1, 0, 1]));
    }

    #[test]
    fn modular_gcd_matches_euclid() {
        let f = q(&[-3, 1]).mul(&q(&[5, 0, 1])).mul(&q(&[1, 1]));
        let g = q(&[-3, 1]).mul(&q(&[1, 7])).mul(&q(&[1, 1]));
        assert_eq!(unipoly_gcd(&f, &g), q(&[-3, 1]).mul(&q(&[1, 1])));
        assert_eq!(unipoly_gcd(&q(&[5, 0, 1]), &q(&[1, 7])), q(&[1]));
        // large coefficients force several primes
        let big =
            UniPoly::new(vec![BigRat("123456789012345678901234567/3".parse::<rug::Rational>().unwrap()), BigRat::one()], BigRat::zero());
        let f = big.mul(&q(&[2, 3, 1])).mul(&big);
        let g = big.mul(&big).mul(&q(&[-7, 0, 4]));
        assert_eq!(unipoly_gcd(&f, &g), big.mul(&big).monic());
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-20i64..20, 0..=max_deg + 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn gcd_divides_both_over_q(a in arb_poly(5), b in arb_poly(5), c in arb_poly(3)) {
            let common = q(&c);
            let x = q(&a).mul(&common);
            let y = q(&b).mul(&common);
            let g = unipoly_gcd(&x, &y);
            if !g.is_zero() {
                prop_assert!(x.rem(&g).unwrap().is_zero());
                prop_assert!(y.rem(&g).unwrap().is_zero());
                if !common.is_zero() {
                    prop_assert!(common.divides(&g));
                }
            }
        }

        #[test]
        fn gcd_divides_both_over_fp(a in arb_poly(8), b in arb_poly(8), c in arb_poly(4)) {
            let p = 10007;
            let common = fp(&c, p);
            let x = fp(&a, p).mul(&common);
            let y = fp(&b, p).mul(&common);
            let g = unipoly_gcd(&x, &y);
            if !g.is_zero() {
                prop_assert!(x.rem(&g).unwrap().is_zero());
                prop_assert!(y.rem(&g).unwrap().is_zero());
                if !common.is_zero() {
                    prop_assert!(common.divides(&g));
                }
            }
        }
    }
}
