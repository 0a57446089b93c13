//! Four-variable maps built on the Weierstrass addition law.
//!
//! With `x_n = p(omega_n)`, `y_n = p'(omega_n)` on `y^2 = 4x^3 - g2 x - g3`,
//! the recurrence `omega_{n+1} = k omega_n - omega_{n-1}` becomes
//! `P_{n+1} = [k]P_n - P_{n-1}`. The curve is fixed by the initial pair of
//! points and `g2` enters the multiplication formulas through
//! `z = p'' = 6x^2 - g2/2`. Everything is generic over the scalar field;
//! heights only make sense over Q.

use thiserror::Error;

use crate::arithmetic::{height, BigRat, MPReal, Scalar};
use crate::degree_growth::{ls_slope, HeightFit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllError {
    #[error("points share the abscissa; g2, g3 are not determined")]
    CoincidentAbscissae,
    #[error("point of order two: multiple lies at infinity")]
    TwoTorsion,
    #[error("12xy^2 - z^2 vanishes: triple lies at infinity")]
    DegenerateDenominator,
    #[error("x_(n-1) equals f_k(x_n, y_n): addition degenerates")]
    AdditionDegenerate,
    #[error("multiplier k = {0} is not supported (k = 2 or 3)")]
    UnsupportedK(u32),
    #[error("need at least {needed} terms, got {got}")]
    InsufficientData { needed: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveParams<S = BigRat> {
    pub g2: S,
    pub g3: S,
}

impl<S: Scalar> CurveParams<S> {
    /// `g2^3 - 27 g3^2`; zero means a singular cubic.
    pub fn discriminant(&self) -> S {
        self.g2.pow(3).sub(&self.g3.from_i64_like(27).mul(&self.g3.square()))
    }

    pub fn is_degenerate(&self) -> bool {
        self.discriminant().is_zero()
    }

    /// `4x^3 - g2 x - g3`.
    pub fn rhs(&self, x: &S) -> S {
        x.from_i64_like(4).mul(&x.pow(3)).sub(&self.g2.mul(x)).sub(&self.g3)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ECPoint<S = BigRat> {
    pub x: S,
    pub y: S,
}

impl ECPoint<BigRat> {
    pub fn ints(x: i64, y: i64) -> Self {
        ECPoint { x: BigRat::from_int(x), y: BigRat::from_int(y) }
    }
}

impl<S: Scalar> ECPoint<S> {
    pub fn new(x: S, y: S) -> Self {
        ECPoint { x, y }
    }

    pub fn on_curve(&self, c: &CurveParams<S>) -> bool {
        self.y.square() == c.rhs(&self.x)
    }

    pub fn neg(&self) -> Self {
        ECPoint { x: self.x.clone(), y: self.y.neg() }
    }

    /// The same point over another field, e.g. reduced modulo a prime.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> Option<T>) -> Option<ECPoint<T>> {
        Some(ECPoint { x: f(&self.x)?, y: f(&self.y)? })
    }
}

/// `(P_{n-1}, P_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EllState<S = BigRat> {
    pub prev: ECPoint<S>,
    pub curr: ECPoint<S>,
}

impl<S: Scalar> EllState<S> {
    pub fn new(prev: ECPoint<S>, curr: ECPoint<S>) -> Self {
        EllState { prev, curr }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> Option<T>) -> Option<EllState<T>> {
        Some(EllState { prev: self.prev.map(&f)?, curr: self.curr.map(&f)? })
    }
}

impl EllState<BigRat> {
    /// Largest height among the four coordinates (zeros are skipped).
    pub fn height(&self) -> u64 {
        [&self.prev.x, &self.prev.y, &self.curr.x, &self.curr.y].iter().filter_map(|c| height(c).ok()).max().unwrap_or(0)
    }
}

/// `(g2, g3)` of the unique curve `y^2 = 4x^3 - g2 x - g3` through both points.
pub fn curve_from_states<S: Scalar>(s: &EllState<S>) -> Result<CurveParams<S>, EllError> {
    let (x0, y0, x1, y1) = (&s.prev.x, &s.prev.y, &s.curr.x, &s.curr.y);
    let dx = x1.sub(x0);
    if dx.is_zero() {
        return Err(EllError::CoincidentAbscissae);
    }
    let four = x0.from_i64_like(4);
    let g2 = y0.square().sub(&y1.square()).div(&dx).expect("dx != 0").add(&four.mul(&x0.square().add(&x1.mul(x0)).add(&x1.square())));
    let g3 = x0.mul(&y1.square()).sub(&x1.mul(&y0.square())).div(&dx).expect("dx != 0").sub(&four.mul(x1).mul(x0).mul(&x0.add(x1)));
    Ok(CurveParams { g2, g3 })
}

fn z_of<S: Scalar>(p: &ECPoint<S>, g2: &S) -> S {
    let half = g2.from_i64_like(2).inv().expect("characteristic is not 2");
    p.x.from_i64_like(6).mul(&p.x.square()).sub(&g2.mul(&half))
}

/// `2P`: `f_2 = -2x + z^2/(4y^2)`, `h_2 = -y + 3xz/y - z^3/(4y^3)`.
pub fn wp_double<S: Scalar>(p: &ECPoint<S>, g2: &S) -> Result<ECPoint<S>, EllError> {
    if p.y.is_zero() {
        return Err(EllError::TwoTorsion);
    }
    let (x, y) = (&p.x, &p.y);
    let z = z_of(p, g2);
    let four = x.from_i64_like(4);
    let f = z.square().div(&four.mul(&y.square())).expect("y != 0").sub(&x.add(x));
    let h = x.from_i64_like(3).mul(x).mul(&z).div(y).expect("y != 0").sub(y).sub(&z.pow(3).div(&four.mul(&y.pow(3))).expect("y != 0"));
    Ok(ECPoint::new(f, h))
}

/// `3P` with `D = 12xy^2 - z^2`, `A = 12xy^2 z - 4y^4 - z^3`,
/// `B = 12xy^2 z - 8y^4 - z^3`:
/// `f_3 = x - 4y^2 A / D^2`, `h_3 = -y - 4y A B / D^3`.
pub fn wp_triple<S: Scalar>(p: &ECPoint<S>, g2: &S) -> Result<ECPoint<S>, EllError> {
    if p.y.is_zero() {
        return Err(EllError::TwoTorsion);
    }
    let (x, y) = (&p.x, &p.y);
    let z = z_of(p, g2);
    let y2 = y.square();
    let xy2_12 = x.from_i64_like(12).mul(x).mul(&y2);
    let d = xy2_12.sub(&z.square());
    if d.is_zero() {
        return Err(EllError::DegenerateDenominator);
    }
    let four = x.from_i64_like(4);
    let y4 = y2.square();
    let base = xy2_12.mul(&z).sub(&z.pow(3));
    let a = base.sub(&four.mul(&y4));
    let b = base.sub(&x.from_i64_like(8).mul(&y4));
    let d2 = d.square();
    let f = x.sub(&four.mul(&y2).mul(&a).div(&d2).expect("d != 0"));
    let h = y.neg().sub(&four.mul(y).mul(&a).mul(&b).div(&d2.mul(&d)).expect("d != 0"));
    Ok(ECPoint::new(f, h))
}

pub fn wp_multiple<S: Scalar>(p: &ECPoint<S>, k: u32, g2: &S) -> Result<ECPoint<S>, EllError> {
    match k {
        2 => wp_double(p, g2),
        3 => wp_triple(p, g2),
        _ => Err(EllError::UnsupportedK(k)),
    }
}

/// `[k]P - R` by the chord through `[k]P` and `-R`.
fn k_times_minus<S: Scalar>(p: &ECPoint<S>, r: &ECPoint<S>, k: u32, g2: &S) -> Result<ECPoint<S>, EllError> {
    let kp = wp_multiple(p, k, g2)?;
    let (f, h) = (&kp.x, &kp.y);
    let (xr, yr) = (&r.x, &r.y);
    let dx = f.sub(xr);
    if dx.is_zero() {
        return Err(EllError::AdditionDegenerate);
    }
    let m = h.add(yr).div(&dx).expect("dx != 0");
    let x_new = m.square().div(&f.from_i64_like(4)).expect("4 != 0").sub(f).sub(xr);
    // y = x (h + y') / (x' - f) - (f y' + h x') / (x' - f)
    let neg_dx = dx.neg();
    let y_new = x_new.mul(&h.add(yr)).sub(&f.mul(yr).add(&h.mul(xr))).div(&neg_dx).expect("dx != 0");
    Ok(ECPoint::new(x_new, y_new))
}

/// `(P_{n-1}, P_n) -> (P_n, [k]P_n - P_{n-1})`.
pub fn ell_step<S: Scalar>(s: &EllState<S>, k: u32, curve: &CurveParams<S>) -> Result<EllState<S>, EllError> {
    let next = k_times_minus(&s.curr, &s.prev, k, &curve.g2)?;
    Ok(EllState::new(s.curr.clone(), next))
}

/// `(P_{n-1}, P_n) -> ([k]P_{n-1} - P_n, P_{n-1})`, the time-reversed step.
pub fn ell_backward<S: Scalar>(s: &EllState<S>, k: u32, curve: &CurveParams<S>) -> Result<EllState<S>, EllError> {
    let before = k_times_minus(&s.prev, &s.curr, k, &curve.g2)?;
    Ok(EllState::new(before, s.prev.clone()))
}

/// `((y_{n-1} + y_n) / (x_n - x_{n-1}))^2 - 4 (x_n + x_{n-1})`.
pub fn invariant_c<S: Scalar>(s: &EllState<S>) -> Result<S, EllError> {
    let dx = s.curr.x.sub(&s.prev.x);
    if dx.is_zero() {
        return Err(EllError::CoincidentAbscissae);
    }
    let r = s.prev.y.add(&s.curr.y).div(&dx).expect("dx != 0");
    Ok(r.square().sub(&dx.from_i64_like(4).mul(&s.curr.x.add(&s.prev.x))))
}

/// Orbit `s_0 .. s_n` on the curve through `s0`.
pub fn ell_orbit<S: Scalar>(k: u32, s0: &EllState<S>, n: usize) -> Result<Vec<EllState<S>>, EllError> {
    let curve = curve_from_states(s0)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(s0.clone());
    for _ in 0..n {
        let next = ell_step(out.last().expect("nonempty"), k, &curve)?;
        out.push(next);
    }
    Ok(out)
}

/// Heights of the exact orbit and the least-squares slope of their logarithm
/// over `n in [N/2, N]`.
pub fn ell_height_entropy(k: u32, s0: &EllState, n: usize) -> Result<HeightFit, EllError> {
    if n == 0 {
        return Err(EllError::InsufficientData { needed: 1, got: 0 });
    }
    let orbit = ell_orbit(k, s0, n)?;
    let heights: Vec<(usize, u64)> = orbit.iter().enumerate().map(|(i, s)| (i, s.height())).collect();
    let tail: Vec<(f64, MPReal)> =
        heights.iter().filter(|(i, _)| *i >= n / 2).map(|(i, h)| (*i as f64, MPReal::from_int(256, *h as i64).ln())).collect();
    if tail.len() < 2 {
        return Err(EllError::InsufficientData { needed: 2, got: tail.len() });
    }
    Ok(HeightFit { slope: ls_slope(&tail), heights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Chord-tangent group law on y^2 = 4x^3 - g2 x - g3; `None` is the point at infinity.
    mod oracle {
        use super::*;

        pub fn add(p: &Option<ECPoint>, q: &Option<ECPoint>, g2: &BigRat) -> Option<ECPoint> {
            let (Some(p), Some(q)) = (p, q) else { return p.clone().or_else(|| q.clone()) };
            let slope = if p.x != q.x {
                q.y.sub(&p.y).div(&q.x.sub(&p.x)).unwrap()
            } else if p.y == q.y && !p.y.is_zero() {
                BigRat::from_int(12).mul(&p.x.square()).sub(g2).div(&p.y.add(&p.y)).unwrap()
            } else {
                return None;
            };
            let x3 = slope.square().div(&BigRat::from_int(4)).unwrap().sub(&p.x).sub(&q.x);
            let y3 = p.y.add(&slope.mul(&x3.sub(&p.x))).neg();
            Some(ECPoint::new(x3, y3))
        }

        pub fn mul(p: &ECPoint, k: i64, g2: &BigRat) -> Option<ECPoint> {
            let base = if k < 0 { p.neg() } else { p.clone() };
            let mut acc = None;
            for _ in 0..k.abs() {
                acc = add(&acc, &Some(base.clone()), g2);
            }
            acc
        }
    }

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n, d)
    }

    /// Two integer points and the curve through them.
    fn random_state(x0: i64, y0: i64, x1: i64, y1: i64) -> Option<(EllState, CurveParams)> {
        let s = EllState::new(ECPoint::ints(x0, y0), ECPoint::ints(x1, y1));
        let c = curve_from_states(&s).ok()?;
        (!c.is_degenerate() && y0 != 0 && y1 != 0).then_some((s, c))
    }

    #[test]
    fn curve_examples() {
        let s = EllState::new(ECPoint::ints(0, 1), ECPoint::ints(1, 2));
        let c = curve_from_states(&s).unwrap();
        assert_eq!(c, CurveParams { g2: q(1, 1), g3: q(-1, 1) });
        assert!(s.prev.on_curve(&c) && s.curr.on_curve(&c));
        let c = curve_from_states(&EllState::new(ECPoint::ints(0, 0), ECPoint::ints(1, 0))).unwrap();
        assert_eq!(c, CurveParams { g2: q(4, 1), g3: q(0, 1) });
        let same = EllState::new(ECPoint::ints(2, 3), ECPoint::ints(2, 3));
        assert_eq!(curve_from_states(&same), Err(EllError::CoincidentAbscissae));
        let cusp = CurveParams { g2: q(0, 1), g3: q(0, 1) };
        assert!(cusp.is_degenerate());
    }

    #[test]
    fn doubling_and_tripling_examples() {
        let p = ECPoint::ints(1, 2);
        let g2 = q(1, 1);
        let c = CurveParams { g2: g2.clone(), g3: q(-1, 1) };
        let two = wp_double(&p, &g2).unwrap();
        assert_eq!(two, ECPoint::new(q(-7, 64), q(269, 256)));
        assert!(two.on_curve(&c));
        assert_eq!(q(269, 256).square(), q(72361, 65536));
        let three = wp_triple(&p, &g2).unwrap();
        assert_eq!(three, ECPoint::new(q(-3567, 5041), q(-192886, 357911)));
        assert_eq!(Some(three), oracle::mul(&p, 3, &g2));
        assert_eq!(wp_double(&ECPoint::ints(1, 0), &q(4, 1)), Err(EllError::TwoTorsion));
        // (0, 1) is an inflection point of y^2 = 4x^3 + 1, hence of order three
        assert_eq!(wp_triple(&ECPoint::ints(0, 1), &q(0, 1)), Err(EllError::DegenerateDenominator));
        assert_eq!(oracle::mul(&ECPoint::ints(0, 1), 3, &q(0, 1)), None);
        // doubling twice agrees with the oracle's fourfold multiple
        let four = wp_double(&two, &g2).unwrap();
        assert_eq!(Some(four), oracle::add(&Some(two.clone()), &Some(two), &g2));
        assert_eq!(wp_multiple(&p, 4, &g2), Err(EllError::UnsupportedK(4)));
    }

    #[test]
    fn invariant_c_examples() {
        assert_eq!(invariant_c(&EllState::new(ECPoint::ints(0, 1), ECPoint::ints(1, 2))).unwrap(), q(5, 1));
        assert_eq!(invariant_c(&EllState::new(ECPoint::ints(0, 1), ECPoint::ints(1, -1))).unwrap(), q(-4, 1));
        assert_eq!(invariant_c(&EllState::new(ECPoint::ints(1, 1), ECPoint::ints(1, 2))), Err(EllError::CoincidentAbscissae));
    }

    #[test]
    fn step_matches_group_law_and_reverses() {
        let (s, c) = random_state(0, 1, 1, 2).unwrap();
        for k in [2u32, 3] {
            let next = ell_step(&s, k, &c).unwrap();
            let expected = oracle::add(&oracle::mul(&s.curr, k as i64, &c.g2), &Some(s.prev.neg()), &c.g2);
            assert_eq!(Some(next.curr.clone()), expected);
            assert_eq!(ell_backward(&next, k, &c).unwrap(), s);
        }
        // x_{n-1} = f_2(x_n, y_n): P_{n-1} = +-2P_n
        let two = wp_double(&s.curr, &c.g2).unwrap();
        let degenerate = EllState::new(two, s.curr.clone());
        assert_eq!(ell_step(&degenerate, 2, &c), Err(EllError::AdditionDegenerate));
    }

    #[test]
    fn k2_conserves_c_and_k3_does_not() {
        let (s, _) = random_state(0, 1, 1, 2).unwrap();
        let orbit = ell_orbit(2, &s, 50).unwrap();
        let c0 = invariant_c(&s).unwrap();
        assert!(orbit.iter().all(|t| invariant_c(t).unwrap() == c0));
        let orbit3 = ell_orbit(3, &s, 3).unwrap();
        assert!(orbit3.iter().any(|t| invariant_c(t).unwrap() != c0));
    }

    #[test]
    fn height_growth() {
        let (s, _) = random_state(0, 1, 1, 2).unwrap();
        assert!(matches!(ell_height_entropy(2, &s, 0), Err(EllError::InsufficientData { .. })));
        let fit = ell_height_entropy(2, &s, 30).unwrap();
        assert!(fit.heights.iter().skip(1).all(|(n, h)| (*h as f64) / ((n * n) as f64) < 20.0), "{:?}", fit.heights);
        assert!(fit.slope.to_f64() < 0.25, "{}", fit.slope);
    }

    #[test]
    fn reduction_mod_p_commutes_with_steps() {
        use crate::arithmetic::FpElem;
        let p = 1_000_003;
        let red = |q: &BigRat| q.reduce_mod(p).and_then(|r| FpElem::new(r, p).ok());
        let (s, c) = random_state(0, 1, 1, 2).unwrap();
        let cp = curve_from_states(&s.map(red).unwrap()).unwrap();
        assert_eq!(cp.g2, red(&c.g2).unwrap());
        let exact = ell_orbit(3, &s, 3).unwrap();
        let modp = ell_orbit(3, &s.map(red).unwrap(), 3).unwrap();
        for (e, m) in exact.iter().zip(&modp) {
            assert_eq!(&e.map(red).unwrap(), m);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]
        #[test]
        fn orbits_stay_on_the_initial_curve(x0 in -6i64..6, y0 in -9i64..9, x1 in -6i64..6, y1 in -9i64..9, k in 2u32..4) {
            let Some((s, c)) = random_state(x0, y0, x1, y1) else { return Ok(()) };
            let steps = if k == 2 { 50 } else { 3 };
            let mut t = s.clone();
            for _ in 0..steps {
                match ell_step(&t, k, &c) {
                    Ok(next) => t = next,
                    Err(_) => break,
                }
                prop_assert!(t.curr.on_curve(&c));
                if let Ok(c_t) = curve_from_states(&t) {
                    prop_assert_eq!(&c_t, &c);
                }
                prop_assert_eq!(&ell_backward(&t, k, &c).unwrap().curr, &t.prev);
            }
        }

        #[test]
        fn multiples_match_oracle(x0 in -8i64..8, y0 in -12i64..12, x1 in -8i64..8, y1 in -12i64..12) {
            let Some((s, c)) = random_state(x0, y0, x1, y1) else { return Ok(()) };
            for p in [&s.prev, &s.curr] {
                let two = oracle::mul(p, 2, &c.g2);
                prop_assert_eq!(wp_double(p, &c.g2).ok(), two.clone());
                match wp_triple(p, &c.g2) {
                    Ok(three) => {
                        prop_assert!(three.on_curve(&c));
                        prop_assert_eq!(Some(three), oracle::mul(p, 3, &c.g2));
                    }
                    Err(_) => prop_assert_eq!(oracle::mul(p, 3, &c.g2), None),
                }
            }
        }
    }
}
