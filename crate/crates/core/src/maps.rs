//! Catalog of second-order rational recurrences viewed as plane maps
//! `(x_{n-1}, x_n) -> (x_n, x_{n+1})`, with exact stepping in both directions.
//!
//! Each map is stored symbolically as a ratio of bivariate polynomials with
//! Gaussian-rational coefficients. The same data drives scalar stepping over
//! any [`Scalar`] field and the homogeneous evaluation used for degree growth.
//!
//! The invertible maps (`tan`, `hv`, `mcm`, `power`) are all time-symmetric:
//! the backward formula is the forward one with `x_{n+1}` and `x_{n-1}`
//! exchanged. The one-dimensional maps ignore `x_{n-1}` and cannot be run
//! backwards.
//!
//! Note on `tan:k=1`: iteration gives `x_{n+3} = -x_n`, so the state has
//! period 6 rather than 3.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arithmetic::{ArithError, BigRat, GaussRat, RatFunc, Scalar, UniPoly};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("singular point: {locus}")]
    Singular { locus: String },
    #[error("map {0} has no single-valued inverse")]
    NotInvertible(String),
    #[error("unknown map specification {0:?}")]
    UnknownMap(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Catalog entry. `Elliptic(k)` names the four-variable maps handled by
/// [`crate::elliptic`]; it has no plane definition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MapId {
    Logistic,
    RittReal,
    RittGauss,
    Power(u32),
    Tan(u32),
    Hv(BigRat),
    Mcm(BigRat),
    Elliptic(u32),
}

impl MapId {
    pub fn default_hv() -> Self {
        MapId::Hv(BigRat::one())
    }

    pub fn default_mcm() -> Self {
        MapId::Mcm(BigRat::from_int(2))
    }
}

impl fmt::Display for MapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapId::Logistic => write!(f, "logistic"),
            MapId::RittReal => write!(f, "ritt4"),
            MapId::RittGauss => write!(f, "ritt3i"),
            MapId::Power(k) => write!(f, "power:k={k}"),
            MapId::Tan(k) => write!(f, "tan:k={k}"),
            MapId::Hv(a) => write!(f, "hv:a={a}"),
            MapId::Mcm(a) => write!(f, "mcm:a={a}"),
            MapId::Elliptic(k) => write!(f, "ell:k={k}"),
        }
    }
}

impl FromStr for MapId {
    type Err = MapError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || MapError::UnknownMap(s.to_string());
        let (name, params) = match s.trim().split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (s.trim(), None),
        };
        let param = |key: &str| -> Result<Option<String>, MapError> {
            let Some(p) = params else { return Ok(None) };
            let (k, v) = p.split_once('=').ok_or_else(unknown)?;
            if k.trim() != key {
                return Err(unknown());
            }
            Ok(Some(v.trim().to_string()))
        };
        let int_param = |key: &str, lo: u32| -> Result<u32, MapError> {
            let v = param(key)?.ok_or_else(unknown)?;
            let k: u32 = v.parse().map_err(|_| unknown())?;
            if k < lo {
                return Err(unknown());
            }
            Ok(k)
        };
        let rat_param = |default: i64| -> Result<BigRat, MapError> {
            let a = match param("a")? {
                Some(v) => v.parse::<BigRat>()?,
                None => BigRat::from_int(default),
            };
            if a.is_zero() {
                return Err(MapError::Unsupported("parameter a must be nonzero".into()));
            }
            Ok(a)
        };
        let no_params = |id: MapId| if params.is_some() { Err(unknown()) } else { Ok(id) };
        match name {
            "logistic" => no_params(MapId::Logistic),
            "ritt4" => no_params(MapId::RittReal),
            "ritt3i" => no_params(MapId::RittGauss),
            "power" => Ok(MapId::Power(int_param("k", 1)?)),
            "tan" => Ok(MapId::Tan(int_param("k", 1)?)),
            "hv" => Ok(MapId::Hv(rat_param(1)?)),
            "mcm" => Ok(MapId::Mcm(rat_param(2)?)),
            "ell" => {
                let k = int_param("k", 2)?;
                if k > 3 {
                    return Err(MapError::Unsupported("elliptic maps exist for k = 2, 3".into()));
                }
                Ok(MapId::Elliptic(k))
            }
            _ => Err(unknown()),
        }
    }
}

/// Polynomial in two variables `(a, b)` with Gaussian-rational coefficients.
/// Terms are `(deg_a, deg_b, coeff)` with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    terms: Vec<(u32, u32, GaussRat)>,
}

impl BiPoly {
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, GaussRat)>) -> Self {
        let mut out = BiPoly::default();
        for (i, j, c) in terms {
            out.add_term(i, j, c);
        }
        out
    }

    fn add_term(&mut self, i: u32, j: u32, c: GaussRat) {
        if let Some(slot) = self.terms.iter_mut().find(|(a, b, _)| *a == i && *b == j) {
            slot.2 = slot.2.add(&c);
        } else {
            self.terms.push((i, j, c));
        }
        self.terms.retain(|(_, _, c)| !c.is_zero());
    }

    /// `sum c_j b^j` from a univariate polynomial in `b`.
    fn from_univariate_in_b(p: &UniPoly<BigRat>) -> Self {
        BiPoly::from_terms(p.coeffs().iter().enumerate().map(|(j, c)| (0, j as u32, GaussRat::real(c.clone()))))
    }

    fn times_a(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(i, j, c)| (i + 1, *j, c.clone())).collect() }
    }

    fn plus(&self, other: &BiPoly) -> Self {
        let mut out = self.clone();
        for (i, j, c) in &other.terms {
            out.add_term(*i, *j, c.clone());
        }
        out
    }

    fn scaled(&self, s: &GaussRat) -> Self {
        BiPoly::from_terms(self.terms.iter().map(|(i, j, c)| (*i, *j, c.mul(s))))
    }

    pub fn terms(&self) -> &[(u32, u32, GaussRat)] {
        &self.terms
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(i, j, _)| i + j).max().unwrap_or(0)
    }

    pub fn degree_in_a(&self) -> u32 {
        self.terms.iter().map(|(i, _, _)| *i).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn compile<S: Scalar>(&self, ctx: &S) -> Result<CompiledPoly<S>, ArithError> {
        let terms = self.terms.iter().map(|(i, j, c)| Ok((*i, *j, ctx.from_coeff(c)?))).collect::<Result<Vec<_>, ArithError>>()?;
        Ok(CompiledPoly { terms, max_a: self.degree_in_a(), max_b: self.terms.iter().map(|t| t.1).max().unwrap_or(0) })
    }

    /// Human-readable form using the given variable names.
    pub fn render(&self, a: &str, b: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut sorted = self.terms.clone();
        sorted.sort_by_key(|(i, j, _)| (std::cmp::Reverse(i + j), std::cmp::Reverse(*i)));
        let parts: Vec<String> = sorted
            .iter()
            .map(|(i, j, c)| {
                let mut mono = Vec::new();
                for (name, e) in [(a, *i), (b, *j)] {
                    match e {
                        0 => {}
                        1 => mono.push(name.to_string()),
                        _ => mono.push(format!("{name}^{e}")),
                    }
                }
                if mono.is_empty() {
                    format!("{c}")
                } else if *c == GaussRat::from_int(1) {
                    mono.join("*")
                } else {
                    format!("({c})*{}", mono.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

/// A [`BiPoly`] with coefficients embedded in a concrete field.
#[derive(Debug, Clone)]
pub struct CompiledPoly<S: Scalar> {
    terms: Vec<(u32, u32, S)>,
    max_a: u32,
    max_b: u32,
}

impl<S: Scalar> CompiledPoly<S> {
    pub fn eval(&self, a: &S, b: &S) -> S {
        let pows = |x: &S, n: u32| {
            let mut v = Vec::with_capacity(n as usize + 1);
            v.push(x.one_like());
            for k in 1..=n as usize {
                let next = v[k - 1].mul(x);
                v.push(next);
            }
            v
        };
        let pa = pows(a, self.max_a);
        let pb = pows(b, self.max_b);
        self.terms.iter().fold(a.zero_like(), |acc, (i, j, c)| acc.add(&c.mul(&pa[*i as usize]).mul(&pb[*j as usize])))
    }
}

/// `x_new = num(a, b) / den(a, b)`, where for the forward direction
/// `(a, b) = (x_{n-1}, x_n)` and for the backward one `(a, b) = (x_{n+1}, x_n)`.
///
/// `guards` are denominators of the map as originally composed that cancel
/// out of `num / den`; the step is still singular where one of them vanishes.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalExpr {
    pub num: BiPoly,
    pub den: BiPoly,
    pub guards: Vec<BiPoly>,
}

impl RationalExpr {
    pub fn new(num: BiPoly, den: BiPoly) -> Self {
        RationalExpr { num, den, guards: Vec::new() }
    }

    /// Total degree used when homogenizing the ratio.
    pub fn degree(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }

    /// `den = 0`, plus any guards, in the given variable names.
    pub fn locus(&self, a: &str, b: &str) -> String {
        std::iter::once(&self.den).chain(&self.guards).map(|p| format!("{} = 0", p.render(a, b))).collect::<Vec<_>>().join(" or ")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlaneMapDef {
    id: MapId,
    forward: RationalExpr,
    backward: Option<RationalExpr>,
}

/// `(u, v) = (x_{n-1}, x_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlaneState<S> {
    pub u: S,
    pub v: S,
}

impl<S> PlaneState<S> {
    pub fn new(u: S, v: S) -> Self {
        PlaneState { u, v }
    }
}

impl PlaneState<BigRat> {
    pub fn rational(u: (i64, i64), v: (i64, i64)) -> Self {
        PlaneState { u: BigRat::new(u.0, u.1), v: BigRat::new(v.0, v.1) }
    }
}

/// `tan(k * atan x)` as a reduced rational function of x, built from
/// `f_k = (f_{k-1} + x) / (1 - f_{k-1} x)`.
pub fn build_tan_multiple(k: u32) -> RatFunc<BigRat> {
    assert!(k >= 1, "tan multiple needs k >= 1");
    let x = RatFunc::var(&BigRat::zero());
    let one = x.one_like();
    let mut f = x.clone();
    for _ in 1..k {
        f = f.add(&x).div(&one.sub(&f.mul(&x))).expect("tan addition denominator is not identically zero");
    }
    f
}

fn c(n: i64) -> GaussRat {
    GaussRat::from_int(n)
}

fn cr(q: &BigRat) -> GaussRat {
    GaussRat::real(q.clone())
}

impl PlaneMapDef {
    pub fn new(id: MapId) -> Result<Self, MapError> {
        let symmetric = |e: RationalExpr| (e.clone(), Some(e));
        let (forward, backward) = match &id {
            MapId::Logistic => {
                (RationalExpr::new(BiPoly::from_terms([(0, 2, c(2)), (0, 0, c(-1))]), BiPoly::from_terms([(0, 0, c(1))])), None)
            }
            // -(v - 1)^2 / (4v)
            MapId::RittReal => (
                RationalExpr::new(BiPoly::from_terms([(0, 2, c(-1)), (0, 1, c(2)), (0, 0, c(-1))]), BiPoly::from_terms([(0, 1, c(4))])),
                None,
            ),
            // (v^2 - 1) / (2i v)
            MapId::RittGauss => (
                RationalExpr::new(
                    BiPoly::from_terms([(0, 2, c(1)), (0, 0, c(-1))]),
                    BiPoly::from_terms([(0, 1, GaussRat::new(BigRat::zero(), BigRat::from_int(2)))]),
                ),
                None,
            ),
            MapId::Power(k) => symmetric(RationalExpr::new(BiPoly::from_terms([(0, *k, c(1))]), BiPoly::from_terms([(1, 0, c(1))]))),
            MapId::Tan(k) => {
                let f = build_tan_multiple(*k);
                let p = BiPoly::from_univariate_in_b(f.num());
                let q = BiPoly::from_univariate_in_b(f.den());
                // (x' + u) / (1 - x' u) = P/Q  <=>  x' = (P - uQ) / (Q + uP)
                let num = p.plus(&q.times_a().scaled(&c(-1)));
                let den = q.plus(&p.times_a());
                // f_k itself is undefined where Q(x_n) = 0
                let guards = if f.den().is_constant() { Vec::new() } else { vec![q] };
                symmetric(RationalExpr { num, den, guards })
            }
            MapId::Hv(a) => symmetric(RationalExpr::new(
                BiPoly::from_terms([(0, 3, c(1)), (0, 0, cr(a)), (1, 2, c(-1))]),
                BiPoly::from_terms([(0, 2, c(1))]),
            )),
            MapId::Mcm(a) => symmetric(RationalExpr::new(
                BiPoly::from_terms([(0, 1, cr(&a.add(a))), (1, 2, c(-1)), (1, 0, c(1))]),
                BiPoly::from_terms([(0, 2, c(1)), (0, 0, c(-1))]),
            )),
            MapId::Elliptic(_) => return Err(MapError::Unsupported(format!("{id} is a four-variable map; use the elliptic module"))),
        };
        Ok(PlaneMapDef { id, forward, backward })
    }

    pub fn parse(spec: &str) -> Result<Self, MapError> {
        PlaneMapDef::new(spec.parse()?)
    }

    pub fn id(&self) -> &MapId {
        &self.id
    }

    pub fn forward(&self) -> &RationalExpr {
        &self.forward
    }

    pub fn backward(&self) -> Option<&RationalExpr> {
        self.backward.as_ref()
    }

    pub fn is_invertible(&self) -> bool {
        self.backward.is_some()
    }

    pub fn is_one_dimensional(&self) -> bool {
        self.forward.num.degree_in_a() == 0 && self.forward.den.degree_in_a() == 0
    }

    /// Singular locus of the forward step.
    pub fn forward_locus(&self) -> String {
        self.forward.locus("x_{n-1}", "x_n")
    }

    pub fn compile<S: Scalar>(&self, ctx: &S) -> Result<FieldMap<S>, MapError> {
        let compile_expr = |e: &RationalExpr, names: (&str, &str)| -> Result<CompiledExpr<S>, MapError> {
            Ok(CompiledExpr {
                num: e.num.compile(ctx)?,
                den: e.den.compile(ctx)?,
                guards: e.guards.iter().map(|g| g.compile(ctx)).collect::<Result<_, _>>()?,
                locus: e.locus(names.0, names.1),
            })
        };
        Ok(FieldMap {
            id: self.id.clone(),
            forward: compile_expr(&self.forward, ("x_{n-1}", "x_n"))?,
            backward: self.backward.as_ref().map(|b| compile_expr(b, ("x_{n+1}", "x_n"))).transpose()?,
        })
    }

    pub fn step_forward<S: Scalar>(&self, s: &PlaneState<S>) -> Result<PlaneState<S>, MapError> {
        self.compile(&s.v)?.step_forward(s)
    }

    pub fn step_backward<S: Scalar>(&self, s: &PlaneState<S>) -> Result<PlaneState<S>, MapError> {
        self.compile(&s.v)?.step_backward(s)
    }
}

#[derive(Debug, Clone)]
struct CompiledExpr<S: Scalar> {
    num: CompiledPoly<S>,
    den: CompiledPoly<S>,
    guards: Vec<CompiledPoly<S>>,
    locus: String,
}

impl<S: Scalar> CompiledExpr<S> {
    fn eval(&self, a: &S, b: &S) -> Result<S, MapError> {
        let d = self.den.eval(a, b);
        if d.is_zero() || self.guards.iter().any(|g| g.eval(a, b).is_zero()) {
            return Err(MapError::Singular { locus: self.locus.clone() });
        }
        Ok(self.num.eval(a, b).div(&d)?)
    }
}

/// A catalog map with coefficients embedded in the field `S`.
#[derive(Debug, Clone)]
pub struct FieldMap<S: Scalar> {
    id: MapId,
    forward: CompiledExpr<S>,
    backward: Option<CompiledExpr<S>>,
}

impl<S: Scalar> FieldMap<S> {
    pub fn id(&self) -> &MapId {
        &self.id
    }

    pub fn step_forward(&self, s: &PlaneState<S>) -> Result<PlaneState<S>, MapError> {
        let next = self.forward.eval(&s.u, &s.v)?;
        Ok(PlaneState { u: s.v.clone(), v: next })
    }

    pub fn step_backward(&self, s: &PlaneState<S>) -> Result<PlaneState<S>, MapError> {
        let back = self.backward.as_ref().ok_or_else(|| MapError::NotInvertible(self.id.to_string()))?;
        let prev = back.eval(&s.v, &s.u)?;
        Ok(PlaneState { u: prev, v: s.u.clone() })
    }

    pub fn iterate(&self, s0: PlaneState<S>, n: usize, record: Record) -> Orbit<PlaneState<S>> {
        let mut states = vec![s0.clone()];
        let mut current = s0;
        for step in 1..=n {
            match self.step_forward(&current) {
                Ok(next) => {
                    if record == Record::All {
                        states.push(next.clone());
                    }
                    current = next;
                }
                Err(err) => {
                    if record == Record::Last {
                        states = vec![current];
                    }
                    return Orbit { states, termination: Termination::Singular { step, error: err } };
                }
            }
        }
        if record == Record::Last {
            states = vec![current];
        }
        Orbit { states, termination: Termination::Completed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Record {
    All,
    Last,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    /// Step `step` (1-based) could not be taken.
    Singular {
        step: usize,
        error: MapError,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<S> {
    /// `s_0 .. s_m` for `Record::All`; only the final state for `Record::Last`.
    pub states: Vec<S>,
    pub termination: Termination,
}

impl<S> Orbit<S> {
    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }
}

pub fn iterate_orbit<S: Scalar>(map: &PlaneMapDef, s0: PlaneState<S>, n: usize, record: Record) -> Result<Orbit<PlaneState<S>>, MapError> {
    Ok(map.compile(&s0.v)?.iterate(s0, n, record))
}

/// Degree of the n-th iterate of a one-dimensional catalog map, obtained by
/// exact composition in the rational function field and full reduction.
pub fn preimage_degree(map: &PlaneMapDef, n: usize) -> Result<usize, MapError> {
    if !map.is_one_dimensional() {
        return Err(MapError::Unsupported(format!("{} is not one-dimensional", map.id())));
    }
    fn compose<F: Scalar>(map: &PlaneMapDef, ctx: F, n: usize) -> Result<usize, MapError> {
        let t = RatFunc::var(&ctx);
        let fm = map.compile(&t)?;
        let mut x = t;
        for _ in 0..n {
            x = fm.forward.eval(&x, &x)?;
        }
        Ok(x.degree())
    }
    match map.id() {
        MapId::RittGauss => compose(map, GaussRat::default(), n),
        _ => compose(map, BigRat::zero(), n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::FpElem;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRat {
        BigRat::new(n, d)
    }

    fn poly(cs: &[i64]) -> UniPoly<BigRat> {
        UniPoly::new(cs.iter().map(|&c| BigRat::from_int(c)).collect(), BigRat::zero())
    }

    #[test]
    fn tan_multiples_match_known_forms() {
        // f_1 = x, f_2 = 2x/(1-x^2) = -2x/(x^2-1), f_3 = (3x-x^3)/(1-3x^2) = ((1/3)x^3 - x)/(x^2 - 1/3)
        let f1 = build_tan_multiple(1);
        assert_eq!((f1.num(), f1.den()), (&poly(&[0, 1]), &poly(&[1])));
        let f2 = build_tan_multiple(2);
        assert_eq!((f2.num(), f2.den()), (&poly(&[0, -2]), &poly(&[-1, 0, 1])));
        let f3 = build_tan_multiple(3);
        let expected = RatFunc::new(poly(&[0, 3, 0, -1]), poly(&[1, 0, -3])).unwrap();
        assert_eq!(f3, expected);
        assert_eq!(f3.den().coeffs(), &[q(-1, 3), q(0, 1), q(1, 1)]);
    }

    #[test]
    fn parses_catalog_names() {
        for (s, id) in [
            ("tan:k=3", MapId::Tan(3)),
            ("hv:a=1", MapId::Hv(q(1, 1))),
            ("hv", MapId::Hv(q(1, 1))),
            ("mcm:a=2", MapId::Mcm(q(2, 1))),
            ("mcm", MapId::Mcm(q(2, 1))),
            ("mcm:a=1/3", MapId::Mcm(q(1, 3))),
            ("power:k=3", MapId::Power(3)),
            ("logistic", MapId::Logistic),
            ("ritt4", MapId::RittReal),
            ("ritt3i", MapId::RittGauss),
            ("ell:k=2", MapId::Elliptic(2)),
        ] {
            assert_eq!(s.parse::<MapId>().unwrap(), id, "{s}");
            assert_eq!(id.to_string().parse::<MapId>().unwrap(), id);
        }
        for bad in ["tan", "tan:k=0", "tan:a=3", "hv:a=0", "ell:k=4", "logistic:k=2", "nope"] {
            assert!(bad.parse::<MapId>().is_err(), "{bad}");
        }
        assert!(matches!(PlaneMapDef::parse("ell:k=3"), Err(MapError::Unsupported(_))));
    }

    #[test]
    fn forward_step_examples() {
        let tan3 = PlaneMapDef::new(MapId::Tan(3)).unwrap();
        let s = tan3.step_forward(&PlaneState::rational((0, 1), (1, 1))).unwrap();
        assert_eq!(s, PlaneState::rational((1, 1), (-1, 1)));
        assert_eq!(tan3.step_backward(&s).unwrap(), PlaneState::rational((0, 1), (1, 1)));

        let hv = PlaneMapDef::new(MapId::default_hv()).unwrap();
        let fixed = PlaneState::rational((1, 1), (1, 1));
        assert_eq!(hv.step_forward(&fixed).unwrap(), fixed);
        assert_eq!(hv.step_backward(&fixed).unwrap(), fixed);

        let power = PlaneMapDef::new(MapId::Power(3)).unwrap();
        assert_eq!(power.step_forward(&PlaneState::rational((2, 1), (3, 1))).unwrap(), PlaneState::rational((3, 1), (27, 2)));
    }

    #[test]
    fn singularities_and_non_invertible_maps() {
        let tan2 = PlaneMapDef::new(MapId::Tan(2)).unwrap();
        let orbit = iterate_orbit(&tan2, PlaneState::rational((0, 1), (1, 1)), 1, Record::All).unwrap();
        assert_eq!(orbit.states.len(), 1);
        assert!(matches!(orbit.termination, Termination::Singular { step: 1, .. }));

        // 1 - x_n^2 cancels from the reduced step but still marks a singular point
        let err = tan2.step_forward(&PlaneState::rational((3, 1), (1, 1))).unwrap_err();
        assert_eq!(err, MapError::Singular { locus: "(-2)*x_{n-1}*x_n + x_n^2 + -1 = 0 or x_n^2 + -1 = 0".into() });

        let power = PlaneMapDef::new(MapId::Power(2)).unwrap();
        let err = power.step_forward(&PlaneState::rational((0, 1), (3, 1))).unwrap_err();
        assert_eq!(err, MapError::Singular { locus: "x_{n-1} = 0".into() });

        let logistic = PlaneMapDef::new(MapId::Logistic).unwrap();
        assert!(matches!(logistic.step_backward(&PlaneState::rational((0, 1), (1, 2))), Err(MapError::NotInvertible(_))));
        assert_eq!(logistic.step_forward(&PlaneState::rational((5, 1), (1, 2))).unwrap().v, q(-1, 2));

        let hv = PlaneMapDef::new(MapId::default_hv()).unwrap();
        assert_eq!(hv.forward_locus(), "x_n^2 = 0");
        // parameters that do not embed in F_p are reported, not silently reduced
        let hv7 = PlaneMapDef::new(MapId::Hv(q(1, 7))).unwrap();
        assert!(hv7.compile(&FpElem::new(0, 7).unwrap()).is_err());
        let gauss = PlaneMapDef::new(MapId::RittGauss).unwrap();
        assert!(matches!(gauss.compile(&BigRat::zero()), Err(MapError::Arith(ArithError::FieldMismatch(_)))));
    }

    #[test]
    fn orbit_examples() {
        let tan1 = PlaneMapDef::new(MapId::Tan(1)).unwrap();
        let orbit = iterate_orbit(&tan1, PlaneState::rational((1, 1), (2, 1)), 6, Record::All).unwrap();
        assert!(orbit.completed());
        let xs: Vec<BigRat> = std::iter::once(orbit.states[0].u.clone()).chain(orbit.states.iter().map(|s| s.v.clone())).collect();
        let expected = [q(1, 1), q(2, 1), q(1, 3), q(-1, 1), q(-2, 1), q(-1, 3), q(1, 1), q(2, 1)];
        assert_eq!(xs, expected);
        assert_eq!(orbit.states[6], orbit.states[0]);

        let hv = PlaneMapDef::new(MapId::default_hv()).unwrap();
        let s0 = PlaneState::rational((1, 3), (2, 5));
        let zero = iterate_orbit(&hv, s0.clone(), 0, Record::All).unwrap();
        assert_eq!(zero.states, vec![s0.clone()]);
        let last = iterate_orbit(&hv, s0.clone(), 3, Record::Last).unwrap();
        let all = iterate_orbit(&hv, s0, 3, Record::All).unwrap();
        assert_eq!(last.states, vec![all.states[3].clone()]);
    }

    #[test]
    fn preimage_degree_examples() {
        let logistic = PlaneMapDef::new(MapId::Logistic).unwrap();
        assert_eq!(preimage_degree(&logistic, 0).unwrap(), 1);
        assert_eq!(preimage_degree(&logistic, 1).unwrap(), 2);
        assert_eq!(preimage_degree(&logistic, 4).unwrap(), 16);
        let ritt = PlaneMapDef::new(MapId::RittReal).unwrap();
        assert_eq!(preimage_degree(&ritt, 3).unwrap(), 8);
        let gauss = PlaneMapDef::new(MapId::RittGauss).unwrap();
        assert_eq!(preimage_degree(&gauss, 3).unwrap(), 8);
        assert!(preimage_degree(&PlaneMapDef::new(MapId::Tan(3)).unwrap(), 1).is_err());
    }

    fn invertible_maps() -> Vec<PlaneMapDef> {
        [
            MapId::Tan(1),
            MapId::Tan(2),
            MapId::Tan(3),
            MapId::Tan(4),
            MapId::default_hv(),
            MapId::Hv(q(-3, 2)),
            MapId::default_mcm(),
            MapId::Mcm(q(1, 5)),
            MapId::Power(2),
            MapId::Power(3),
            MapId::Power(5),
        ]
        .into_iter()
        .map(|id| PlaneMapDef::new(id).unwrap())
        .collect()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn reversible_over_q(a in -60i64..60, b in 1i64..40, c in -60i64..60, d in 1i64..40) {
            let s = PlaneState::rational((a, b), (c, d));
            for map in invertible_maps() {
                if let Ok(next) = map.step_forward(&s) {
                    match map.step_backward(&next) {
                        Ok(back) => prop_assert_eq!(back, s.clone(), "{}", map.id()),
                        // power maps collapse x_n = 0 onto the backward locus
                        Err(MapError::Singular { .. }) => prop_assert!(s.v.is_zero()),
                        Err(e) => prop_assert!(false, "{e}"),
                    }
                }
            }
        }

        #[test]
        fn reversible_over_fp(a in 0u64..10007, b in 0u64..10007) {
            let p = 10007;
            let s = PlaneState::new(FpElem::new(a, p).unwrap(), FpElem::new(b, p).unwrap());
            for map in invertible_maps() {
                if let Ok(next) = map.step_forward(&s) {
                    // the backward step can only fail where the forward image sits on the backward locus
                    match map.step_backward(&next) {
                        Ok(back) => prop_assert_eq!(back, s.clone(), "{}", map.id()),
                        Err(MapError::Singular { .. }) => {}
                        Err(e) => prop_assert!(false, "{e}"),
                    }
                }
            }
        }

        #[test]
        fn tan_relation_holds_exactly(k in 1u32..5, a in -40i64..40, b in 1i64..30, c in -40i64..40, d in 1i64..30) {
            let map = PlaneMapDef::new(MapId::Tan(k)).unwrap();
            let f = build_tan_multiple(k);
            let s = PlaneState::rational((a, b), (c, d));
            if let (Ok(next), false) = (map.step_forward(&s), f.den().eval(&s.v).is_zero()) {
                let fk = f.num().eval(&s.v).div(&f.den().eval(&s.v)).unwrap();
                let lhs_den = BigRat::one().sub(&next.v.mul(&s.u));
                if !lhs_den.is_zero() {
                    prop_assert_eq!(next.v.add(&s.u).div(&lhs_den).unwrap(), fk);
                }
            }
        }

        #[test]
        fn tan1_anti_period_three(a in -40i64..40, b in 1i64..30, c in -40i64..40, d in 1i64..30) {
            let map = PlaneMapDef::new(MapId::Tan(1)).unwrap();
            let s0 = PlaneState::rational((a, b), (c, d));
            let orbit = iterate_orbit(&map, s0.clone(), 6, Record::All).unwrap();
            if orbit.completed() {
                let st = &orbit.states;
                for n in 0..3 {
                    prop_assert_eq!(st[n + 3].v.clone(), st[n].v.neg());
                }
                prop_assert_eq!(st[6].clone(), s0);
            }
        }

        #[test]
        fn power_map_log_linear_relation(k in 1u32..6, a in 1i64..40, b in 1i64..30, c in -40i64..40, d in 1i64..30) {
            let map = PlaneMapDef::new(MapId::Power(k)).unwrap();
            let s = PlaneState::rational((a, b), (c, d));
            let next = map.step_forward(&s).unwrap();
            prop_assert_eq!(next.v.mul(&s.u), s.v.pow(k));
        }
    }
}
