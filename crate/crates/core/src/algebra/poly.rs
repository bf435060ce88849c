//! Binary forms and points of the projective line.

use std::fmt;

use super::field::Scalar;
use super::series::TruncatedSeries;
use super::uni::{scalar_from_u64, UniPoly};
use super::AlgebraError;

/// Order of vanishing; `Infinite` for an identically vanishing function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(usize),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// A point `[s : t]` of the projective line, normalized so that its first
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct P1Point<S> {
    s: S,
    t: S,
}

impl<S: Scalar> P1Point<S> {
    pub fn new(s: S, t: S) -> Result<Self, AlgebraError> {
        if !s.is_zero() {
            let inv = s.inverse().unwrap();
            Ok(P1Point {
                s: S::one(),
                t: t * inv,
            })
        } else if !t.is_zero() {
            Ok(P1Point {
                s: S::zero(),
                t: S::one(),
            })
        } else {
            Err(AlgebraError::MalformedPoint)
        }
    }

    /// The affine point `[1 : a]`.
    pub fn affine(a: S) -> Self {
        P1Point { s: S::one(), t: a }
    }

    /// The point `[0 : 1]`.
    pub fn infinity() -> Self {
        P1Point {
            s: S::zero(),
            t: S::one(),
        }
    }

    pub fn coords(&self) -> (&S, &S) {
        (&self.s, &self.t)
    }

    pub fn is_infinity(&self) -> bool {
        self.s.is_zero()
    }

    /// Affine coordinate `t/s`, `None` at infinity.
    pub fn affine_coord(&self) -> Option<&S> {
        (!self.is_infinity()).then_some(&self.t)
    }
}

impl<S: Scalar> fmt::Display for P1Point<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.s, self.t)
    }
}

/// Homogeneous binary form of degree `d`, coefficients of
/// `s^d, s^(d-1) t, ..., t^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> HomPoly<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a form of degree d stores d + 1 coefficients");
        HomPoly { coeffs }
    }

    pub fn zero(degree: usize) -> Self {
        HomPoly {
            coeffs: vec![S::zero(); degree + 1],
        }
    }

    /// `s` (index 0) or `t` (index 1).
    pub fn variable(index: usize) -> Self {
        match index {
            0 => HomPoly::new(vec![S::one(), S::zero()]),
            _ => HomPoly::new(vec![S::zero(), S::one()]),
        }
    }

    /// The linear form `a1 s - a0 t` vanishing at `[a0 : a1]`.
    pub fn vanishing_at(a: &P1Point<S>) -> Self {
        let (a0, a1) = a.coords();
        HomPoly::new(vec![a1.clone(), -a0.clone()])
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        HomPoly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degree");
        HomPoly::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        HomPoly::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(HomPoly::new(vec![S::one()]), |acc, _| acc.mul(self))
    }

    /// `F(a s + b t, c s + d t)`.
    pub fn compose_linear(&self, a: &S, b: &S, c: &S, d: &S) -> Self {
        let x = HomPoly::new(vec![a.clone(), b.clone()]);
        let y = HomPoly::new(vec![c.clone(), d.clone()]);
        let deg = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, k)| !k.is_zero())
            .fold(HomPoly::zero(deg), |acc, (i, k)| {
                acc.add(&x.pow(deg - i).mul(&y.pow(i)).scale(k))
            })
    }

    pub fn eval(&self, p: &P1Point<S>) -> S {
        let (s, t) = p.coords();
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(S::zero(), |acc, (i, c)| {
                acc + c.clone() * pow(s, d - i) * pow(t, i)
            })
    }

    /// `F(1, t)` as a univariate polynomial in `t`.
    pub fn dehomogenize(&self) -> UniPoly<S> {
        UniPoly::new(self.coeffs.clone())
    }

    /// Homogenizes `g(t)` to degree `d >= deg g`; the surplus becomes a power of `s`.
    pub fn homogenize(g: &UniPoly<S>, d: usize) -> Self {
        let mut c = g.coeffs().to_vec();
        assert!(c.len() <= d + 1, "degree too small to homogenize");
        c.resize(d + 1, S::zero());
        HomPoly::new(c)
    }

    /// Multiplicity of the factor `s`, i.e. the order of vanishing at `[0:1]`.
    pub fn s_multiplicity(&self) -> Order {
        if self.is_zero() {
            return Order::Infinite;
        }
        Order::Finite(self.coeffs.iter().rev().take_while(|c| c.is_zero()).count())
    }

    /// Rescales so the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(c) => self.scale(&c.inverse().unwrap()),
        }
    }

    /// Expansion in the local parameter at `p`, truncated to `order` terms.
    ///
    /// At `[1:a]` the parameter is `u = t/s - a` and the form is trivialized by
    /// `s^d`; at `[0:1]` it is `u = s/t` with trivialization `t^d`.
    pub fn expand_at(&self, p: &P1Point<S>, order: usize) -> TruncatedSeries<S> {
        TruncatedSeries::new(
            (0..order)
                .map(|r| {
                    taylor_functional(self.degree(), p, r)
                        .iter()
                        .zip(&self.coeffs)
                        .filter(|(w, c)| !w.is_zero() && !c.is_zero())
                        .fold(S::zero(), |acc, (w, c)| acc + w.clone() * c.clone())
                })
                .collect(),
        )
    }

    /// Order of vanishing at `p`.
    pub fn valuation_at(&self, p: &P1Point<S>) -> Order {
        if self.is_zero() {
            return Order::Infinite;
        }
        let d = self.degree();
        let k = (0..=d)
            .find(|&r| {
                let w = taylor_functional(d, p, r);
                !w.iter()
                    .zip(&self.coeffs)
                    .fold(S::zero(), |acc, (w, c)| acc + w.clone() * c.clone())
                    .is_zero()
            })
            .expect("a nonzero form of degree d vanishes to order at most d");
        Order::Finite(k)
    }
}

fn pow<S: Scalar>(x: &S, k: usize) -> S {
    (0..k).fold(S::one(), |acc, _| acc * x.clone())
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Weights `w` such that the coefficient of `u^r` in the local expansion of a
/// degree-`d` form at `p` equals `sum_i w[i] c[i]`.
pub fn taylor_functional<S: Scalar>(d: usize, p: &P1Point<S>, r: usize) -> Vec<S> {
    let mut w = vec![S::zero(); d + 1];
    match p.affine_coord() {
        Some(a) => {
            // F(1, a + u) = sum_i c_i (a + u)^i
            for (i, wi) in w.iter_mut().enumerate().skip(r) {
                *wi = scalar_from_u64::<S>(binomial(i, r)) * pow(a, i - r);
            }
        }
        None => {
            // F(u, 1) = sum_i c_i u^(d - i)
            if r <= d {
                w[d - r] = S::one();
            }
        }
    }
    w
}

/// Monic greatest common divisor of binary forms (of possibly different degrees).
pub fn gcd_forms<S: Scalar>(forms: &[HomPoly<S>]) -> Result<HomPoly<S>, AlgebraError> {
    let nonzero: Vec<&HomPoly<S>> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(AlgebraError::AllZeroInput);
    }
    let s_mult = nonzero
        .iter()
        .filter_map(|f| f.s_multiplicity().finite())
        .min()
        .unwrap();
    let g = nonzero
        .iter()
        .fold(UniPoly::zero(), |acc, f| acc.gcd(&f.dehomogenize()));
    let dg = g.degree().unwrap_or(0);
    Ok(HomPoly::homogenize(&g, dg + s_mult).normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Field, Rational, RationalField};

    fn form(c: &[i64]) -> HomPoly<Rational> {
        let f = RationalField::default();
        HomPoly::new(c.iter().map(|&x| f.from_i64(x)).collect())
    }

    fn pt(s: i64, t: i64) -> P1Point<Rational> {
        let f = RationalField::default();
        P1Point::new(f.from_i64(s), f.from_i64(t)).unwrap()
    }

    #[test]
    fn valuation_examples() {
        // s*t at [1:0]
        assert_eq!(form(&[0, 1, 0]).valuation_at(&pt(1, 0)), Order::Finite(1));
        // t^2 at [1:0]
        assert_eq!(form(&[0, 0, 1]).valuation_at(&pt(1, 0)), Order::Finite(2));
        assert_eq!(form(&[0, 0, 0]).valuation_at(&pt(1, 0)), Order::Infinite);
        // s^2 at [0:1]
        assert_eq!(form(&[1, 0, 0]).valuation_at(&pt(0, 1)), Order::Finite(2));
        // (s - t)^2 (s + t) at [1:1]
        let l = form(&[1, -1]);
        let g = l.mul(&l).mul(&form(&[1, 1]));
        assert_eq!(g.valuation_at(&pt(2, 2)), Order::Finite(2));
        assert_eq!(g.valuation_at(&pt(1, -1)), Order::Finite(1));
        assert_eq!(g.valuation_at(&pt(1, 3)), Order::Finite(0));
    }

    #[test]
    fn malformed_point_rejected() {
        let f = RationalField::default();
        assert!(matches!(
            P1Point::new(f.from_i64(0), f.from_i64(0)),
            Err(AlgebraError::MalformedPoint)
        ));
        assert_eq!(pt(3, 6), pt(1, 2));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_forms(&[form(&[1, 0, 0]), form(&[0, 1, 0])]).unwrap(), form(&[1, 0]));
        assert_eq!(gcd_forms(&[form(&[1, 0]), form(&[0, 1])]).unwrap(), form(&[1]));
        // s^2 - t^2 and s - t
        assert_eq!(
            gcd_forms(&[form(&[1, 0, -1]), form(&[1, -1])]).unwrap(),
            form(&[1, -1])
        );
        assert!(matches!(gcd_forms(&[form(&[0, 0])]), Err(AlgebraError::AllZeroInput)));
        // zero forms are ignored
        assert_eq!(gcd_forms(&[form(&[0, 0]), form(&[2, 4])]).unwrap(), form(&[1, 2]));
    }

    #[test]
    fn vanishing_form_has_valuation_one() {
        let p = pt(1, 5);
        assert_eq!(HomPoly::vanishing_at(&p).valuation_at(&p), Order::Finite(1));
        let q = pt(0, 1);
        assert_eq!(HomPoly::vanishing_at(&q).valuation_at(&q), Order::Finite(1));
    }

    #[test]
    fn expansion_matches_evaluation() {
        let g = form(&[2, -3, 0, 5]);
        let p = pt(1, 7);
        let e = g.expand_at(&p, 4);
        assert_eq!(e.coeff(0), g.eval(&p));
    }
}
