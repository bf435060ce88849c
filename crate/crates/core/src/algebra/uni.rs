//! Univariate polynomials with ascending coefficients.
//!
//! Used for dehomogenized binary forms: gcds and the coprime base that lets
//! contact orders be summed over the roots of a form without factoring it.

use super::field::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<S> {
    coeffs: Vec<S>,
}

/// `n` as a scalar, built from repeated doubling of one.
pub fn scalar_from_u64<S: Scalar>(mut n: u64) -> S {
    let mut acc = S::zero();
    let mut pow = S::one();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc + pow.clone();
        }
        pow = pow.clone() + pow;
        n >>= 1;
    }
    acc
}

impl<S: Scalar> UniPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![S::one()],
        }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inverse().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        UniPoly::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(S::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(S::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv = divisor.leading().unwrap().inverse().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![S::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() * inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * b.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * scalar_from_u64::<S>(i as u64))
                .collect(),
        )
    }

    /// Product of the distinct monic irreducible factors (degrees stay below
    /// the characteristic in every use here).
    pub fn radical(&self) -> Self {
        if self.is_constant() {
            return Self::one();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Largest `k` with `place^k | self`; `None` when `self` is zero.
    pub fn multiplicity(&self, place: &Self) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        assert!(!place.is_constant(), "a place must have positive degree");
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(place) {
            cur = q;
            k += 1;
        }
        Some(k)
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

/// Pairwise coprime, squarefree, monic, nonconstant polynomials such that
/// every input's multiplicity at a root depends only on which base element
/// the root belongs to.
pub fn coprime_base<S: Scalar>(polys: &[UniPoly<S>]) -> Vec<UniPoly<S>> {
    let mut base: Vec<UniPoly<S>> = Vec::new();
    for p in polys.iter().filter(|p| !p.is_constant()) {
        // p, p / rad p, ... : a root has multiplicity >= k iff it divides layer k.
        let mut layer = p.monic();
        while !layer.is_constant() {
            let rad = layer.radical();
            insert_squarefree(&mut base, rad.clone());
            layer = layer.div_exact(&rad).expect("radical divides");
        }
    }
    base
}

fn insert_squarefree<S: Scalar>(base: &mut Vec<UniPoly<S>>, mut q: UniPoly<S>) {
    let mut next = Vec::with_capacity(base.len() + 1);
    for b in base.drain(..) {
        let g = b.gcd(&q);
        if g.is_constant() {
            next.push(b);
            continue;
        }
        let rest = b.div_exact(&g).expect("gcd divides");
        q = q.div_exact(&g).expect("gcd divides");
        next.push(g);
        if !rest.is_constant() {
            next.push(rest.monic());
        }
    }
    if !q.is_constant() {
        next.push(q.monic());
    }
    *base = next;
}
