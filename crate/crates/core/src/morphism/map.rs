use crate::algebra::{gcd_forms, HomPoly, Scalar};

use super::MorphismError;

/// Position of every coefficient of a morphism in one flat vector: factor
/// blocks in order, inside a block the components `f_0, ..., f_n`, each with
/// its `d + 1` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientLayout {
    dims: Vec<usize>,
    degrees: Vec<usize>,
    offsets: Vec<usize>,
    len: usize,
}

impl CoefficientLayout {
    pub fn new(dims: &[usize], degrees: &[usize]) -> Self {
        assert_eq!(dims.len(), degrees.len(), "one degree per factor");
        let mut offsets = Vec::with_capacity(dims.len());
        let mut len = 0;
        for (&n, &d) in dims.iter().zip(degrees) {
            offsets.push(len);
            len += (n + 1) * (d + 1);
        }
        CoefficientLayout { dims: dims.to_vec(), degrees: degrees.to_vec(), offsets, len }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Dimension of the whole coefficient space.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Column range of factor `k`.
    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        let start = self.offsets[k];
        start..start + (self.dims[k] + 1) * (self.degrees[k] + 1)
    }

    /// Column of coefficient `i` of component `j` in factor `k`.
    pub fn index(&self, k: usize, j: usize, i: usize) -> usize {
        debug_assert!(j <= self.dims[k] && i <= self.degrees[k]);
        self.offsets[k] + j * (self.degrees[k] + 1) + i
    }
}

/// A map `P^1 -> P^{n_1} x ... x P^{n_m}` given by forms of degree `d_k` per factor.
#[derive(Clone, Debug, PartialEq)]
pub struct MorphismP1<S> {
    factors: Vec<Vec<HomPoly<S>>>,
}

/// Base-point diagnostics of a morphism.
#[derive(Clone, Debug, PartialEq)]
pub struct Validity<S> {
    /// Normalized gcd of each factor's components.
    pub gcds: Vec<HomPoly<S>>,
    pub valid: bool,
}

impl<S: Scalar> MorphismP1<S> {
    pub fn new(factors: Vec<Vec<HomPoly<S>>>) -> Result<Self, MorphismError> {
        if factors.is_empty() {
            return Err(MorphismError::Shape("no factors".into()));
        }
        for (k, comps) in factors.iter().enumerate() {
            if comps.len() < 2 {
                return Err(MorphismError::Shape(format!("factor {k} needs at least two components")));
            }
            let d = comps[0].degree();
            if comps.iter().any(|c| c.degree() != d) {
                return Err(MorphismError::Shape(format!("factor {k} mixes degrees")));
            }
        }
        Ok(MorphismP1 { factors })
    }

    /// Reads a morphism from a flat coefficient vector.
    pub fn from_coefficients(layout: &CoefficientLayout, v: &[S]) -> Self {
        assert_eq!(v.len(), layout.len());
        let factors = (0..layout.dims().len())
            .map(|k| {
                let d = layout.degrees()[k];
                (0..=layout.dims()[k])
                    .map(|j| {
                        let start = layout.index(k, j, 0);
                        HomPoly::new(v[start..=start + d].to_vec())
                    })
                    .collect()
            })
            .collect();
        MorphismP1 { factors }
    }

    pub fn to_coefficients(&self) -> Vec<S> {
        self.factors
            .iter()
            .flat_map(|comps| comps.iter().flat_map(|c| c.coeffs().iter().cloned()))
            .collect()
    }

    pub fn layout(&self) -> CoefficientLayout {
        CoefficientLayout::new(&self.dims(), &self.degrees())
    }

    pub fn factors(&self) -> &[Vec<HomPoly<S>>] {
        &self.factors
    }

    pub fn factor(&self, k: usize) -> &[HomPoly<S>] {
        &self.factors[k]
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|c| c.len() - 1).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|c| c[0].degree()).collect()
    }

    pub fn scale(&self, c: &S) -> Self {
        MorphismP1 {
            factors: self.factors.iter().map(|comps| comps.iter().map(|f| f.scale(c)).collect()).collect(),
        }
    }

    /// Precomposition with `[s : t] -> [a s + b t : c s + d t]`.
    pub fn reparametrize(&self, a: &S, b: &S, c: &S, d: &S) -> Self {
        MorphismP1 {
            factors: self
                .factors
                .iter()
                .map(|comps| comps.iter().map(|f| f.compose_linear(a, b, c, d)).collect())
                .collect(),
        }
    }

    /// Per-factor gcd of the components; valid iff every gcd is constant.
    pub fn validate(&self) -> Result<Validity<S>, MorphismError> {
        let gcds = self
            .factors
            .iter()
            .enumerate()
            .map(|(k, comps)| gcd_forms(comps).map_err(|_| MorphismError::AllZeroFactor(k)))
            .collect::<Result<Vec<_>, _>>()?;
        let valid = gcds.iter().all(|g| g.degree() == 0);
        Ok(Validity { gcds, valid })
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok_and(|v| v.valid)
    }

    pub(crate) fn require_valid(&self) -> Result<(), MorphismError> {
        if self.validate()?.valid {
            Ok(())
        } else {
            Err(MorphismError::BasePoint)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Rational, RationalField};

    fn form(c: &[i64]) -> HomPoly<Rational> {
        let f = RationalField::default();
        HomPoly::new(c.iter().map(|&x| f.from_i64(x)).collect())
    }

    #[test]
    fn validity_examples() {
        let id = MorphismP1::new(vec![vec![form(&[1, 0]), form(&[0, 1])]]).unwrap();
        assert!(id.validate().unwrap().valid);

        let f = MorphismP1::new(vec![vec![form(&[1, 0, 0]), form(&[0, 1, 0])]]).unwrap();
        let v = f.validate().unwrap();
        assert!(!v.valid);
        assert_eq!(v.gcds[0], form(&[1, 0]));

        let conic = MorphismP1::new(vec![vec![form(&[1, 0, 0]), form(&[0, 1, 0]), form(&[0, 0, 1])]]).unwrap();
        assert!(conic.validate().unwrap().valid);

        let zero = MorphismP1::new(vec![vec![form(&[0, 0]), form(&[0, 0])]]).unwrap();
        assert_eq!(zero.validate(), Err(MorphismError::AllZeroFactor(0)));
    }

    #[test]
    fn coefficient_round_trip() {
        let f = MorphismP1::new(vec![
            vec![form(&[1, 2]), form(&[3, 4])],
            vec![form(&[5, 6, 7]), form(&[8, 9, 10]), form(&[11, 12, 13])],
        ])
        .unwrap();
        let layout = f.layout();
        assert_eq!(layout.len(), 4 + 9);
        assert_eq!(layout.index(1, 2, 1), 4 + 7);
        assert_eq!(MorphismP1::from_coefficients(&layout, &f.to_coefficients()), f);
    }
}
