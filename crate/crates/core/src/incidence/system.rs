use serde::{Deserialize, Serialize};

use crate::algebra::poly::taylor_functional;
use crate::algebra::{ExactMatrix, P1Point, Scalar};
use crate::morphism::CoefficientLayout;

/// Where a constraint row came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "index")]
pub enum RowSource {
    Datum(usize),
    Jet(usize),
    /// Vanishing at the auxiliary twist point.
    Twist(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowTag {
    pub source: RowSource,
    pub factor: usize,
}

/// Linear conditions on the coefficient space of morphisms of fixed degrees.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem<S> {
    layout: CoefficientLayout,
    matrix: ExactMatrix<S>,
    tags: Vec<RowTag>,
}

impl<S: Scalar> ConstraintSystem<S> {
    pub fn new(layout: CoefficientLayout) -> Self {
        let cols = layout.len();
        ConstraintSystem { layout, matrix: ExactMatrix::zeros(0, cols), tags: Vec::new() }
    }

    pub fn layout(&self) -> &CoefficientLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ExactMatrix<S> {
        &self.matrix
    }

    pub fn tags(&self) -> &[RowTag] {
        &self.tags
    }

    pub fn num_rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn push(&mut self, row: Vec<S>, tag: RowTag) {
        debug_assert!(row
            .iter()
            .enumerate()
            .all(|(i, x)| x.is_zero() || self.layout.block(tag.factor).contains(&i)));
        self.matrix.push_row(row);
        self.tags.push(tag);
    }

    pub fn extend(&mut self, other: ConstraintSystem<S>) {
        assert_eq!(self.layout, other.layout);
        self.matrix = self.matrix.stack(&other.matrix);
        self.tags.extend(other.tags);
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        self.matrix.kernel_basis()
    }

    /// `dim H^0(K_P)` = coefficient-space dimension minus rank.
    pub fn affine_kernel_dim(&self) -> usize {
        self.layout.len() - self.rank()
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.matrix.annihilates(v)
    }

    /// Rows of factor `k` restricted to that factor's columns.
    pub fn factor_block(&self, k: usize) -> ExactMatrix<S> {
        let block = self.layout.block(k);
        let rows = (0..self.num_rows())
            .filter(|&r| self.tags[r].factor == k)
            .map(|r| self.matrix.row(r)[block.clone()].to_vec())
            .collect();
        ExactMatrix::from_rows(block.len(), rows)
    }

    pub fn factor_rows(&self, k: usize) -> usize {
        self.tags.iter().filter(|t| t.factor == k).count()
    }

    /// Row for the coefficient of `u^r` at `p` of `sum_j c_j f_{k,j}`.
    pub fn taylor_row(&self, k: usize, combo: &[(usize, S)], p: &P1Point<S>, r: usize) -> Vec<S> {
        let d = self.layout.degrees()[k];
        let w = taylor_functional(d, p, r);
        let mut row = vec![S::zero(); self.layout.len()];
        for (j, c) in combo.iter().filter(|(_, c)| !c.is_zero()) {
            for (i, wi) in w.iter().enumerate().filter(|(_, wi)| !wi.is_zero()) {
                let col = self.layout.index(k, *j, i);
                row[col] = row[col].clone() + c.clone() * wi.clone();
            }
        }
        row
    }
}
