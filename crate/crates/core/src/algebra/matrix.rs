use std::ops::{Index, IndexMut};

use super::field::Scalar;

/// Dense matrix over an exact field, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pub matrix: ExactMatrix<S>,
    pub pivots: Vec<usize>,
}

impl<S: Scalar> ExactMatrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data has the wrong length");
        ExactMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length; `cols` fixes the width when
    /// there are no rows.
    pub fn from_rows(cols: usize, rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        ExactMatrix {
            rows: n,
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<S>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    /// Stacks the rows of `other` below `self`.
    pub fn stack(&self, other: &ExactMatrix<S>) -> ExactMatrix<S> {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        ExactMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> ExactMatrix<S> {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn annihilates(&self, v: &[S]) -> bool {
        self.mul_vec(v).iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan elimination with exact pivoting (first nonzero entry).
    pub fn rref(&self) -> Echelon<S> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inverse().expect("nonzero pivot");
            for j in c..m.cols {
                let x = m[(r, j)].clone();
                if !x.is_zero() {
                    m[(r, j)] = x * inv.clone();
                }
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let pj = m[(r, j)].clone();
                    if !pj.is_zero() {
                        let x = m[(i, j)].clone() - factor.clone() * pj;
                        m[(i, j)] = x;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let Echelon { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = vec![S::zero(); self.cols];
                v[free] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    let x = matrix[(r, free)].clone();
                    if !x.is_zero() {
                        v[p] = -x;
                    }
                }
                v
            })
            .collect()
    }

    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

/// Whether two families of vectors span the same subspace.
pub fn same_span<S: Scalar>(dim: usize, a: &[Vec<S>], b: &[Vec<S>]) -> bool {
    let ma = ExactMatrix::from_rows(dim, a.to_vec());
    let mb = ExactMatrix::from_rows(dim, b.to_vec());
    let ra = ma.rank();
    ra == mb.rank() && ma.stack(&mb).rank() == ra
}

impl<S> Index<(usize, usize)> for ExactMatrix<S> {
    type Output = S;

    fn index(&self, (i, j): (usize, usize)) -> &S {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for ExactMatrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{Field, PrimeField, Rational, RationalField};

    fn q(rows: &[&[i64]]) -> ExactMatrix<Rational> {
        let f = RationalField::default();
        let cols = rows.first().map_or(0, |r| r.len());
        ExactMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| f.from_i64(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::<Rational>::identity(3).rank(), 3);
        assert_eq!(ExactMatrix::<Rational>::zeros(2, 4).rank(), 0);
        assert_eq!(q(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let k = q(&[&[1, 0]]).kernel_basis();
        assert_eq!(k.len(), 1);
        let f = RationalField::default();
        assert_eq!(k[0], vec![f.from_i64(0), f.from_i64(1)]);

        assert!(ExactMatrix::<Rational>::identity(2).kernel_basis().is_empty());

        let m = q(&[&[1, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        assert!(k.iter().all(|v| m.annihilates(v)));
    }

    #[test]
    fn empty_shapes() {
        let m = ExactMatrix::<Rational>::zeros(0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel_basis().len(), 3);
        let m = ExactMatrix::<Rational>::zeros(3, 0);
        assert!(m.kernel_basis().is_empty());
    }

    #[test]
    fn prime_field_rank_drop() {
        // det [[1, 2], [3, 6 + p]] = p
        let f = PrimeField::new(1_048_583, 0).unwrap();
        let m = ExactMatrix::from_rows(
            2,
            vec![
                vec![f.from_i64(1), f.from_i64(2)],
                vec![f.from_i64(3), f.from_i64(6 + 1_048_583)],
            ],
        );
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn span_equality() {
        let f = RationalField::default();
        let a = vec![vec![f.from_i64(1), f.from_i64(1)]];
        let b = vec![vec![f.from_i64(2), f.from_i64(2)]];
        let c = vec![vec![f.from_i64(1), f.from_i64(0)]];
        assert!(same_span(2, &a, &b));
        assert!(!same_span(2, &a, &c));
    }
}
