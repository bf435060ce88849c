use super::field::Scalar;
use super::AlgebraError;

/// Power series known modulo `t^order`; coefficients of `1, t, ..., t^(order-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![S::zero(); order],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 0 {
            s.coeffs[0] = S::one();
        }
        s
    }

    /// The parameter `t` itself.
    pub fn parameter(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order > 1 {
            s.coeffs[1] = S::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend precision by truncation");
        TruncatedSeries::new(self.coeffs[..order].to_vec())
    }

    /// Index of the first nonzero coefficient; `None` if zero to this precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncatedSeries::new(
            (0..n)
                .map(|i| self.coeffs[i].clone() + other.coeffs[i].clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncatedSeries::new(
            (0..n)
                .map(|i| self.coeffs[i].clone() - other.coeffs[i].clone())
                .collect(),
        )
    }

    pub fn scale(&self, c: &S) -> Self {
        TruncatedSeries::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    /// Product modulo `t^min(order)`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![S::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        TruncatedSeries::new(out)
    }

    /// Divides by `t^k`; the result is known modulo `t^(order - k)`.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(
            self.coeffs.iter().take(k).all(|c| c.is_zero()),
            "series is not divisible by t^{k}"
        );
        TruncatedSeries::new(self.coeffs[k.min(self.order())..].to_vec())
    }

    /// Multiplies by `t^k`, keeping the order.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut c = vec![S::zero(); k.min(n)];
        c.extend(self.coeffs.iter().take(n.saturating_sub(k)).cloned());
        TruncatedSeries::new(c)
    }

    /// Returns `w = self / v` with `w * v ≡ self (mod t^order)`.
    pub fn invert_multiply(&self, v: &Self) -> Result<Self, AlgebraError> {
        let n = self.order().min(v.order());
        let v0 = v.coeffs.first().filter(|c| !c.is_zero());
        let inv0 = v0.and_then(|c| c.inverse()).ok_or(AlgebraError::DivisionByNonUnit)?;
        let mut w: Vec<S> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                if !v.coeffs[j].is_zero() {
                    acc = acc - v.coeffs[j].clone() * w[k - j].clone();
                }
            }
            w.push(acc * inv0.clone());
        }
        Ok(TruncatedSeries::new(w))
    }
}

/// Free-function form of [`TruncatedSeries::invert_multiply`].
pub fn series_invert_multiply<S: Scalar>(
    u: &TruncatedSeries<S>,
    v: &TruncatedSeries<S>,
) -> Result<TruncatedSeries<S>, AlgebraError> {
    u.invert_multiply(v)
}
