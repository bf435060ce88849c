//! Jets of curves in affine charts and their lifts through blowups.

use crate::algebra::{P1Point, Scalar, TruncatedSeries};
use crate::morphism::CoefficientLayout;

use super::system::{ConstraintSystem, RowSource, RowTag};
use super::IncidenceError;

/// A `k`-jet of a curve germ in affine coordinates: one series per coordinate,
/// each with `k + 1` coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalJet<S> {
    pub coords: Vec<TruncatedSeries<S>>,
}

impl<S: Scalar> LocalJet<S> {
    pub fn new(coords: Vec<TruncatedSeries<S>>) -> Self {
        let k = coords.first().map_or(0, |c| c.order());
        assert!(coords.iter().all(|c| c.order() == k), "jet coordinates have different orders");
        LocalJet { coords }
    }

    /// `k` for a `k`-jet.
    pub fn order(&self) -> usize {
        self.coords.first().map_or(0, |c| c.order()).saturating_sub(1)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn truncate(&self, k: usize) -> Self {
        LocalJet { coords: self.coords.iter().map(|c| c.truncate(k + 1)).collect() }
    }

    /// Value at the closed point.
    pub fn origin(&self) -> Vec<S> {
        self.coords.iter().map(|c| c.coeff(0)).collect()
    }

    /// Translates so that `origin` becomes the zero point.
    pub fn recenter(&self, origin: &[S]) -> Self {
        LocalJet {
            coords: self
                .coords
                .iter()
                .zip(origin)
                .map(|(c, o)| c.sub(&TruncatedSeries::one(c.order()).scale(o)))
                .collect(),
        }
    }
}

/// Chart of a blowup along a coordinate subspace: `divisor` is the coordinate
/// that cuts out the exceptional divisor, `divided` the other normal coordinates.
/// Remaining coordinates run along the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetChart {
    pub divisor: usize,
    pub divided: Vec<usize>,
}

impl JetChart {
    /// Chart of a point blowup in `dim` coordinates.
    pub fn point(dim: usize, divisor: usize) -> Self {
        JetChart { divisor, divided: (0..dim).filter(|&j| j != divisor).collect() }
    }
}

/// `(s_c, s_j / s_c, y) mod t^k` for a transversal `k`-jet `(s_c, s_j, y)`.
pub fn lift_jet<S: Scalar>(jet: &LocalJet<S>, chart: &JetChart) -> Result<LocalJet<S>, IncidenceError> {
    let k = jet.order();
    let sc = &jet.coords[chart.divisor];
    if sc.valuation() != Some(1) {
        return Err(IncidenceError::NotTransversal);
    }
    if chart.divided.iter().any(|&j| !jet.coords[j].coeff(0).is_zero()) {
        return Err(IncidenceError::NotOnCenter);
    }
    let unit = sc.shift_down(1);
    let coords = jet
        .coords
        .iter()
        .enumerate()
        .map(|(j, s)| {
            if chart.divided.contains(&j) {
                s.shift_down(1).invert_multiply(&unit).expect("transversal")
            } else {
                s.truncate(k)
            }
        })
        .collect();
    Ok(LocalJet { coords })
}

/// `(u_c, u_c u_j, y)`: the blowup map in the chart.
pub fn blowdown<S: Scalar>(jet: &LocalJet<S>, chart: &JetChart) -> LocalJet<S> {
    let uc = &jet.coords[chart.divisor];
    LocalJet {
        coords: jet
            .coords
            .iter()
            .enumerate()
            .map(|(j, u)| if chart.divided.contains(&j) { uc.mul(u) } else { u.clone() })
            .collect(),
    }
}

/// Prescribed `k`-jet at a domain point: in the chart at `base`, the affine
/// coordinates of the curve must agree with `base + values` modulo `t^(k+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetPrescription<S> {
    pub point: P1Point<S>,
    /// Homogeneous coordinates per factor.
    pub base: Vec<Vec<S>>,
    /// One series per affine coordinate, factors in order.
    pub values: LocalJet<S>,
}

impl<S: Scalar> JetPrescription<S> {
    pub fn order(&self) -> usize {
        self.values.order()
    }
}

/// Rows `f_j - (q_j + v_j(t)) f_piv ≡ 0 mod t^(k+1)` for every prescription.
pub fn compile_jets<S: Scalar>(
    layout: &CoefficientLayout,
    prescriptions: &[JetPrescription<S>],
) -> Result<ConstraintSystem<S>, IncidenceError> {
    for (a, x) in prescriptions.iter().enumerate() {
        if prescriptions[..a].iter().any(|y| y.point == x.point) {
            return Err(IncidenceError::DiagonalViolation(a));
        }
    }
    let dims = layout.dims();
    let mut sys = ConstraintSystem::new(layout.clone());
    for (a, jet) in prescriptions.iter().enumerate() {
        let n: usize = dims.iter().sum();
        if jet.base.len() != dims.len() || jet.values.dim() != n {
            return Err(IncidenceError::Shape(format!("jet {a} does not match the ambient space")));
        }
        let mut g = 0;
        for (k, qk) in jet.base.iter().enumerate() {
            if qk.len() != dims[k] + 1 {
                return Err(IncidenceError::Shape(format!("jet {a}: base has the wrong shape")));
            }
            let piv = qk
                .iter()
                .position(|x| !x.is_zero())
                .ok_or(IncidenceError::ZeroTarget { datum: a, factor: k })?;
            let inv = qk[piv].inverse().unwrap();
            for j in (0..qk.len()).filter(|&j| j != piv) {
                let v = &jet.values.coords[g];
                g += 1;
                let target = v.add(&TruncatedSeries::one(v.order()).scale(&(qk[j].clone() * inv.clone())));
                for r in 0..target.order() {
                    let mut row = sys.taylor_row(k, &[(j, S::one())], &jet.point, r);
                    for b in 0..=r {
                        let c = target.coeff(b);
                        if c.is_zero() {
                            continue;
                        }
                        let sub = sys.taylor_row(k, &[(piv, c)], &jet.point, r - b);
                        for (x, y) in row.iter_mut().zip(sub) {
                            if !y.is_zero() {
                                *x = x.clone() - y;
                            }
                        }
                    }
                    sys.push(row, RowTag { source: RowSource::Jet(a), factor: k });
                }
            }
        }
    }
    Ok(sys)
}
