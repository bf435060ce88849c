use serde::{Deserialize, Serialize};

use super::{BlowupTower, GeometryError};

/// Numerical class: degrees against the pulled-back hyperplanes and
/// intersection numbers with the total transforms of the exceptional divisors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub degrees: Vec<i64>,
    pub e_total: Vec<i64>,
}

impl CurveClass {
    pub fn new(degrees: Vec<i64>, e_total: Vec<i64>) -> Self {
        CurveClass { degrees, e_total }
    }

    /// Shape and degree checks against a tower.
    pub fn check(&self, tower: &BlowupTower) -> Result<(), GeometryError> {
        let m = tower.ambient().num_factors();
        if self.degrees.len() != m {
            return Err(GeometryError::ClassShape { what: "degrees", expected: m, got: self.degrees.len() });
        }
        if self.e_total.len() != tower.len() {
            return Err(GeometryError::ClassShape {
                what: "multiplicities",
                expected: tower.len(),
                got: self.e_total.len(),
            });
        }
        if self.degrees.iter().any(|&d| d < 0) || self.degrees.iter().all(|&d| d == 0) {
            return Err(GeometryError::DegenerateClass);
        }
        Ok(())
    }

    pub fn total_multiplicity(&self) -> i64 {
        self.e_total.iter().sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// Every center lies over a point of `X`.
    AllPoints,
    /// All centers are linear, hence convex, with pairwise disjoint images.
    DisjointConvex,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// `d_k - sum_i (m_i + 1) e_i^t` per factor.
    pub factor_margins: Vec<i64>,
    /// `e_i^t` per center.
    pub center_margins: Vec<i64>,
    pub pass: bool,
    pub clause: Clause,
}

pub fn check_main_hypotheses(tower: &BlowupTower, beta: &CurveClass) -> HypothesisReport {
    let weighted: i64 = tower
        .centers()
        .iter()
        .zip(&beta.e_total)
        .map(|(c, &e)| (c.m as i64 + 1) * e)
        .sum();
    let factor_margins: Vec<i64> = beta.degrees.iter().map(|&d| d - weighted).collect();
    let center_margins = beta.e_total.clone();
    let pass = factor_margins.iter().chain(&center_margins).all(|&x| x >= 0);

    let all_points = tower.centers().iter().all(|c| tower.center(tower.root(c.index)).is_point_like());
    let disjoint_linear = tower.centers().iter().all(|c| c.level == 0)
        && (0..tower.len()).all(|a| (a + 1..tower.len()).all(|b| tower.linear_centers_meet(a, b) == Some(false)));
    let clause = if all_points {
        Clause::AllPoints
    } else if disjoint_linear {
        Clause::DisjointConvex
    } else {
        Clause::Neither
    };
    HypothesisReport { factor_margins, center_margins, pass, clause }
}

/// `e_i^s = e_i^t - sum over immediate children of e_j^t`.
pub fn strict_from_total(tower: &BlowupTower, beta: &CurveClass) -> Vec<i64> {
    tower
        .centers()
        .iter()
        .map(|c| beta.e_total[c.index] - c.children.iter().map(|&j| beta.e_total[j]).sum::<i64>())
        .collect()
}

/// `-K_{X_r} . beta + dim X` with `K_{X_r} = pi^* K_X + sum (codim Z_i - 1) E_i^t`.
pub fn expected_dim_mor(tower: &BlowupTower, beta: &CurveClass) -> i64 {
    let ambient = tower.ambient();
    let anticanonical: i64 = ambient
        .factor_dims()
        .iter()
        .zip(&beta.degrees)
        .map(|(&n, &d)| (n as i64 + 1) * d)
        .sum();
    let exceptional: i64 = (0..tower.len())
        .map(|i| (tower.center_codim(i) as i64 - 1) * beta.e_total[i])
        .sum();
    anticanonical - exceptional + ambient.dim() as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDimension {
    pub value: i64,
    pub expected_empty: bool,
}

/// Projective dimension of the space of coefficient vectors, minus `dim X`
/// conditions per incidence on `X` and `dim X - 1` per infinitesimal level.
pub fn expected_fiber_dim(tower: &BlowupTower, beta: &CurveClass) -> FiberDimension {
    let ambient = tower.ambient();
    let n = ambient.dim() as i64;
    let space: i64 = ambient
        .factor_dims()
        .iter()
        .zip(&beta.degrees)
        .map(|(&nk, &d)| (d + 1) * (nk as i64 + 1))
        .sum::<i64>()
        - 1;
    let conditions: i64 = tower
        .centers()
        .iter()
        .zip(&beta.e_total)
        .map(|(c, &e)| if c.level == 0 { n * e } else { (n - 1) * e })
        .sum();
    let value = space - conditions;
    FiberDimension { value, expected_empty: value < 0 }
}

/// `min_k (d_k - e^t)` for a single blowup.
pub fn c_h(tower: &BlowupTower, beta: &CurveClass) -> Result<i64, GeometryError> {
    if tower.len() != 1 {
        return Err(GeometryError::WrongArity(tower.len()));
    }
    let e = beta.e_total[0];
    Ok(beta.degrees.iter().map(|&d| d - e).min().expect("at least one factor"))
}
