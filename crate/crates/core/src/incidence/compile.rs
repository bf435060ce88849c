//! Incidence data and their linear conditions.

use num_traits::Zero;
use rand::Rng;

use crate::algebra::{Field, P1Point, Scalar};
use crate::geometry::{strict_from_total, BlowupTower, CenterKind, CurveClass};
use crate::morphism::{lift_vec, root_point, CoefficientLayout};

use super::system::{ConstraintSystem, RowSource, RowTag};
use super::IncidenceError;

/// One point of the incidence cycle: the domain point `point` goes to
/// `target` on center `center` with multiplicity `mult`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceDatum<S> {
    pub point: P1Point<S>,
    pub center: usize,
    /// Homogeneous coordinates per factor of a point on a positive-dimensional
    /// linear center. Point and infinitesimal centers carry their own target.
    pub target: Option<Vec<Vec<S>>>,
    pub mult: usize,
}

impl<S: Scalar> IncidenceDatum<S> {
    pub fn simple(point: P1Point<S>, center: usize) -> Self {
        IncidenceDatum { point, center, target: None, mult: 1 }
    }
}

fn normalize<S: Scalar>(v: &[S]) -> Option<Vec<S>> {
    let inv = v.iter().find(|x| !x.is_zero())?.inverse()?;
    Some(v.iter().map(|x| x.clone() * inv.clone()).collect())
}

/// Target point of a datum on a linear center, normalized per factor.
pub(crate) fn resolve_target<F: Field>(
    field: &F,
    tower: &BlowupTower,
    datum: &IncidenceDatum<F::Elem>,
    index: usize,
) -> Result<Vec<Vec<F::Elem>>, IncidenceError> {
    let CenterKind::Linear(l) = &tower.center(datum.center).kind else {
        unreachable!("infinitesimal data have no explicit target");
    };
    let Some(q) = &datum.target else {
        return if l.is_point() {
            Ok(root_point(field, tower, datum.center)?)
        } else {
            Err(IncidenceError::MissingTarget(index))
        };
    };
    let dims = tower.ambient().factor_dims();
    if q.len() != dims.len() || q.iter().zip(dims).any(|(qk, &n)| qk.len() != n + 1) {
        return Err(IncidenceError::Shape(format!("datum {index}: target has the wrong shape")));
    }
    let mut out = Vec::with_capacity(q.len());
    for (k, qk) in q.iter().enumerate() {
        let qk = normalize(qk).ok_or(IncidenceError::ZeroTarget { datum: index, factor: k })?;
        for eq in l.factor_equations(k) {
            let l = lift_vec(field, eq)?;
            let v = l.iter().zip(&qk).fold(F::Elem::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
            if !v.is_zero() {
                return Err(IncidenceError::TargetOffCenter(index));
            }
        }
        out.push(qk);
    }
    Ok(out)
}

fn check_points<S: Scalar>(data: &[IncidenceDatum<S>]) -> Result<(), IncidenceError> {
    for (a, x) in data.iter().enumerate() {
        if let Some(b) = data[..a].iter().position(|y| y.point == x.point) {
            return Err(IncidenceError::RepeatedPoint(b, a));
        }
    }
    Ok(())
}

/// Vanishing of the minors `q_piv f_j - q_j f_piv` to order `mult` at `p`.
fn point_rows<S: Scalar>(
    sys: &mut ConstraintSystem<S>,
    q: &[Vec<S>],
    p: &P1Point<S>,
    mult: usize,
    source: RowSource,
) {
    for (k, qk) in q.iter().enumerate() {
        let piv = qk.iter().position(|x| !x.is_zero()).expect("normalized point");
        for j in (0..qk.len()).filter(|&j| j != piv) {
            for r in 0..mult {
                let row = sys.taylor_row(k, &[(j, qk[piv].clone()), (piv, -qk[j].clone())], p, r);
                sys.push(row, RowTag { source, factor: k });
            }
        }
    }
}

/// Conditions for passing through infinitesimal center `center` at `p`.
///
/// In the chart at the root point the curve has affine expansion `z(t)`. The
/// root gives `z ≡ 0 mod t`; a chain of depth `m` in chart `c` with first
/// direction `w` and zero directions below gives `z_j - w_j z_c ≡ 0 mod t^(m+1)`
/// for `j != c`. Other chains impose conditions that are not linear in the
/// coefficients and are rejected.
fn infinitesimal_rows<F: Field>(
    field: &F,
    tower: &BlowupTower,
    sys: &mut ConstraintSystem<F::Elem>,
    center: usize,
    p: &P1Point<F::Elem>,
    source: RowSource,
) -> Result<(), IncidenceError> {
    let root = tower.root(center);
    if !tower.center(root).is_point_like() {
        return Err(IncidenceError::NotPointLike(root));
    }
    let q = root_point(field, tower, root)?;
    point_rows(sys, &q, p, 1, source);
    let chain = tower.chain(center);
    let Some(first) = chain.first() else {
        return Ok(());
    };
    let ambient = tower.ambient();
    let dim = ambient.dim();
    let c = first.chart;
    let (kc, _) = ambient.affine_slot(c).expect("chart in range");
    let cross_factor = (0..dim)
        .filter(|&j| j != c && ambient.affine_slot(j).unwrap().0 != kc)
        .any(|j| !first.direction_at(j).is_zero());
    let bent = chain[1..].iter().any(|w| w.chart != c || w.direction.iter().any(|x| !x.is_zero()));
    if cross_factor || bent {
        return Err(IncidenceError::NonlinearPath(center));
    }
    let depth = chain.len();
    // homogeneous index of a global affine coordinate
    let homogeneous = |g: usize| {
        let (k, local) = ambient.affine_slot(g).unwrap();
        let piv = q[k].iter().position(|x| !x.is_zero()).unwrap();
        (k, piv, if local < piv { local } else { local + 1 })
    };
    let (_, _, hc) = homogeneous(c);
    for g in (0..dim).filter(|&g| g != c) {
        let (k, piv, hj) = homogeneous(g);
        let qk = &q[k];
        // F_j = q_piv f_j - q_j f_piv
        let mut combo = vec![(hj, qk[piv].clone()), (piv, -qk[hj].clone())];
        if k == kc {
            let w = field.from_rational(first.direction_at(g))?;
            combo.push((hc, -(w.clone() * qk[piv].clone())));
            combo.push((piv, w * qk[hc].clone()));
        }
        for r in 1..=depth {
            let row = sys.taylor_row(k, &combo, p, r);
            sys.push(row, RowTag { source, factor: k });
        }
    }
    Ok(())
}

fn layout_for(tower: &BlowupTower, degrees: &[usize]) -> Result<CoefficientLayout, IncidenceError> {
    let dims = tower.ambient().factor_dims();
    if degrees.len() != dims.len() {
        return Err(IncidenceError::Shape(format!("{} degrees for {} factors", degrees.len(), dims.len())));
    }
    Ok(CoefficientLayout::new(dims, degrees))
}

/// The linear system whose kernel is `H^0(K_P)` for the incidence cycle `data`.
pub fn compile_incidence<F: Field>(
    field: &F,
    tower: &BlowupTower,
    degrees: &[usize],
    data: &[IncidenceDatum<F::Elem>],
) -> Result<ConstraintSystem<F::Elem>, IncidenceError> {
    let layout = layout_for(tower, degrees)?;
    check_points(data)?;
    let positive_dim = (0..tower.len()).any(|i| tower.center_dim(i) > 0);
    let mut sys = ConstraintSystem::new(layout);
    for (a, datum) in data.iter().enumerate() {
        if datum.center >= tower.len() {
            return Err(IncidenceError::UnknownCenter(a));
        }
        if datum.mult == 0 {
            return Err(IncidenceError::BadMultiplicity(a));
        }
        match &tower.center(datum.center).kind {
            CenterKind::Infinitesimal(_) => {
                if datum.mult != 1 || datum.target.is_some() {
                    return Err(IncidenceError::BadMultiplicity(a));
                }
                infinitesimal_rows(field, tower, &mut sys, datum.center, &datum.point, RowSource::Datum(a))?;
            }
            CenterKind::Linear(_) => {
                if datum.mult > 1 && positive_dim {
                    return Err(IncidenceError::BadMultiplicity(a));
                }
                let q = resolve_target(field, tower, datum, a)?;
                point_rows(&mut sys, &q, &datum.point, datum.mult, RowSource::Datum(a));
            }
        }
    }
    Ok(sys)
}

/// Rows for one simple datum at a point-like center of any depth.
pub fn compile_infinitesimal<F: Field>(
    field: &F,
    tower: &BlowupTower,
    degrees: &[usize],
    center: usize,
    p: &P1Point<F::Elem>,
) -> Result<ConstraintSystem<F::Elem>, IncidenceError> {
    let layout = layout_for(tower, degrees)?;
    if center >= tower.len() {
        return Err(IncidenceError::UnknownCenter(0));
    }
    if !tower.center(center).is_point_like() {
        return Err(IncidenceError::NotPointLike(center));
    }
    let mut sys = ConstraintSystem::new(layout);
    infinitesimal_rows(field, tower, &mut sys, center, p, RowSource::Datum(0))?;
    Ok(sys)
}

/// Conditions a datum imposes counted with the order they reach: `mult` on
/// linear centers, `depth + 1` on infinitesimal ones.
pub(crate) fn datum_weight<S>(tower: &BlowupTower, datum: &IncidenceDatum<S>) -> i64 {
    match tower.center(datum.center).kind {
        CenterKind::Linear(_) => datum.mult as i64,
        CenterKind::Infinitesimal(_) => tower.center(datum.center).level as i64 + 1,
    }
}

/// Every center's `e^t` must equal the multiplicity of the data at it or
/// below it.
pub fn check_class<S>(tower: &BlowupTower, beta: &CurveClass, data: &[IncidenceDatum<S>]) -> Result<(), IncidenceError> {
    beta.check(tower)?;
    for i in 0..tower.len() {
        let got: i64 = data
            .iter()
            .filter(|d| d.center < tower.len() && (d.center == i || tower.ancestors(d.center).contains(&i)))
            .map(|d| d.mult as i64)
            .sum();
        if got != beta.e_total[i] {
            return Err(IncidenceError::ClassMismatch { center: i, expected: beta.e_total[i], got });
        }
    }
    Ok(())
}

/// A domain point not in `used`, uniform over the line plus infinity.
pub fn fresh_point<F: Field, R: Rng + ?Sized>(
    field: &F,
    rng: &mut R,
    used: &[P1Point<F::Elem>],
) -> P1Point<F::Elem> {
    loop {
        let p = match field.random_line_point(rng) {
            Some(a) => P1Point::affine(a),
            None => P1Point::infinity(),
        };
        if !used.contains(&p) {
            return p;
        }
    }
}

/// Random point on a linear center, normalized per factor.
pub fn random_center_point<F: Field, R: Rng + ?Sized>(
    field: &F,
    tower: &BlowupTower,
    center: usize,
    rng: &mut R,
) -> Result<Vec<Vec<F::Elem>>, IncidenceError> {
    let l = tower.center(center).as_linear().ok_or(IncidenceError::NotPointLike(center))?;
    let dims = tower.ambient().factor_dims();
    let mut out = Vec::with_capacity(dims.len());
    for (k, &n) in dims.iter().enumerate() {
        let span: Vec<Vec<F::Elem>> = l
            .factor_span(k, n)
            .iter()
            .map(|v| lift_vec(field, v))
            .collect::<Result<_, _>>()?;
        loop {
            let mut v = vec![F::Elem::zero(); n + 1];
            for b in &span {
                let c = field.random(rng);
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.clone() + c.clone() * y.clone();
                }
            }
            if let Some(v) = normalize(&v) {
                out.push(v);
                break;
            }
        }
    }
    Ok(out)
}

/// Random simple incidence data realizing `beta`: `e_i^s` data at each center,
/// at distinct random domain points, with random targets on positive-dimensional
/// centers.
pub fn random_data<F: Field, R: Rng + ?Sized>(
    field: &F,
    tower: &BlowupTower,
    beta: &CurveClass,
    rng: &mut R,
) -> Result<Vec<IncidenceDatum<F::Elem>>, IncidenceError> {
    beta.check(tower)?;
    let strict = strict_from_total(tower, beta);
    if let Some(i) = strict.iter().position(|&e| e < 0) {
        return Err(IncidenceError::NotRealizable(i));
    }
    let mut data = Vec::new();
    let mut used = Vec::new();
    for (i, &e) in strict.iter().enumerate() {
        for _ in 0..e {
            let p = fresh_point(field, rng, &used);
            used.push(p.clone());
            let target = match &tower.center(i).kind {
                CenterKind::Linear(l) if !l.is_point() => Some(random_center_point(field, tower, i, rng)?),
                _ => None,
            };
            data.push(IncidenceDatum { point: p, center: i, target, mult: 1 });
        }
    }
    Ok(data)
}
