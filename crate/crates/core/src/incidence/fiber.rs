use std::collections::BTreeMap;

use num_traits::One;
use rand::Rng;

use crate::algebra::{ExactMatrix, Field, P1Point, Scalar};
use crate::geometry::{expected_fiber_dim, BlowupTower, CenterKind, CurveClass, FiberDimension};
use crate::morphism::{splitting_from_twist_profile, CoefficientLayout, MorphismError, SplittingType};

use super::compile::{check_class, compile_incidence, datum_weight, fresh_point, resolve_target, IncidenceDatum};
use super::jets::{compile_jets, JetPrescription};
use super::system::{ConstraintSystem, RowSource, RowTag};
use super::IncidenceError;

/// How many times the twist point is redrawn before a profile is declared inconsistent.
pub const TWIST_RETRIES: usize = 5;

/// Solved fiber: the kernel of a compiled system and what is known about it.
#[derive(Clone, Debug)]
pub struct FiberDescription<S> {
    pub system: ConstraintSystem<S>,
    pub kernel: Vec<Vec<S>>,
    pub affine_dim: usize,
    /// `None` when the fiber is empty.
    pub projective_dim: Option<usize>,
    pub expected: Option<FiberDimension>,
    pub matches_expected: Option<bool>,
    /// Some datum forces a positive-degree factor of every member to be constant.
    pub degenerate: bool,
    /// Splitting of `K_P` per factor (σ-fibers only).
    pub kp_splitting: Vec<SplittingType>,
    /// `(d_k - sum of condition orders, d_k)` per factor.
    pub splitting_bounds: Vec<(i64, i64)>,
    pub splitting_bounds_ok: bool,
}

impl<S: Scalar> FiberDescription<S> {
    fn from_system(system: ConstraintSystem<S>) -> Self {
        let kernel = system.kernel_basis();
        let affine_dim = kernel.len();
        FiberDescription {
            projective_dim: affine_dim.checked_sub(1),
            system,
            kernel,
            affine_dim,
            expected: None,
            matches_expected: None,
            degenerate: false,
            kp_splitting: Vec::new(),
            splitting_bounds: Vec::new(),
            splitting_bounds_ok: true,
        }
    }

    pub fn layout(&self) -> &CoefficientLayout {
        self.system.layout()
    }

    pub fn is_empty(&self) -> bool {
        self.projective_dim.is_none()
    }

    /// `sum_i c_i v_i` over the kernel basis.
    pub fn combine(&self, coeffs: &[S]) -> Vec<S> {
        let mut v = vec![S::zero(); self.layout().len()];
        for (c, b) in coeffs.iter().zip(&self.kernel) {
            if c.is_zero() {
                continue;
            }
            for (x, y) in v.iter_mut().zip(b) {
                if !y.is_zero() {
                    *x = x.clone() + c.clone() * y.clone();
                }
            }
        }
        v
    }
}

/// Whether every kernel vector makes all minors of factor `k` at `q` vanish identically.
fn forced_constant<S: Scalar>(sys: &ConstraintSystem<S>, kernel: &[Vec<S>], k: usize, q: &[S]) -> bool {
    let d = sys.layout().degrees()[k];
    let piv = q.iter().position(|x| !x.is_zero()).unwrap();
    let p = P1Point::affine(S::zero());
    (0..q.len()).filter(|&j| j != piv).all(|j| {
        (0..=d).all(|r| {
            let row = sys.taylor_row(k, &[(j, q[piv].clone()), (piv, -q[j].clone())], &p, r);
            let m = ExactMatrix::from_rows(row.len(), vec![row]);
            kernel.iter().all(|v| m.annihilates(v))
        })
    })
}

/// `h^0(K_P(-t))` of factor `k`: sections vanishing to order `t` at `aux` for
/// `t > 0`, the same conditions on forms of degree `d_k - t` otherwise.
fn twisted_h0<F: Field>(
    field: &F,
    tower: &BlowupTower,
    degrees: &[usize],
    data: &[IncidenceDatum<F::Elem>],
    base: &ConstraintSystem<F::Elem>,
    k: usize,
    t: i64,
    aux: &P1Point<F::Elem>,
) -> Result<usize, IncidenceError> {
    let d = degrees[k] as i64;
    if t > d {
        return Ok(0);
    }
    if t <= 0 {
        let mut shifted = degrees.to_vec();
        shifted[k] = (d - t) as usize;
        let sys = compile_incidence(field, tower, &shifted, data)?;
        let block = sys.factor_block(k);
        return Ok(block.cols() - block.rank());
    }
    let mut sys = base.clone();
    for j in 0..=tower.ambient().factor_dims()[k] {
        for r in 0..t as usize {
            let row = sys.taylor_row(k, &[(j, F::Elem::one())], aux, r);
            sys.push(row, RowTag { source: RowSource::Twist(j), factor: k });
        }
    }
    let block = sys.factor_block(k);
    Ok(block.cols() - block.rank())
}

/// Splitting of `K_P` restricted to factor `k`, decoded from its twist profile.
pub fn kp_splitting<F: Field, R: Rng + ?Sized>(
    field: &F,
    tower: &BlowupTower,
    degrees: &[usize],
    data: &[IncidenceDatum<F::Elem>],
    sys: &ConstraintSystem<F::Elem>,
    k: usize,
    rng: &mut R,
) -> Result<SplittingType, IncidenceError> {
    let d = degrees[k] as i64;
    let n = tower.ambient().factor_dims()[k];
    let weight: i64 = data.iter().map(|x| datum_weight(tower, x)).sum();
    let degree = (n as i64 + 1) * d - sys.factor_rows(k) as i64;
    let used: Vec<P1Point<F::Elem>> = data.iter().map(|x| x.point.clone()).collect();
    let mut last = None;
    for _ in 0..=TWIST_RETRIES {
        let aux = fresh_point(field, rng, &used);
        let mut profile = BTreeMap::new();
        for t in d - weight..=d + 1 {
            profile.insert(t, twisted_h0(field, tower, degrees, data, sys, k, t, &aux)?);
        }
        match splitting_from_twist_profile(&profile, n + 1, degree) {
            Ok(s) => return Ok(s),
            Err(e) => last = Some(e),
        }
    }
    Err(last.map(IncidenceError::from).unwrap_or(IncidenceError::Morphism(MorphismError::ProfileInconsistent(
        "no profile".into(),
    ))))
}

/// The σ-fiber over the incidence cycle `data`: kernel, dimensions, flags and
/// the splitting of `K_P`.
pub fn sigma_fiber<F: Field, R: Rng + ?Sized>(
    field: &F,
    tower: &BlowupTower,
    beta: &CurveClass,
    data: &[IncidenceDatum<F::Elem>],
    rng: &mut R,
) -> Result<FiberDescription<F::Elem>, IncidenceError> {
    check_class(tower, beta, data)?;
    let degrees: Vec<usize> = beta.degrees.iter().map(|&d| d as usize).collect();
    let sys = compile_incidence(field, tower, &degrees, data)?;
    let mut fiber = FiberDescription::from_system(sys);

    let expected = expected_fiber_dim(tower, beta);
    fiber.matches_expected = Some(match fiber.projective_dim {
        Some(p) => p as i64 == expected.value,
        None => expected.expected_empty,
    });
    fiber.expected = Some(expected);

    if !fiber.is_empty() {
        for (a, datum) in data.iter().enumerate() {
            if matches!(tower.center(datum.center).kind, CenterKind::Infinitesimal(_)) {
                continue;
            }
            let q = resolve_target(field, tower, datum, a)?;
            if (0..q.len()).any(|k| degrees[k] > 0 && forced_constant(&fiber.system, &fiber.kernel, k, &q[k])) {
                fiber.degenerate = true;
            }
        }
    }

    let weight: i64 = data.iter().map(|x| datum_weight(tower, x)).sum();
    for k in 0..degrees.len() {
        let split = kp_splitting(field, tower, &degrees, data, &fiber.system, k, rng)?;
        let (lo, hi) = (degrees[k] as i64 - weight, degrees[k] as i64);
        fiber.splitting_bounds_ok &= split.entries().iter().all(|&x| lo <= x && x <= hi);
        fiber.splitting_bounds.push((lo, hi));
        fiber.kp_splitting.push(split);
    }
    Ok(fiber)
}

/// The τ-fiber: morphisms of the given degrees with prescribed jets.
pub fn tau_fiber<S: Scalar>(
    dims: &[usize],
    degrees: &[usize],
    prescriptions: &[JetPrescription<S>],
) -> Result<FiberDescription<S>, IncidenceError> {
    let layout = CoefficientLayout::new(dims, degrees);
    Ok(FiberDescription::from_system(compile_jets(&layout, prescriptions)?))
}
