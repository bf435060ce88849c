use rand::Rng;

use crate::algebra::{Field, Order};
use crate::geometry::{BlowupTower, CenterKind, CurveClass};
use crate::morphism::{
    contacts_at, h1_twist_vanishes, point_contact_order, pushforward_and_multiplicities,
    splitting_tangent_pullback, MorphismP1, SplittingType, TwistVanishing,
};

use super::compile::{resolve_target, IncidenceDatum};
use super::fiber::FiberDescription;
use super::IncidenceError;

/// Default number of draws before giving up on a generic fiber member.
pub const DEFAULT_RETRIES: usize = 8;

/// A fiber member with exact contacts and its freeness diagnostics.
#[derive(Clone, Debug)]
pub struct SampleReport<S> {
    pub morphism: MorphismP1<S>,
    /// Draws used, including the successful one.
    pub attempts: usize,
    pub splitting: Vec<SplittingType>,
    /// `sum_i (m_i + 1) e_i^t`.
    pub twist: i64,
    pub twist_vanishing: TwistVanishing,
    /// Every splitting entry is nonnegative.
    pub free: bool,
}

/// Whether `f` is a morphism of class `beta` meeting the data with exactly
/// the prescribed contacts.
pub fn has_exact_contacts<F: Field>(
    field: &F,
    f: &MorphismP1<F::Elem>,
    tower: &BlowupTower,
    beta: &CurveClass,
    data: &[IncidenceDatum<F::Elem>],
) -> Result<bool, IncidenceError> {
    if !f.is_valid() {
        return Ok(false);
    }
    match pushforward_and_multiplicities(field, f, tower) {
        Ok(c) if &c == beta => {}
        _ => return Ok(false),
    }
    for (a, datum) in data.iter().enumerate() {
        let order = match tower.center(datum.center).kind {
            CenterKind::Infinitesimal(_) => contacts_at(field, f, tower, &datum.point)?[datum.center],
            CenterKind::Linear(_) => point_contact_order(f, &datum.point, &resolve_target(field, tower, datum, a)?),
        };
        if order != Order::Finite(datum.mult) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Draws random members of a σ-fiber until one has exact contacts, then
/// reports its tangent splitting and freeness at the twist `sum (m_i + 1) e_i^t`.
pub fn sample_fiber_member<F: Field, R: Rng + ?Sized>(
    field: &F,
    fiber: &FiberDescription<F::Elem>,
    tower: &BlowupTower,
    beta: &CurveClass,
    data: &[IncidenceDatum<F::Elem>],
    rng: &mut R,
    retries: usize,
) -> Result<SampleReport<F::Elem>, IncidenceError> {
    if fiber.is_empty() {
        return Err(IncidenceError::EmptyFiber);
    }
    for attempt in 1..=retries {
        let coeffs: Vec<F::Elem> = (0..fiber.kernel.len()).map(|_| field.random(rng)).collect();
        let f = MorphismP1::from_coefficients(fiber.layout(), &fiber.combine(&coeffs));
        if !has_exact_contacts(field, &f, tower, beta, data)? {
            continue;
        }
        let splitting = splitting_tangent_pullback(&f)?;
        let twist: i64 = tower
            .centers()
            .iter()
            .zip(&beta.e_total)
            .map(|(c, &e)| (c.m as i64 + 1) * e)
            .sum();
        let twist_vanishing = h1_twist_vanishes(&splitting, twist);
        let free = splitting.iter().all(|s| s.min().is_none_or(|m| m >= 0));
        return Ok(SampleReport { morphism: f, attempts: attempt, splitting, twist, twist_vanishing, free });
    }
    Err(IncidenceError::GenericSampleNotFound { attempts: retries })
}
