//! Linear conditions from incidence data and jets; σ- and τ-fibers, the
//! kernel sheaf `K_P`, and jet lifting through blowup charts.

mod compile;
mod fiber;
mod jets;
mod sample;
mod system;
#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::geometry::GeometryError;
use crate::morphism::MorphismError;

pub use compile::{
    check_class, compile_incidence, compile_infinitesimal, fresh_point, random_center_point, random_data,
    IncidenceDatum,
};
pub use fiber::{kp_splitting, sigma_fiber, tau_fiber, FiberDescription, TWIST_RETRIES};
pub use jets::{blowdown, compile_jets, lift_jet, JetChart, JetPrescription, LocalJet};
pub use sample::{has_exact_contacts, sample_fiber_member, SampleReport, DEFAULT_RETRIES};
pub use system::{ConstraintSystem, RowSource, RowTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("data {0} and {1} share a domain point")]
    RepeatedPoint(usize, usize),
    #[error("jet {0} repeats a domain point")]
    DiagonalViolation(usize),
    #[error("datum {datum}: target is zero in factor {factor}")]
    ZeroTarget { datum: usize, factor: usize },
    #[error("datum {0}: target does not lie on its center")]
    TargetOffCenter(usize),
    #[error("datum {0}: a target point is required on a positive-dimensional center")]
    MissingTarget(usize),
    #[error("datum {0}: multiplicity not allowed here")]
    BadMultiplicity(usize),
    #[error("datum {0}: no such center")]
    UnknownCenter(usize),
    #[error("center {0} is not a point")]
    NotPointLike(usize),
    #[error("center {0}: the chart path does not give linear conditions")]
    NonlinearPath(usize),
    #[error("center {center}: data have total multiplicity {got}, the class needs {expected}")]
    ClassMismatch { center: usize, expected: i64, got: i64 },
    #[error("center {0}: the class has negative strict multiplicity")]
    NotRealizable(usize),
    #[error("jet is not transversal to the exceptional divisor")]
    NotTransversal,
    #[error("jet does not start on the center")]
    NotOnCenter,
    #[error("the fiber is empty")]
    EmptyFiber,
    #[error("no member with exact contacts in {attempts} draws")]
    GenericSampleNotFound { attempts: usize },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Morphism(#[from] MorphismError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
