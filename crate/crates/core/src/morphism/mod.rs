//! Morphisms from the projective line, their contact orders with blowup
//! centers, and splitting types of pulled-back bundles.

mod contact;
mod map;
mod splitting;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use contact::{
    contact_order, contacts_at, linear_contact_order, point_contact_order, pushforward_and_multiplicities,
    ContactRecord,
};
pub(crate) use contact::{lift_vec, root_point};
pub use map::{CoefficientLayout, MorphismP1, Validity};
pub use splitting::{h1_twist_vanishes, splitting_from_twist_profile, splitting_tangent_pullback, SplittingType, TwistVanishing};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("malformed morphism: {0}")]
    Shape(String),
    #[error("factor {0} has only zero components")]
    AllZeroFactor(usize),
    #[error("the morphism has a base point")]
    BasePoint,
    #[error("the image lies inside center {0}")]
    ImageInsideCenter(usize),
    #[error("center {0} is not a point")]
    NotPointLike(usize),
    #[error("inconsistent twist profile: {0}")]
    ProfileInconsistent(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
