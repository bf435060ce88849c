//! Rational curves on blowups of products of projective spaces, by exact
//! linear algebra: incidence fibers, splitting types and jet conditions.

pub mod algebra;
pub mod geometry;
pub mod incidence;
pub mod morphism;
pub mod verify;

pub use algebra::{Field, Fp, PrimeField, Rational, RationalField, Scalar};

pub type RationalMatrix = algebra::ExactMatrix<Rational>;
pub type FpMatrix = algebra::ExactMatrix<Fp>;
pub type RationalForm = algebra::HomPoly<Rational>;
pub type FpForm = algebra::HomPoly<Fp>;
pub type RationalMorphism = morphism::MorphismP1<Rational>;
pub type FpMorphism = morphism::MorphismP1<Fp>;
pub type RationalFiber = incidence::FiberDescription<Rational>;
pub type FpFiber = incidence::FiberDescription<Fp>;
