//! The ambient product of projective spaces, blowup towers, curve classes and
//! the numerical hypotheses and dimension counts attached to them.

mod class;
mod tower;

use thiserror::Error;

pub use class::{
    c_h, check_main_hypotheses, expected_dim_mor, expected_fiber_dim, strict_from_total, Clause, CurveClass,
    FiberDimension, HypothesisReport,
};
pub use tower::{
    build_tower, normalize_first_nonzero, AmbientSpace, BlowupTower, Center, CenterKind, CenterSpec,
    InfinitesimalCenter, LinearCenter, TowerSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("the ambient space needs at least one factor")]
    EmptyAmbient,
    #[error("projective factors must have positive dimension")]
    ZeroDimensionalFactor,
    #[error("center {center}: parent {parent} does not exist")]
    ParentOutOfRange { center: usize, parent: usize },
    #[error("center {center}: parent references form a cycle")]
    CyclicParent { center: usize },
    #[error("center {center}: parent {parent} must precede it")]
    ParentAfterChild { center: usize, parent: usize },
    #[error("center {center}: parent {parent} is not a point")]
    ParentNotPoint { center: usize, parent: usize },
    #[error("{given} factors given but the ambient space has {factors}")]
    FactorOutOfRange { given: usize, factors: usize },
    #[error("factor {factor}: expected {expected} coordinates, got {got}")]
    BadFormLength { factor: usize, expected: usize, got: usize },
    #[error("factor {factor}: all point coordinates are zero")]
    ZeroPoint { factor: usize },
    #[error("factor {factor}: the equations cut out the empty set")]
    EmptyCenter { factor: usize },
    #[error("center {center} is the whole ambient space")]
    WholeSpaceCenter { center: usize },
    #[error("center {center}: chart {chart} is outside 0..{dim}")]
    ChartOutOfRange { center: usize, chart: usize, dim: usize },
    #[error("center {center}: direction needs {expected} values, got {got}")]
    DirectionLength { center: usize, expected: usize, got: usize },
    #[error("class has {got} {what}, expected {expected}")]
    ClassShape { what: &'static str, expected: usize, got: usize },
    #[error("degrees must be nonnegative with at least one positive")]
    DegenerateClass,
    #[error("operation needs exactly one center, the tower has {0}")]
    WrongArity(usize),
}
