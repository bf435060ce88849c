//! Exact scalars, matrices, binary forms and truncated power series.

pub mod field;
pub mod matrix;
pub mod poly;
pub mod rng;
pub mod series;
pub mod uni;

use thiserror::Error;

pub use field::{Field, FieldConfig, FieldKind, Fp, PrimeField, Rational, RationalField, Scalar};
pub use matrix::ExactMatrix;
pub use poly::{gcd_forms, HomPoly, Order, P1Point};
pub use series::{series_invert_multiply, TruncatedSeries};
pub use uni::UniPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by a series with zero constant term")]
    DivisionByNonUnit,
    #[error("all forms are zero")]
    AllZeroInput,
    #[error("(0, 0) is not a point of the projective line")]
    MalformedPoint,
    #[error("prime {0} is below the minimum 2^20")]
    PrimeTooSmall(u64),
    #[error("{0} is not a prime below 2^62")]
    NotPrime(u64),
    #[error("denominator of {value} vanishes modulo {prime}")]
    DenominatorVanishes { value: String, prime: u64 },
    #[error("not an exact number: {0:?}")]
    BadNumber(String),
}
