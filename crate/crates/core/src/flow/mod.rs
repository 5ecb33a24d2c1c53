//! Closed-form evolution under integer linear Hopf flow, plus the linear
//! Hopf spheres and soliton orbits.

pub mod chain;
pub mod hopf;
pub mod operators;
pub mod params;
pub mod rates;
pub mod series;
pub mod soliton;
pub mod solution;

use crate::basis::BasisError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("target radius must be positive, got {0}")]
    NonPositiveRadius(String),
    #[error("slope must exceed 1, got {0}")]
    SlopeTooSmall(f64),
    #[error("parameter {name} is not finite")]
    NonFinite { name: &'static str },
    #[error("initial support function differs from the modal reconstruction by a non-affine term")]
    SupportNotAffine,
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error(transparent)]
    Basis(#[from] BasisError),
}
