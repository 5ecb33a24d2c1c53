//! Surface-level queries on evolving spheres.

pub mod cm;
pub mod events;
pub mod fate;
pub mod profile;
pub mod roc;
pub mod state;
pub mod umbilic;

use crate::basis::BasisError;
use crate::flow::FlowError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("time range [{start}, {end}] is empty or not finite")]
    TimeRange { start: f64, end: f64 },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}
