//! Independent finite-difference checks of the closed forms.

pub mod fd;
pub mod grid;
pub mod legpoly;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid needs at least 16 intervals, got {0}")]
    GridTooSmall(usize),
    #[error("time step must be positive and finite, got {0}")]
    BadTimeStep(f64),
    #[error("equation is not parabolic for slope {0} <= 1")]
    NotParabolic(f64),
    #[error("end time must be non-negative and finite, got {0}")]
    BadEndTime(f64),
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("unstable: sup-norm grew by {growth:.3e} by t = {time} (bound {bound:.3e})")]
    Unstable { time: f64, growth: f64, bound: f64 },
    #[error("pole closure for slope {lambda} needs {points} points; unsupported on this grid")]
    PoleClosure { lambda: f64, points: usize },
    #[error("degree {l} is below order {n}")]
    Degree { n: usize, l: usize },
}
