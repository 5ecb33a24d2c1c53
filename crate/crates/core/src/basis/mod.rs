//! Exact polynomial algebra in `cos θ`, Legendre modes, modal
//! decompositions and the quadrature maps between `s`, `r` and `ψ`.

pub mod coeffs;
pub mod fit;
pub mod legendre;
pub mod lemmas;
pub mod poly;
pub mod quadrature;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BasisError {
    #[error("associated Legendre degree l={l} is below order m={m}")]
    LegendreDegree { l: usize, m: usize },
    #[error("Legendre argument {0} lies outside [-1, 1]")]
    LegendreArgument(f64),
    #[error("astigmatism does not vanish at both poles; no closed surface exists")]
    NotVanishingAtPoles,
    #[error("odd sin prefactor cannot be expanded in cos θ")]
    OddPrefactor,
    #[error("trigonometric part has {len} entries but n = {n} allows at most n")]
    TrigLength { n: usize, len: usize },
    #[error("fit residual {residual:e} exceeds tolerance {tolerance:e}")]
    FitResidual { residual: f64, tolerance: f64 },
    #[error("fit needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample at θ = {0} lies outside (0, π) or is not finite")]
    BadSample(f64),
    #[error("lemma outside its domain: l = {l}, m = {m}")]
    LemmaDomain { l: usize, m: usize },
}
