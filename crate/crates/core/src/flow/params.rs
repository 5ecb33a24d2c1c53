use super::FlowError;
use crate::scalar::{format_rational, rat, Rational, Scalar};
use num_traits::Signed;

/// Flow integer `n`, slope `λ = 1 + 1/(n+1)` and target mean radius `ψ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowParams {
    n: usize,
    lambda: Rational,
    psi_inf: Rational,
}

impl FlowParams {
    pub fn new(n: usize, psi_inf: Rational) -> Result<Self, FlowError> {
        if !psi_inf.is_positive() {
            return Err(FlowError::NonPositiveRadius(format_rational(&psi_inf)));
        }
        Ok(FlowParams {
            n,
            lambda: rat(n as i64 + 2, n as i64 + 1),
            psi_inf,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn psi_inf(&self) -> &Rational {
        &self.psi_inf
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda.as_f64()
    }

    pub fn psi_inf_f64(&self) -> f64 {
        self.psi_inf.as_f64()
    }

    /// Curvature function `ψ + λ s − ψ∞`; the normal speed is its negative.
    pub fn curvature(&self, psi: f64, s: f64) -> f64 {
        psi + self.lambda_f64() * s - self.psi_inf_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_from_integer() {
        let p = FlowParams::new(0, rat(10, 1)).unwrap();
        assert_eq!(p.lambda(), &rat(2, 1));
        let p = FlowParams::new(3, rat(1, 2)).unwrap();
        assert_eq!(p.lambda(), &rat(5, 4));
        assert!(FlowParams::new(1, rat(0, 1)).is_err());
        assert!(FlowParams::new(1, rat(-3, 1)).is_err());
    }
}
