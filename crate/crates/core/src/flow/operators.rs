//! Spatial operators of the flow on `(ψ, s)`.
//!
//! θ-form, with `L = (λ−1)/(2 sinθ) ∂θ(sinθ ∂θ) − λ cotθ ∂θ`:
//! `∂t s = L s + (1+cos²θ)/sin²θ · s` and `∂t ψ = L ψ − 2λ s/sin²θ − ψ + ψ∞`.

use crate::basis::poly::CosPolynomial;
use crate::basis::BasisError;
use crate::scalar::Scalar;

/// `L f` in `x = cos θ`: `(λ−1)/2 ((1−x²) f')' + λ x f'`.
fn transport<T: Scalar>(lambda: &T, f: &CosPolynomial<T>) -> Result<CosPolynomial<T>, BasisError> {
    let f = f.expanded().ok_or(BasisError::OddPrefactor)?;
    let fp = f.derivative_x();
    let diffusion = (&CosPolynomial::one_minus_x2() * &fp)
        .derivative_x()
        .scale(&((lambda.clone() - T::one()) * T::half()));
    let convection = (&CosPolynomial::x() * &fp).scale(lambda);
    Ok(&diffusion + &convection)
}

/// Right-hand side of the astigmatism equation, exactly. `f` must vanish at both poles.
pub fn s_operator<T: Scalar>(lambda: &T, f: &CosPolynomial<T>) -> Result<CosPolynomial<T>, BasisError> {
    let g = f
        .div_one_minus_x2(0.0)
        .ok_or(BasisError::NotVanishingAtPoles)?;
    let reaction = &CosPolynomial::from_coeffs(vec![T::one(), T::zero(), T::one()]) * &g;
    Ok(&transport(lambda, f)? + &reaction)
}

/// Right-hand side of the mean-radius equation without the constant `ψ∞`.
pub fn psi_operator<T: Scalar>(
    lambda: &T,
    psi: &CosPolynomial<T>,
    s: &CosPolynomial<T>,
) -> Result<CosPolynomial<T>, BasisError> {
    let g = s
        .div_one_minus_x2(0.0)
        .ok_or(BasisError::NotVanishingAtPoles)?;
    let psi_e = psi.expanded().ok_or(BasisError::OddPrefactor)?;
    let coupling = g.scale(&(lambda.clone() * T::from_i64(-2)));
    Ok(&(&transport(lambda, &psi_e)? + &coupling) - &psi_e)
}

/// Pointwise θ-form of the astigmatism right-hand side.
pub fn s_rhs_theta(lambda: f64, theta: f64, s: f64, ds: f64, d2s: f64) -> f64 {
    let (sin, cos) = theta.sin_cos();
    let cot = cos / sin;
    0.5 * (lambda - 1.0) * (d2s + cot * ds) - lambda * cot * ds + (1.0 + cos * cos) / (sin * sin) * s
}

/// Pointwise θ-form of the mean-radius right-hand side.
pub fn psi_rhs_theta(
    lambda: f64,
    psi_inf: f64,
    theta: f64,
    psi: f64,
    dpsi: f64,
    d2psi: f64,
    s: f64,
) -> f64 {
    let (sin, cos) = theta.sin_cos();
    let cot = cos / sin;
    0.5 * (lambda - 1.0) * (d2psi + cot * dpsi) - lambda * cot * dpsi - 2.0 * lambda * s / (sin * sin) - psi
        + psi_inf
}
