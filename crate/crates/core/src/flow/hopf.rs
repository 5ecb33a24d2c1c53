//! Linear Hopf spheres: `ψ = ψ∞ − μ C₀ sin^p θ`, `s = C₀ sin^p θ` with `p = 2/(μ−1)`.

use super::FlowError;
use crate::basis::fit::gauss_legendre;
use crate::basis::poly::CosPolynomial;
use crate::basis::quadrature::{psi_from_r, sin_mode_support};
use crate::geometry::state::{SampledProfile, SphereState};
use std::f64::consts::FRAC_PI_2;

/// Grid size used for sample-backed spheres.
pub const HOPF_SAMPLES: usize = 4097;

#[derive(Clone, Debug)]
pub struct HopfSphere {
    pub state: SphereState,
    /// Exponent `p = 2/(μ−1)`.
    pub exponent: f64,
    /// Both principal radii positive everywhere.
    pub convex: bool,
}

/// Even integer `p` within round-off, as `p/2`.
fn even_power(p: f64) -> Option<u32> {
    let m = (p / 2.0).round();
    (m >= 1.0 && (p - 2.0 * m).abs() < 1e-12 && m < 1e6).then_some(m as u32)
}

pub fn hopf_sphere(mu: f64, psi_inf: f64, c0: f64) -> Result<HopfSphere, FlowError> {
    hopf_sphere_with(mu, psi_inf, c0, HOPF_SAMPLES)
}

/// As [`hopf_sphere`], with the grid size used when the exponent is not an even integer.
pub fn hopf_sphere_with(mu: f64, psi_inf: f64, c0: f64, samples: usize) -> Result<HopfSphere, FlowError> {
    for (name, v) in [("mu", mu), ("psi_inf", psi_inf), ("C0", c0)] {
        if !v.is_finite() {
            return Err(FlowError::NonFinite { name });
        }
    }
    if mu <= 1.0 {
        return Err(FlowError::SlopeTooSmall(mu));
    }
    if psi_inf <= 0.0 {
        return Err(FlowError::NonPositiveRadius(psi_inf.to_string()));
    }
    let p = 2.0 / (mu - 1.0);
    let state = match even_power(p) {
        Some(m) => polynomial_sphere(m, mu, psi_inf, c0)?,
        None => sampled_sphere(p, mu, psi_inf, c0, samples.max(3)),
    };
    // r₁ = ψ∞ − (μ−1)C₀ sin^p, r₂ = ψ∞ − (μ+1)C₀ sin^p; the extremes sit at the equator.
    let convex = psi_inf - (mu - 1.0) * c0 > 0.0 && psi_inf - (mu + 1.0) * c0 > 0.0;
    Ok(HopfSphere {
        state,
        exponent: p,
        convex,
    })
}

fn polynomial_sphere(m: u32, mu: f64, psi_inf: f64, c0: f64) -> Result<SphereState, FlowError> {
    let mut r = sin_mode_support::<f64>(m as usize - 1).scale(&c0);
    let s = CosPolynomial::sin_even_power(m).scale(&c0);
    let psi = psi_from_r(&r)?;
    // ψ + μs is constant; shift r so that constant is ψ∞.
    let offset = psi_inf - psi.coeff(0) - mu * s.coeff(0);
    r = &r + &CosPolynomial::constant(offset);
    Ok(SphereState::from_support(r, 0.0)?)
}

fn sampled_sphere(p: f64, mu: f64, psi_inf: f64, c0: f64, samples: usize) -> SphereState {
    let theta = SphereState::grid(samples);
    let half = half_integrals(&theta, p);
    let mut g = SampledProfile {
        theta: theta.clone(),
        r: Vec::with_capacity(samples),
        dr: Vec::with_capacity(samples),
        psi: Vec::with_capacity(samples),
        dpsi: Vec::with_capacity(samples),
        s: Vec::with_capacity(samples),
        ds: Vec::with_capacity(samples),
    };
    for (&t, &i) in theta.iter().zip(&half) {
        let (sin, cos) = t.sin_cos();
        let sin = sin.max(0.0);
        let sp = sin.powf(p);
        // d/dθ sin^p diverges at the poles for p < 1; the pole entries hold 0 there.
        let dsp = if sin > 0.0 {
            p * sin.powf(p - 1.0) * cos
        } else if p == 1.0 {
            cos
        } else {
            0.0
        };
        g.r.push(psi_inf - 2.0 * c0 * cos * i - 2.0 * c0 * sp / p);
        g.dr.push(2.0 * c0 * sin * i);
        g.s.push(c0 * sp);
        g.ds.push(c0 * dsp);
        g.psi.push(psi_inf - mu * c0 * sp);
        g.dpsi.push(-mu * c0 * dsp);
    }
    SphereState::from_samples(g, 0.0)
}

/// `I(θ) = ∫_θ^{π/2} sin^{p−1}φ dφ` at every grid angle (odd about π/2).
fn half_integrals(theta: &[f64], p: f64) -> Vec<f64> {
    let (nodes, weights) = gauss_legendre(12);
    // For p < 1 integrate in v = φ^p, where the integrand (1/p)(sinφ/φ)^{p−1} is bounded.
    let segment = |a: f64, b: f64| -> f64 {
        if p < 1.0 {
            let (va, vb) = (a.powf(p), b.powf(p));
            let (mid, rad) = (0.5 * (va + vb), 0.5 * (vb - va));
            nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| {
                    let phi = (mid + rad * x).powf(1.0 / p);
                    w * (phi.sin() / phi).powf(p - 1.0) / p
                })
                .sum::<f64>()
                * rad
        } else {
            let (mid, rad) = (0.5 * (a + b), 0.5 * (b - a));
            nodes
                .iter()
                .zip(&weights)
                .map(|(x, w)| w * (mid + rad * x).sin().powf(p - 1.0))
                .sum::<f64>()
                * rad
        }
    };
    let folded: Vec<f64> = theta.iter().map(|&t| t.min(std::f64::consts::PI - t)).collect();
    let mut order: Vec<usize> = (0..theta.len()).collect();
    order.sort_by(|&a, &b| folded[b].total_cmp(&folded[a]));
    let mut out = vec![0.0; theta.len()];
    let (mut upper, mut acc) = (FRAC_PI_2, 0.0);
    for idx in order {
        let a = folded[idx];
        if a < upper {
            acc += segment(a, upper);
            upper = a;
        }
        out[idx] = if theta[idx] <= FRAC_PI_2 { acc } else { -acc };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::state::StateBacking;

    #[test]
    fn round_when_amplitude_vanishes() {
        let h = hopf_sphere(1.7, 3.0, 0.0).unwrap();
        for t in SphereState::grid(9) {
            assert!((h.state.r(t) - 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn even_exponent_is_polynomial() {
        let h = hopf_sphere(2.0, 10.0, 1.0).unwrap();
        assert!(h.convex);
        assert!(matches!(h.state.backing(), StateBacking::Polynomial(_)));
        let t = 0.7f64;
        assert!((h.state.s(t) - t.sin().powi(2)).abs() < 1e-14);
        assert!((h.state.psi(t) - (10.0 - 2.0 * t.sin().powi(2))).abs() < 1e-13);
        let quartic = hopf_sphere(1.5, 10.0, 1.0).unwrap();
        assert!((quartic.state.s(t) - t.sin().powi(4)).abs() < 1e-14);
        assert!((quartic.exponent - 4.0).abs() < 1e-15);
    }

    #[test]
    fn sampled_matches_polynomial() {
        let poly = hopf_sphere(1.5, 7.0, 0.8).unwrap().state;
        let sampled = sampled_sphere(4.0, 1.5, 7.0, 0.8, 1025);
        for t in SphereState::grid(50) {
            let (a, b) = (poly.at(t), sampled.at(t));
            assert!((a.r - b.r).abs() < 1e-10, "θ={t}");
            assert!((a.dr - b.dr).abs() < 1e-8);
            assert!((a.psi - b.psi).abs() < 1e-10);
        }
    }

    #[test]
    fn sampled_support_reproduces_radii() {
        let h = hopf_sphere(1.8, 5.0, 0.5).unwrap();
        assert!(matches!(h.state.backing(), StateBacking::Sampled(_)));
        // ψ = r + ½(r'' + cot r'), with r'' by central differences of r'.
        let d = 1e-5;
        for &t in &[0.3, 1.0, 1.9, 2.8] {
            let r2 = (h.state.at(t + d).dr - h.state.at(t - d).dr) / (2.0 * d);
            let v = h.state.at(t);
            let psi = v.r + 0.5 * (r2 + t.cos() / t.sin() * v.dr);
            assert!((psi - v.psi).abs() < 1e-6, "θ={t}");
        }
    }

    #[test]
    fn convexity_and_errors() {
        assert!(!hopf_sphere(2.0, 2.5, 1.0).unwrap().convex);
        assert!(hopf_sphere(2.0, 1.0, -3.0).unwrap().convex);
        assert!(matches!(hopf_sphere(1.0, 1.0, 1.0), Err(FlowError::SlopeTooSmall(_))));
        assert!(hopf_sphere(4.0, 1.0, 0.1).is_ok());
    }
}
