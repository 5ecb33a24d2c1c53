//! Meridian profile curve `x¹ = r cosθ − sinθ r'`, `x² = r sinθ + cosθ r'`.

use super::state::SphereState;

pub fn profile_curve(state: &SphereState, samples: usize) -> Vec<(f64, f64)> {
    SphereState::grid(samples)
        .into_iter()
        .map(|t| {
            let v = state.at(t);
            let (sin, cos) = t.sin_cos();
            (v.r * cos - sin * v.dr, v.r * sin + cos * v.dr)
        })
        .collect()
}

/// Largest relative gap between the curve's radius of curvature, measured by
/// fourth-order differences of the sampled points, and `ψ − s`.
pub fn profile_radius_mismatch(state: &SphereState, samples: usize) -> f64 {
    let pts = profile_curve(state, samples);
    let grid = SphereState::grid(samples);
    let h = grid[1] - grid[0];
    let mut worst: f64 = 0.0;
    for i in 2..pts.len().saturating_sub(2) {
        // The curve is parametrised by its normal angle, so |dX/dθ| is the radius.
        let diff = |f: fn(&(f64, f64)) -> f64| {
            (f(&pts[i - 2]) - 8.0 * f(&pts[i - 1]) + 8.0 * f(&pts[i + 1]) - f(&pts[i + 2])) / (12.0 * h)
        };
        let (dx, dy) = (diff(|p| p.0), diff(|p| p.1));
        let measured = dx.hypot(dy);
        let expected = state.r2(grid[i]).abs();
        worst = worst.max((measured - expected).abs() / expected.max(f64::MIN_POSITIVE));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::poly::CosPolynomial;

    #[test]
    fn round_and_translated_circles() {
        let st = SphereState::from_support(CosPolynomial::from_coeffs(vec![3.0, 1.5]), 0.0).unwrap();
        for (x, y) in profile_curve(&st, 33) {
            assert!(((x - 1.5).hypot(y) - 3.0).abs() < 1e-13);
        }
        assert!(profile_radius_mismatch(&st, 401) < 1e-9);
    }
}
