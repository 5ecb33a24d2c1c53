//! Codazzi–Mainardi residual `d(ψ+s)/dθ + 2 cotθ s`.

use super::state::SphereState;
use crate::basis::quadrature::codazzi_defect;

pub const CM_SAMPLES: usize = 2049;

pub fn cm_residual(state: &SphereState) -> f64 {
    cm_residual_on(state, CM_SAMPLES)
}

/// Sup-norm over the interior nodes of an equally spaced grid.
pub fn cm_residual_on(state: &SphereState, samples: usize) -> f64 {
    let grid = SphereState::grid(samples);
    grid[1..grid.len() - 1]
        .iter()
        .map(|&t| {
            let v = state.at(t);
            (v.dpsi + v.ds + 2.0 * t.cos() / t.sin() * v.s).abs()
        })
        .fold(0.0, f64::max)
}

/// Exact test for states carrying rational polynomials.
pub fn cm_exact(state: &SphereState) -> Option<bool> {
    let e = state.exact()?;
    codazzi_defect(&e.psi, &e.s).ok().map(|d| d.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::poly::CosPolynomial;
    use crate::flow::hopf::hopf_sphere;
    use crate::geometry::state::SampledProfile;

    #[test]
    fn consistent_states_vanish() {
        let r = CosPolynomial::from_coeffs(vec![5.0, 0.0, -1.0, 0.0, 0.25]);
        let st = SphereState::from_support(r.clone(), 0.0).unwrap();
        assert!(cm_residual(&st) < 1e-12);
        let h = hopf_sphere(1.8, 5.0, 0.5).unwrap();
        assert!(cm_residual(&h.state) < 1e-8);
    }

    #[test]
    fn corruption_is_detected() {
        // Add sin³θ to s while keeping ψ.
        let r = CosPolynomial::from_coeffs(vec![5.0, 0.0, -1.0]);
        let st = SphereState::from_support(r, 0.0).unwrap();
        let theta = SphereState::grid(513);
        let mut g = SampledProfile {
            theta: theta.clone(),
            r: vec![],
            dr: vec![],
            psi: vec![],
            dpsi: vec![],
            s: vec![],
            ds: vec![],
        };
        for &t in &theta {
            let v = st.at(t);
            let (sin, cos) = t.sin_cos();
            g.r.push(v.r);
            g.dr.push(v.dr);
            g.psi.push(v.psi);
            g.dpsi.push(v.dpsi);
            g.s.push(v.s + sin.powi(3));
            g.ds.push(v.ds + 3.0 * sin * sin * cos);
        }
        assert!(cm_residual(&st) < 1e-12);
        assert!(cm_residual(&SphereState::from_samples(g, 0.0)) > 0.1);
    }
}
