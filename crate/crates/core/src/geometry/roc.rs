//! The curve traced by a sphere in the `(ψ, s)` plane.

use super::state::SphereState;

#[derive(Clone, Debug, PartialEq)]
pub struct RoCDiagram {
    pub theta: Vec<f64>,
    /// `(ψ, s)` at each angle; both ends lie on the umbilic horizon `s = 0`.
    pub points: Vec<(f64, f64)>,
}

pub fn roc_diagram(state: &SphereState, samples: usize) -> RoCDiagram {
    let theta = SphereState::grid(samples);
    let last = theta.len() - 1;
    let points = theta
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let v = state.at(t);
            // The poles are umbilic by construction; drop round-off there.
            (v.psi, if i == 0 || i == last { 0.0 } else { v.s })
        })
        .collect();
    RoCDiagram { theta, points }
}

impl RoCDiagram {
    pub fn translated(&self, dpsi: f64) -> RoCDiagram {
        RoCDiagram {
            theta: self.theta.clone(),
            points: self.points.iter().map(|&(p, s)| (p + dpsi, s)).collect(),
        }
    }

    /// Dilation about `(center, 0)`.
    pub fn dilated(&self, center: f64, factor: f64) -> RoCDiagram {
        RoCDiagram {
            theta: self.theta.clone(),
            points: self
                .points
                .iter()
                .map(|&(p, s)| (center + factor * (p - center), factor * s))
                .collect(),
        }
    }

    /// Largest pointwise distance to a diagram sampled at the same angles.
    pub fn distance(&self, other: &RoCDiagram) -> f64 {
        assert_eq!(self.points.len(), other.points.len(), "diagrams sampled differently");
        self.points
            .iter()
            .zip(&other.points)
            .map(|(a, b)| (a.0 - b.0).hypot(a.1 - b.1))
            .fold(0.0, f64::max)
    }

    /// True when `s` takes both signs: prolate and oblate parts joined at an umbilic circle.
    pub fn crosses_horizon(&self) -> bool {
        let pos = self.points.iter().any(|p| p.1 > 0.0);
        let neg = self.points.iter().any(|p| p.1 < 0.0);
        pos && neg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::coeffs::AstigmatismCoefficients;
    use crate::basis::quadrature::modal_quadrature;
    use crate::basis::poly::CosPolynomial;
    use crate::scalar::rat;

    #[test]
    fn endpoints_on_horizon() {
        let c = AstigmatismCoefficients::from_trig(0, &[rat(3, 1), rat(10, 1)], &[rat(20, 1), rat(7, 1)]);
        let r = &modal_quadrature(&c) + &CosPolynomial::constant(rat(40, 1));
        let st = SphereState::from_exact_support(r, 0.0).unwrap();
        let d = roc_diagram(&st, 101);
        assert_eq!(d.points[0].1, 0.0);
        assert_eq!(d.points[100].1, 0.0);
        assert!(d.crosses_horizon());
        let back = d.dilated(1.0, 2.0).dilated(1.0, 0.5).translated(3.0).translated(-3.0);
        assert!(d.distance(&back) < 1e-12);
    }
}
