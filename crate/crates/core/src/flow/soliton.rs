//! Flow of the slope-2 Hopf sphere `s = s_eq sin²θ` under a linear flow of any slope `λ > 1`.
//!
//! Away from `λ = 3` the orbit is
//! `ψ = ψ∞ + E e^{−t} + 2 s_eq ((λ−2)/(λ−3) − sin²θ) e^{(2−λ)t}`, `s = s_eq sin²θ e^{(2−λ)t}`,
//! with `E = ψ₀ − ψ∞ − 2(λ−2)s_eq/(λ−3)`. At `λ = 3` the two rates meet and
//! `ψ = ψ∞ + (ψ₀ − ψ∞ − 2 s_eq (t + sin²θ)) e^{−t}`.

use super::hopf::{hopf_sphere, HopfSphere};
use super::FlowError;
use crate::basis::poly::CosPolynomial;
use crate::geometry::state::SphereState;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Soliton {
    lambda: f64,
    psi_inf: f64,
    psi0: f64,
    s_eq: f64,
}

impl Soliton {
    /// `psi0` is `ψ` at the poles at `t = 0`; `s_eq` is `s` on the equator at `t = 0`.
    pub fn new(lambda: f64, psi_inf: f64, psi0: f64, s_eq: f64) -> Result<Self, FlowError> {
        for (name, v) in [("lambda", lambda), ("psi_inf", psi_inf), ("psi_0", psi0), ("s_half", s_eq)] {
            if !v.is_finite() {
                return Err(FlowError::NonFinite { name });
            }
        }
        if lambda <= 1.0 {
            return Err(FlowError::SlopeTooSmall(lambda));
        }
        if psi_inf <= 0.0 {
            return Err(FlowError::NonPositiveRadius(psi_inf.to_string()));
        }
        Ok(Soliton {
            lambda,
            psi_inf,
            psi0,
            s_eq,
        })
    }

    /// The orbit that moves by a pure dilation about `(ψ∞, 0)`; none exists at `λ = 3`.
    pub fn dilation(lambda: f64, psi_inf: f64, s_eq: f64) -> Result<Option<Self>, FlowError> {
        if lambda == 3.0 {
            return Ok(None);
        }
        let psi0 = psi_inf + 2.0 * (lambda - 2.0) * s_eq / (lambda - 3.0);
        Self::new(lambda, psi_inf, psi0, s_eq).map(Some)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn psi_inf(&self) -> f64 {
        self.psi_inf
    }

    pub fn psi0(&self) -> f64 {
        self.psi0
    }

    pub fn s_eq(&self) -> f64 {
        self.s_eq
    }

    fn resonant(&self) -> bool {
        self.lambda == 3.0
    }

    /// Coefficient `E` of the round relaxation `e^{−t}` (zero for the dilation orbit).
    pub fn relaxation(&self) -> Option<f64> {
        (!self.resonant()).then(|| {
            self.psi0 - self.psi_inf - 2.0 * (self.lambda - 2.0) * self.s_eq / (self.lambda - 3.0)
        })
    }

    /// Scale factor `e^{(2−λ)t}` of the astigmatism.
    pub fn dilation_factor(&self, t: f64) -> f64 {
        ((2.0 - self.lambda) * t).exp()
    }

    /// `λ = 2`: `s` is frozen and the RoC curve translates horizontally.
    pub fn is_translation(&self) -> bool {
        self.lambda == 2.0
    }

    pub fn s(&self, t: f64) -> CosPolynomial<f64> {
        CosPolynomial::one_minus_x2().scale(&(self.s_eq * self.dilation_factor(t)))
    }

    pub fn psi(&self, t: f64) -> CosPolynomial<f64> {
        let sin2 = CosPolynomial::<f64>::one_minus_x2();
        let (l, h) = (self.lambda, self.s_eq);
        let decay = (-t).exp();
        match self.relaxation() {
            Some(e) => {
                let g = self.dilation_factor(t);
                let base = self.psi_inf + e * decay + 2.0 * h * (l - 2.0) / (l - 3.0) * g;
                &CosPolynomial::constant(base) - &sin2.scale(&(2.0 * h * g))
            }
            None => {
                let base = self.psi_inf + (self.psi0 - self.psi_inf - 2.0 * h * t) * decay;
                &CosPolynomial::constant(base) - &sin2.scale(&(2.0 * h * decay))
            }
        }
    }

    /// Support function, with no axial translation.
    pub fn r(&self, t: f64) -> CosPolynomial<f64> {
        let sin2 = CosPolynomial::<f64>::one_minus_x2();
        let (l, h) = (self.lambda, self.s_eq);
        let decay = (-t).exp();
        match self.relaxation() {
            Some(e) => {
                // ½ s_eq ((λ+1)/(λ−3) − cos 2θ) with cos 2θ = 1 − 2 sin²θ.
                let g = self.dilation_factor(t);
                let base = self.psi_inf + e * decay + 0.5 * h * ((l + 1.0) / (l - 3.0) - 1.0) * g;
                &CosPolynomial::constant(base) + &sin2.scale(&(h * g))
            }
            None => {
                let base = self.psi_inf + (self.psi0 - self.psi_inf - 2.0 * h * (t + 1.0)) * decay;
                &CosPolynomial::constant(base) + &sin2.scale(&(h * decay))
            }
        }
    }

    pub fn state(&self, t: f64) -> SphereState {
        SphereState::from_polynomials(self.r(t), self.psi(t), self.s(t), t)
    }
}

pub fn soliton_state(lambda: f64, psi_inf: f64, psi0: f64, s_eq: f64, t: f64) -> Result<SphereState, FlowError> {
    if t < 0.0 {
        return Err(FlowError::NegativeTime(t));
    }
    Ok(Soliton::new(lambda, psi_inf, psi0, s_eq)?.state(t))
}

/// Hopf sphere of slope `μ = λ` under the flow of slope `λ`: `s` is frozen and
/// `ψ` relaxes as `ψ∞ + (ψ₀ − ψ∞)e^{−t} − λs`, where `ψ₀` is the pole value.
pub fn translation_soliton(lambda: f64, psi_inf: f64, psi0: f64, c0: f64, t: f64) -> Result<HopfSphere, FlowError> {
    if t < 0.0 {
        return Err(FlowError::NegativeTime(t));
    }
    if psi_inf <= 0.0 {
        return Err(FlowError::NonPositiveRadius(psi_inf.to_string()));
    }
    let level = psi_inf + (psi0 - psi_inf) * (-t).exp();
    let mut h = hopf_sphere(lambda, level, c0)?;
    h.state = h.state.with_time(t);
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::quadrature::{psi_from_r, s_from_r};
    use crate::flow::operators::{psi_operator, s_operator};

    fn residual(sol: &Soliton, t: f64) -> f64 {
        let d = 1e-5;
        let ds_dt = &sol.s(t + d) - &sol.s(t - d);
        let dpsi_dt = &sol.psi(t + d) - &sol.psi(t - d);
        let s_rhs = s_operator(&sol.lambda, &sol.s(t)).unwrap();
        let psi_rhs = &psi_operator(&sol.lambda, &sol.psi(t), &sol.s(t)).unwrap()
            + &CosPolynomial::constant(sol.psi_inf);
        let a = &ds_dt.scale(&(0.5 / d)) - &s_rhs;
        let b = &dpsi_dt.scale(&(0.5 / d)) - &psi_rhs;
        a.max_abs_coeff().max(b.max_abs_coeff())
    }

    #[test]
    fn both_branches_solve_flow() {
        for &l in &[1.5, 2.0, 2.5, 3.0, 4.0] {
            let sol = Soliton::new(l, 10.0, 13.0, 0.7).unwrap();
            for &t in &[0.0, 0.4, 1.3] {
                assert!(residual(&sol, t) < 1e-7, "λ={l} t={t}");
                let r = sol.r(t);
                assert!((&s_from_r(&r).unwrap() - &sol.s(t)).max_abs_coeff() < 1e-12);
                assert!((&psi_from_r(&r).unwrap() - &sol.psi(t)).max_abs_coeff() < 1e-12);
            }
        }
    }

    #[test]
    fn initial_values() {
        for &l in &[1.5, 3.0] {
            let st = soliton_state(l, 10.0, 12.0, 1.0, 0.0).unwrap();
            let th = 0.9f64;
            assert!((st.psi(th) - (12.0 - 2.0 * th.sin().powi(2))).abs() < 1e-12);
            assert!((st.s(th) - th.sin().powi(2)).abs() < 1e-14);
        }
    }

    #[test]
    fn dilation_orbit() {
        let sol = Soliton::dilation(4.0, 10.0, 1.0).unwrap().unwrap();
        assert_eq!(sol.psi0(), 14.0);
        assert_eq!(sol.relaxation(), Some(0.0));
        assert!(Soliton::dilation(3.0, 10.0, 1.0).unwrap().is_none());
        let t = 0.8;
        let g = sol.dilation_factor(t);
        for th in SphereState::grid(17) {
            let (a, b) = (sol.state(0.0), sol.state(t));
            assert!((b.psi(th) - 10.0 - g * (a.psi(th) - 10.0)).abs() < 1e-12);
            assert!((b.s(th) - g * a.s(th)).abs() < 1e-12);
        }
    }

    #[test]
    fn translation_keeps_astigmatism() {
        let a = translation_soliton(1.5, 10.0, 13.0, 0.5, 0.0).unwrap();
        let b = translation_soliton(1.5, 10.0, 13.0, 0.5, 2.0).unwrap();
        let shift = 3.0 * ((-2.0f64).exp() - 1.0);
        for th in SphereState::grid(11) {
            assert!((a.state.s(th) - b.state.s(th)).abs() < 1e-14);
            assert!((b.state.psi(th) - a.state.psi(th) - shift).abs() < 1e-12);
        }
    }
}
