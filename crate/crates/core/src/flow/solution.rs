//! Closed-form solution of the flow from initial modal data.
//!
//! Every mode of `s` evolves as an exponential. The support function is
//! `r(t) = ψ∞ + D₂ e^{−t} + D_ax cosθ + Σ_σ R_σ e^{σt}`, where each `R_σ` is the
//! quadrature of the rate-σ part of `s` plus the affine correction that makes
//! `∂r/∂t = −ψ − λs + ψ∞` hold exactly. The `cos θ` term is an axial translation
//! and does not move (`ψ[cos θ] = 0`).

use super::chain::{chain_matrix, tilde_from_initial};
use super::operators::{psi_operator, s_operator};
use super::params::FlowParams;
use super::rates::{mode_rates, omega, ModeRates};
use super::series::QuasiSeries;
use super::FlowError;
use crate::basis::coeffs::{AstigmatismCoefficients, TildeCoefficients};
use crate::basis::legendre::legendre_mode;
use crate::basis::poly::{CosPolynomial, Pole};
use crate::basis::quadrature::{
    cos_sin_mode_support, legendre_mode_support, psi_from_r, s_from_r, sin_mode_support,
};
use crate::geometry::state::SphereState;
use crate::scalar::{rat, Rational, Scalar};
use num_traits::{One, Zero};

/// How the initial support function is pinned down beyond the astigmatism.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialSupport {
    /// `c0 = ψ(north pole, 0) − ψ∞`; `c1` is the axial translation, the
    /// coefficient of `cos θ` added to the canonical reconstruction.
    Offsets { c0: Rational, c1: Rational },
    /// The full initial support function.
    Explicit(CosPolynomial<Rational>),
}

impl Default for InitialSupport {
    fn default() -> Self {
        InitialSupport::Offsets {
            c0: Rational::zero(),
            c1: Rational::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowSolution {
    params: FlowParams,
    rates: ModeRates,
    initial: AstigmatismCoefficients<Rational>,
    tilde: TildeCoefficients<Rational>,
    s_series: QuasiSeries,
    r_series: QuasiSeries,
    psi_series: QuasiSeries,
    radial: Rational,
    axial: Rational,
}

impl FlowSolution {
    /// Builds the solution. Coefficients split at a different `n` are re-split exactly.
    pub fn new(
        params: FlowParams,
        initial: &AstigmatismCoefficients<Rational>,
        support: InitialSupport,
    ) -> Result<Self, FlowError> {
        let n = params.n();
        let initial = if initial.n() == n {
            initial.clone()
        } else {
            initial.with_n(n)
        };
        let rates = mode_rates(n);
        let tilde = tilde_from_initial(&initial, &rates);
        let lambda = params.lambda().clone();

        let mut s_series = QuasiSeries::new();
        let mut r_modes = QuasiSeries::new();
        for (rate, s_poly, r_poly) in mode_groups(&initial, &tilde, &rates) {
            s_series.add_term(rate.clone(), 0, s_poly);
            r_modes.add_term(rate, 0, r_poly);
        }

        // Affine correction for each rate group.
        let mut r_series = QuasiSeries::new();
        for term in r_modes.terms() {
            let sigma = &term.rate;
            let s_part = s_series.coefficient(sigma, 0);
            let psi_part = psi_from_r(&term.poly)?;
            let rho = &(&term.poly.scale(sigma) + &psi_part) + &s_part.scale(&lambda);
            if rho.degree().unwrap_or(0) > 1 {
                return Err(FlowError::SupportNotAffine);
            }
            let (rho0, rho1) = (rho.coeff(0), rho.coeff(1));
            let denom0 = sigma + Rational::one();
            let c0 = if rho0.is_zero() {
                Rational::zero()
            } else if denom0.is_zero() {
                return Err(FlowError::SupportNotAffine);
            } else {
                -rho0 / denom0
            };
            let c1 = if rho1.is_zero() {
                Rational::zero()
            } else if sigma.is_zero() {
                return Err(FlowError::SupportNotAffine);
            } else {
                -rho1 / sigma
            };
            let corrected = &term.poly + &CosPolynomial::from_coeffs(vec![c0, c1]);
            r_series.add_term(sigma.clone(), 0, corrected);
        }

        let mode_psi = r_series.map_polys(psi_from_r)?;
        let psi_inf = params.psi_inf().clone();
        let (radial, axial) = match support {
            InitialSupport::Offsets { c0, c1 } => {
                let north: Rational = mode_psi
                    .terms()
                    .iter()
                    .map(|t| t.poly.value_at_pole(Pole::North))
                    .sum();
                (c0 - north, c1)
            }
            InitialSupport::Explicit(r0) => {
                let r0 = r0.expanded().ok_or(crate::basis::BasisError::OddPrefactor)?;
                let rem = &(&r0 - &r_series.at_zero()) - &CosPolynomial::constant(psi_inf.clone());
                if rem.degree().unwrap_or(0) > 1 {
                    return Err(FlowError::SupportNotAffine);
                }
                (rem.coeff(0), rem.coeff(1))
            }
        };

        r_series.add_term(Rational::zero(), 0, CosPolynomial::from_coeffs(vec![psi_inf.clone(), axial.clone()]));
        r_series.add_term(rat(-1, 1), 0, CosPolynomial::constant(radial.clone()));
        let psi_series = mode_psi.add(&{
            let mut base = QuasiSeries::new();
            base.add_term(Rational::zero(), 0, CosPolynomial::constant(psi_inf));
            base.add_term(rat(-1, 1), 0, CosPolynomial::constant(radial.clone()));
            base
        });

        Ok(FlowSolution {
            params,
            rates,
            initial,
            tilde,
            s_series,
            r_series,
            psi_series,
            radial,
            axial,
        })
    }

    /// Solution whose initial surface has the given exact support function.
    pub fn from_support(params: FlowParams, r0: &CosPolynomial<Rational>) -> Result<Self, FlowError> {
        let s0 = s_from_r(r0)?;
        let coeffs = AstigmatismCoefficients::from_polynomial(params.n(), &s0, 0.0)?;
        Self::new(params, &coeffs, InitialSupport::Explicit(r0.clone()))
    }

    pub fn params(&self) -> &FlowParams {
        &self.params
    }

    pub fn rates(&self) -> &ModeRates {
        &self.rates
    }

    pub fn initial(&self) -> &AstigmatismCoefficients<Rational> {
        &self.initial
    }

    pub fn tilde(&self) -> &TildeCoefficients<Rational> {
        &self.tilde
    }

    pub fn s_series(&self) -> &QuasiSeries {
        &self.s_series
    }

    pub fn r_series(&self) -> &QuasiSeries {
        &self.r_series
    }

    pub fn psi_series(&self) -> &QuasiSeries {
        &self.psi_series
    }

    /// `D₂`, the coefficient of the round relaxation `e^{−t}`.
    pub fn radial_constant(&self) -> &Rational {
        &self.radial
    }

    /// Time-independent coefficient of `cos θ` in `r`.
    pub fn axial_offset(&self) -> &Rational {
        &self.axial
    }

    /// Modal coefficients of `s` at time `t`.
    pub fn evolve_s(&self, t: f64) -> AstigmatismCoefficients<f64> {
        let n = self.params.n();
        let family = |rates: &[Rational], tilde: &[Rational]| -> Vec<f64> {
            let k = chain_matrix(rates, &self.rates.nu);
            let growth: Vec<f64> = rates.iter().map(|m| (m.as_f64() * t).exp()).collect();
            (0..n)
                .map(|l| {
                    (l..n)
                        .map(|j| (&k[l][j] * &tilde[j]).as_f64() * growth[j])
                        .sum()
                })
                .collect()
        };
        let a = family(&self.rates.mu, &self.tilde.tilde_a);
        let b = family(&self.rates.mu_half, &self.tilde.tilde_b);
        let c = self
            .initial
            .legendre_c()
            .iter()
            .enumerate()
            .map(|(i, cl)| cl.as_f64() * (-omega(n, n + i).as_f64() * t).exp())
            .collect();
        AstigmatismCoefficients::new(n, a, b, c).expect("trig lists have length n")
    }

    pub fn s_at(&self, t: f64) -> CosPolynomial<f64> {
        self.s_series.at_time(t)
    }

    pub fn psi_at(&self, t: f64) -> CosPolynomial<f64> {
        self.psi_series.at_time(t)
    }

    /// Support function at time `t`.
    pub fn evolve_support(&self, t: f64) -> CosPolynomial<f64> {
        self.r_series.at_time(t)
    }

    /// The evolved sphere at time `t`.
    pub fn state_at(&self, t: f64) -> SphereState {
        SphereState::from_polynomials(self.evolve_support(t), self.psi_at(t), self.s_at(t), t)
    }

    /// The initial sphere with exact coefficients.
    pub fn initial_state(&self) -> SphereState {
        SphereState::from_exact_support(self.r_series.at_zero(), 0.0)
            .expect("support series is polynomial")
    }

    /// Rate-0 part of `s`: the stationary limit of the astigmatism.
    pub fn stationary_s(&self) -> CosPolynomial<Rational> {
        self.s_series.coefficient(&Rational::zero(), 0)
    }

    /// Rate-0 part of `r`: the limit support function when no mode grows.
    pub fn stationary_support(&self) -> CosPolynomial<Rational> {
        self.r_series.coefficient(&Rational::zero(), 0)
    }

    /// Checks all three evolution equations as exact polynomial identities, term by term.
    pub fn satisfies_flow_exactly(&self) -> Result<bool, FlowError> {
        let lambda = self.params.lambda();
        let psi_inf = self.params.psi_inf();
        for term in self.s_series.terms() {
            if s_operator(lambda, &term.poly)? != term.poly.scale(&term.rate) {
                return Ok(false);
            }
        }
        let mut rates: Vec<&Rational> = self.psi_series.terms().iter().map(|t| &t.rate).collect();
        rates.extend(self.s_series.terms().iter().map(|t| &t.rate));
        rates.sort();
        rates.dedup();
        for sigma in rates {
            let psi = self.psi_series.coefficient(sigma, 0);
            let s = self.s_series.coefficient(sigma, 0);
            let r = self.r_series.coefficient(sigma, 0);
            let mut rhs = psi_operator(lambda, &psi, &s)?;
            let mut r_rhs = &(-&psi) - &s.scale(lambda);
            if sigma.is_zero() {
                rhs = &rhs + &CosPolynomial::constant(psi_inf.clone());
                r_rhs = &r_rhs + &CosPolynomial::constant(psi_inf.clone());
            }
            if rhs != psi.scale(sigma) || r_rhs != r.scale(sigma) {
                return Ok(false);
            }
            if s_from_r(&r)? != s || psi_from_r(&r)? != psi {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `(rate, s polynomial, support polynomial)` for every nonzero mode group.
fn mode_groups(
    initial: &AstigmatismCoefficients<Rational>,
    tilde: &TildeCoefficients<Rational>,
    rates: &ModeRates,
) -> Vec<(Rational, CosPolynomial<Rational>, CosPolynomial<Rational>)> {
    let n = initial.n();
    let mut out = Vec::new();
    let x = CosPolynomial::<Rational>::x();
    let ka = chain_matrix(&rates.mu, &rates.nu);
    let kb = chain_matrix(&rates.mu_half, &rates.nu);
    for j in 0..n {
        let ta = &tilde.tilde_a[j];
        if !ta.is_zero() {
            let mut s = CosPolynomial::zero();
            let mut r = CosPolynomial::zero();
            for l in 0..=j {
                let w = &ka[l][j] * ta;
                s = &s + &CosPolynomial::sin_even_power(l as u32 + 1).scale(&w);
                r = &r + &sin_mode_support::<Rational>(l).scale(&w);
            }
            out.push((rates.mu[j].clone(), s, r));
        }
        let tb = &tilde.tilde_b[j];
        if !tb.is_zero() {
            let mut s = CosPolynomial::zero();
            let mut r = CosPolynomial::zero();
            for l in 0..=j {
                let w = &kb[l][j] * tb;
                s = &s + &(&x * &CosPolynomial::sin_even_power(l as u32 + 1)).scale(&w);
                r = &r + &cos_sin_mode_support::<Rational>(l).scale(&w);
            }
            out.push((rates.mu_half[j].clone(), s, r));
        }
    }
    for (i, c) in initial.legendre_c().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let l = n + i;
        let s = legendre_mode::<Rational>(n, l).expect("l >= n").scale(c);
        let r = legendre_mode_support::<Rational>(n, l).scale(c);
        out.push((-omega(n, l), s, r));
    }
    out
}
