//! Long-time fate of a flow, read off from which exponentials are present.

use super::state::SphereState;
use super::GeometryError;
use crate::basis::coeffs::AstigmatismCoefficients;
use crate::flow::params::FlowParams;
use crate::flow::solution::{FlowSolution, InitialSupport};
use crate::scalar::Rational;
use num_traits::{Signed, Zero};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    ConvergesRound,
    ConvergesHopf,
    Diverges,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConvergesRound => "ConvergesRound",
            Verdict::ConvergesHopf => "ConvergesHopf",
            Verdict::Diverges => "Diverges",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Finite mode growing like `sin^{2l+2}θ`.
    Sin(usize),
    /// Finite mode growing like `cosθ sin^{2l+2}θ`.
    CosSin(usize),
    /// Legendre mode of degree `l`.
    Legendre(usize),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Sin(l) => write!(f, "sin-{l}"),
            Mode::CosSin(l) => write!(f, "cos-sin-{l}"),
            Mode::Legendre(l) => write!(f, "legendre-{l}"),
        }
    }
}

/// The dominating mode and its exponential rate.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub mode: Mode,
    pub rate: Rational,
}

#[derive(Clone, Debug)]
pub struct FateReport {
    pub verdict: Verdict,
    /// Growing mode with the largest rate, or for a convergent flow the slowest
    /// decaying mode; `None` when the initial data is already the limit.
    pub witness: Option<Witness>,
    /// Limit surface of a convergent flow, up to the fixed axial translation.
    pub limit: Option<SphereState>,
}

/// Classifies the flow of slope `λ = 1 + 1/(n+1)` from the given initial astigmatism.
pub fn classify_fate(
    coeffs: &AstigmatismCoefficients<Rational>,
    params: &FlowParams,
) -> Result<FateReport, GeometryError> {
    let sol = FlowSolution::new(params.clone(), coeffs, InitialSupport::default())?;
    classify_solution(&sol)
}

pub fn classify_solution(sol: &FlowSolution) -> Result<FateReport, GeometryError> {
    let rates = sol.rates();
    let tilde = sol.tilde();
    let n = sol.params().n();

    let mut growing: Option<Witness> = None;
    let mut consider = |mode: Mode, coeff: &Rational, rate: &Rational| {
        if !coeff.is_zero() && growing.as_ref().is_none_or(|w| rate > &w.rate) {
            growing = Some(Witness {
                mode,
                rate: rate.clone(),
            });
        }
    };
    for l in 0..n {
        consider(Mode::Sin(l), &tilde.tilde_a[l], &rates.mu[l]);
        consider(Mode::CosSin(l), &tilde.tilde_b[l], &rates.mu_half[l]);
    }
    if let Some(w) = growing {
        debug_assert!(w.rate.is_positive());
        return Ok(FateReport {
            verdict: Verdict::Diverges,
            witness: Some(w),
            limit: None,
        });
    }

    let limit = Some(SphereState::from_exact_support(sol.stationary_support(), f64::INFINITY)?);
    // Legendre modes decay at ω_l, which increases with l: the lowest decaying one dominates.
    let legendre = sol.initial().legendre_c();
    let stationary = legendre.first().is_some_and(|c| !c.is_zero());
    let witness = legendre
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, c)| !c.is_zero())
        .map(|(i, _)| Witness {
            mode: Mode::Legendre(n + i),
            rate: -rates.omega(n + i),
        });
    let verdict = if stationary {
        Verdict::ConvergesHopf
    } else {
        Verdict::ConvergesRound
    };
    Ok(FateReport {
        verdict,
        witness,
        limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn q(v: i64) -> Rational {
        rat(v, 1)
    }

    fn params(n: usize) -> FlowParams {
        FlowParams::new(n, q(10)).unwrap()
    }

    #[test]
    fn documented_fates() {
        let c = AstigmatismCoefficients::from_trig(0, &[q(3)], &[]);
        let f = classify_fate(&c, &params(0)).unwrap();
        assert_eq!(f.verdict, Verdict::ConvergesHopf);
        assert!(f.witness.is_none());
        // Limit satisfies ψ + 2s = ψ∞.
        let lim = f.limit.unwrap();
        for &t in &[0.3, 1.4, 2.9] {
            assert!((lim.psi(t) + 2.0 * lim.s(t) - 10.0).abs() < 1e-12);
        }

        let c = AstigmatismCoefficients::from_trig(1, &[q(2)], &[q(5)]);
        let f = classify_fate(&c, &params(1)).unwrap();
        assert_eq!(f.verdict, Verdict::Diverges);
        assert_eq!(f.witness.unwrap().rate, rat(1, 2));

        let f = classify_fate(&AstigmatismCoefficients::zero(2), &params(2)).unwrap();
        assert_eq!(f.verdict, Verdict::ConvergesRound);
        assert!(f.witness.is_none());
        assert!((f.limit.unwrap().r(0.4) - 10.0).abs() < 1e-14);
    }

    #[test]
    fn higher_order_content_sets_the_limit() {
        // sin⁸θ at n = 2 has a component along the stationary mode sin⁶θ.
        let c = AstigmatismCoefficients::from_trig(2, &[q(0), q(0), q(0), q(1)], &[]);
        let f = classify_fate(&c, &params(2)).unwrap();
        assert_eq!(f.verdict, Verdict::ConvergesHopf);
        assert_eq!(f.witness.unwrap().mode, Mode::Legendre(4));
        // A pure l = n+1 Legendre mode converges to the round sphere at rate −1.
        let c = AstigmatismCoefficients::new(2, vec![], vec![], vec![q(0), q(1)]).unwrap();
        let f = classify_fate(&c, &params(2)).unwrap();
        assert_eq!(f.verdict, Verdict::ConvergesRound);
        assert_eq!(f.witness.unwrap(), Witness { mode: Mode::Legendre(3), rate: q(-1) });
    }
}
