//! Finite sums `Σ t^k e^{σt} P(cos θ)` with exact rates and exact polynomial prefactors.

use crate::basis::poly::CosPolynomial;
use crate::scalar::{Rational, Scalar};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesTerm {
    pub rate: Rational,
    pub t_power: u32,
    pub poly: CosPolynomial<Rational>,
}

impl SeriesTerm {
    /// `t^k e^{σt}`.
    pub fn weight(&self, t: f64) -> f64 {
        let e = (self.rate.as_f64() * t).exp();
        if self.t_power == 0 {
            e
        } else {
            e * t.powi(self.t_power as i32)
        }
    }
}

/// Terms are kept sorted by descending rate, then descending power, with
/// one term per `(rate, power)` pair and no zero polynomials.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct QuasiSeries {
    terms: Vec<SeriesTerm>,
}

impl QuasiSeries {
    pub fn new() -> Self {
        QuasiSeries { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[SeriesTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `t^k e^{σt} P`, merging with an existing term of the same `(σ, k)`.
    pub fn add_term(&mut self, rate: Rational, t_power: u32, poly: CosPolynomial<Rational>) {
        if poly.is_zero() {
            return;
        }
        if let Some(i) = self
            .terms
            .iter()
            .position(|term| term.rate == rate && term.t_power == t_power)
        {
            let merged = &self.terms[i].poly + &poly;
            if merged.is_zero() {
                self.terms.remove(i);
            } else {
                self.terms[i].poly = merged;
            }
            return;
        }
        let at = self
            .terms
            .iter()
            .position(|term| (&term.rate, term.t_power) < (&rate, t_power))
            .unwrap_or(self.terms.len());
        self.terms.insert(
            at,
            SeriesTerm {
                rate,
                t_power,
                poly,
            },
        );
    }

    pub fn add(&self, other: &QuasiSeries) -> QuasiSeries {
        let mut out = self.clone();
        for t in &other.terms {
            out.add_term(t.rate.clone(), t.t_power, t.poly.clone());
        }
        out
    }

    /// Polynomial of rate `σ` and power `k`, zero when absent.
    pub fn coefficient(&self, rate: &Rational, t_power: u32) -> CosPolynomial<Rational> {
        self.terms
            .iter()
            .find(|t| &t.rate == rate && t.t_power == t_power)
            .map(|t| t.poly.clone())
            .unwrap_or_else(CosPolynomial::zero)
    }

    /// The polynomial-in-cos θ value at time `t`.
    pub fn at_time(&self, t: f64) -> CosPolynomial<f64> {
        self.terms.iter().fold(CosPolynomial::zero(), |acc, term| {
            let w = term.weight(t);
            &acc + &term.poly.to_f64().scale(&w)
        })
    }

    /// `Σ_k t^k e^{σt} P(cos θ)` evaluated directly.
    pub fn eval(&self, t: f64, theta: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| term.weight(t) * term.poly.eval(theta))
            .sum()
    }

    /// Exact value at `t = 0`.
    pub fn at_zero(&self) -> CosPolynomial<Rational> {
        self.terms
            .iter()
            .filter(|t| t.t_power == 0)
            .fold(CosPolynomial::zero(), |acc, term| &acc + &term.poly)
    }

    pub fn time_derivative(&self) -> QuasiSeries {
        let mut out = QuasiSeries::new();
        for term in &self.terms {
            if !term.rate.is_zero() {
                out.add_term(term.rate.clone(), term.t_power, term.poly.scale(&term.rate));
            }
            if term.t_power > 0 {
                let k = Rational::from_i64(term.t_power as i64);
                out.add_term(term.rate.clone(), term.t_power - 1, term.poly.scale(&k));
            }
        }
        out
    }

    /// Applies a linear map to every polynomial prefactor.
    pub fn map_polys<E>(
        &self,
        mut f: impl FnMut(&CosPolynomial<Rational>) -> Result<CosPolynomial<Rational>, E>,
    ) -> Result<QuasiSeries, E> {
        let mut out = QuasiSeries::new();
        for term in &self.terms {
            out.add_term(term.rate.clone(), term.t_power, f(&term.poly)?);
        }
        Ok(out)
    }

    /// Largest rate carrying a nonzero term.
    pub fn leading_rate(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn merging_and_evaluation() {
        let mut s = QuasiSeries::new();
        let p = CosPolynomial::sin_even_power(1);
        s.add_term(rat(-1, 1), 0, p.clone());
        s.add_term(rat(1, 2), 0, p.clone());
        s.add_term(rat(-1, 1), 0, p.scale(&rat(2, 1)));
        assert_eq!(s.terms().len(), 2);
        assert_eq!(s.leading_rate(), Some(&rat(1, 2)));
        let v = s.eval(0.7, 1.2);
        let expect = (3.0 * (-0.7f64).exp() + (0.35f64).exp()) * 1.2f64.sin().powi(2);
        assert!((v - expect).abs() < 1e-14);
        s.add_term(rat(1, 2), 0, p.scale(&rat(-1, 1)));
        assert_eq!(s.terms().len(), 1);
    }

    #[test]
    fn derivative_with_secular_term() {
        let mut s = QuasiSeries::new();
        s.add_term(rat(-1, 1), 1, CosPolynomial::constant(rat(2, 1)));
        let d = s.time_derivative();
        // d/dt (2 t e^{−t}) = 2 e^{−t} − 2 t e^{−t}
        let t = 0.9;
        let fd = (s.eval(t + 1e-6, 0.0) - s.eval(t - 1e-6, 0.0)) / 2e-6;
        assert!((d.eval(t, 0.0) - fd).abs() < 1e-8);
    }
}
