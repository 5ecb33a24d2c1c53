//! The finite modes form a chain `dX_l/dt = rate_l X_l − ν_{l+1} X_{l+1}`,
//! solved by `X_l(t) = Σ_{j≥l} K_{l,j} X̃_j e^{rate_j t}` with `K_{j,j} = 1`.

use super::rates::ModeRates;
use crate::basis::coeffs::{AstigmatismCoefficients, TildeCoefficients};
use crate::scalar::Rational;
use num_traits::{One, Zero};

/// Which of the two finite families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `sin^{2l+2}θ`, rates `μ_l`.
    Sin,
    /// `cosθ sin^{2l+2}θ`, rates `μ_{l+½}`.
    CosSin,
}

impl ModeRates {
    pub fn family_rates(&self, family: Family) -> &[Rational] {
        match family {
            Family::Sin => &self.mu,
            Family::CosSin => &self.mu_half,
        }
    }
}

/// Upper-triangular `K` with `K[l][j]` for `j ≥ l` (zero below the diagonal).
///
/// `K_{l,j} = −ν_{l+1} K_{l+1,j} / (rate_j − rate_l)`.
pub fn chain_matrix(rates: &[Rational], nu: &[Rational]) -> Vec<Vec<Rational>> {
    let len = rates.len();
    let mut k = vec![vec![Rational::zero(); len]; len];
    for j in 0..len {
        k[j][j] = Rational::one();
        for l in (0..j).rev() {
            let num = -(&nu[l + 1] * &k[l + 1][j]);
            k[l][j] = num / (&rates[j] - &rates[l]);
        }
    }
    k
}

/// Solves `x_l = Σ_{j≥l} K_{l,j} x̃_j` for `x̃` by back-substitution from the top.
pub fn solve_tilde(k: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    let len = x.len();
    let mut tilde = vec![Rational::zero(); len];
    for l in (0..len).rev() {
        let mut v = x[l].clone();
        for j in l + 1..len {
            v -= &k[l][j] * &tilde[j];
        }
        tilde[l] = v;
    }
    tilde
}

/// `x_l = Σ_{j≥l} K_{l,j} x̃_j`.
pub fn apply_chain(k: &[Vec<Rational>], tilde: &[Rational]) -> Vec<Rational> {
    (0..tilde.len())
        .map(|l| (l..tilde.len()).map(|j| &k[l][j] * &tilde[j]).sum())
        .collect()
}

/// Constants of the pure exponentials in the finite part of the astigmatism.
pub fn tilde_from_initial(
    coeffs: &AstigmatismCoefficients<Rational>,
    rates: &ModeRates,
) -> TildeCoefficients<Rational> {
    let ka = chain_matrix(&rates.mu, &rates.nu);
    let kb = chain_matrix(&rates.mu_half, &rates.nu);
    TildeCoefficients {
        n: coeffs.n(),
        tilde_a: solve_tilde(&ka, coeffs.trig_a()),
        tilde_b: solve_tilde(&kb, coeffs.trig_b()),
    }
}
