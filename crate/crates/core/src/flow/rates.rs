use crate::scalar::{rat, Rational};

/// Exponential rates of the modes for flow integer `n`.
///
/// The finite modes `sin^{2l+2}θ` grow at `μ_l` and `cosθ sin^{2l+2}θ` at
/// `μ_{l+½}`; mode `l+1` feeds mode `l` with weight `ν_{l+1}`. The Legendre
/// mode of degree `l ≥ n` decays at `ω_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeRates {
    pub n: usize,
    pub mu: Vec<Rational>,
    pub mu_half: Vec<Rational>,
    /// Indexed by `l = 0..=n`; `ν_0 = ν_n = 0`.
    pub nu: Vec<Rational>,
}

/// `μ_l = (2l+1)(n−l)/(n+1)`.
pub fn mu(n: usize, l: usize) -> Rational {
    let (n, l) = (n as i64, l as i64);
    rat((2 * l + 1) * (n - l), n + 1)
}

/// `μ_{l+½} = (l+1)(2n−2l−1)/(n+1)`.
pub fn mu_half(n: usize, l: usize) -> Rational {
    let (n, l) = (n as i64, l as i64);
    rat((l + 1) * (2 * n - 2 * l - 1), n + 1)
}

/// `ν_l = 2l(n−l)/(n+1)`.
pub fn nu(n: usize, l: usize) -> Rational {
    let (n, l) = (n as i64, l as i64);
    rat(2 * l * (n - l), n + 1)
}

/// `ω_l = (l(l+1) − n(n+1)) / (2(n+1))`.
pub fn omega(n: usize, l: usize) -> Rational {
    let (n, l) = (n as i64, l as i64);
    rat(l * (l + 1) - n * (n + 1), 2 * (n + 1))
}

pub fn mode_rates(n: usize) -> ModeRates {
    ModeRates {
        n,
        mu: (0..n).map(|l| mu(n, l)).collect(),
        mu_half: (0..n).map(|l| mu_half(n, l)).collect(),
        nu: (0..=n).map(|l| nu(n, l)).collect(),
    }
}

impl ModeRates {
    pub fn omega(&self, l: usize) -> Rational {
        omega(self.n, l)
    }

    /// Largest growth rate among all finite modes (`None` for `n = 0`).
    pub fn max_growth(&self) -> Option<Rational> {
        self.mu.iter().chain(&self.mu_half).max().cloned()
    }
}
