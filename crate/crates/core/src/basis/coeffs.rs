//! Modal representations of the astigmatism and the exact changes of basis
//! between the trigonometric family `{sin^{2l+2}θ, cosθ·sin^{2l+2}θ}` and the
//! Legendre family `{sin^{2+n}θ · P^n_l(cosθ)}`.

use super::legendre::{legendre_column, legendre_mode, legendre_reduced};
use super::poly::CosPolynomial;
use super::BasisError;
use crate::scalar::{Rational, Scalar};

/// `s(θ) = Σ_{l<n} (a_l + b_l cosθ) sin^{2l+2}θ + sin^{2+n}θ Σ_{l≥n} c_l P^n_l(cosθ)`.
///
/// `legendre_c[i]` is the coefficient of degree `l = n + i`.
#[derive(Clone, Debug, PartialEq)]
pub struct AstigmatismCoefficients<T> {
    n: usize,
    trig_a: Vec<T>,
    trig_b: Vec<T>,
    legendre_c: Vec<T>,
}

/// Constants `ã_l`, `b̃_l` multiplying the pure exponentials of the growing modes.
#[derive(Clone, Debug, PartialEq)]
pub struct TildeCoefficients<T> {
    pub n: usize,
    pub tilde_a: Vec<T>,
    pub tilde_b: Vec<T>,
}

impl<T: Scalar> AstigmatismCoefficients<T> {
    /// Trig lists shorter than `n` are zero-padded; longer ones are rejected.
    pub fn new(
        n: usize,
        mut trig_a: Vec<T>,
        mut trig_b: Vec<T>,
        legendre_c: Vec<T>,
    ) -> Result<Self, BasisError> {
        if trig_a.len() > n || trig_b.len() > n {
            return Err(BasisError::TrigLength {
                n,
                len: trig_a.len().max(trig_b.len()),
            });
        }
        trig_a.resize(n, T::zero());
        trig_b.resize(n, T::zero());
        let mut c = legendre_c;
        while c.last().is_some_and(|v| v.is_zero()) {
            c.pop();
        }
        Ok(AstigmatismCoefficients {
            n,
            trig_a,
            trig_b,
            legendre_c: c,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, Vec::new(), Vec::new(), Vec::new()).expect("empty lists")
    }

    /// Splits a full trigonometric expansion `Σ_l (a_l + b_l cosθ) sin^{2l+2}θ`
    /// at `n`, converting the tail to Legendre form.
    pub fn from_trig(n: usize, a: &[T], b: &[T]) -> Self {
        let get = |v: &[T], l: usize| v.get(l).cloned().unwrap_or_else(T::zero);
        let len = a.len().max(b.len()).max(n);
        let head_a = (0..n).map(|l| get(a, l)).collect();
        let head_b = (0..n).map(|l| get(b, l)).collect();
        let tail_a: Vec<T> = (n..len).map(|l| get(a, l)).collect();
        let tail_b: Vec<T> = (n..len).map(|l| get(b, l)).collect();
        let c = trig_to_legendre(&tail_a, &tail_b, n);
        Self::new(n, head_a, head_b, c).expect("head lists have length n")
    }

    /// Decomposes an astigmatism polynomial. Fails if it does not vanish at the poles.
    pub fn from_polynomial(n: usize, s: &CosPolynomial<T>, rel_tol: f64) -> Result<Self, BasisError> {
        let (a, b) = full_trig_from_polynomial(s, rel_tol)?;
        Ok(Self::from_trig(n, &a, &b))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trig_a(&self) -> &[T] {
        &self.trig_a
    }

    pub fn trig_b(&self) -> &[T] {
        &self.trig_b
    }

    pub fn legendre_c(&self) -> &[T] {
        &self.legendre_c
    }

    /// `c_l`, zero beyond the stored truncation.
    pub fn legendre(&self, l: usize) -> T {
        if l < self.n {
            return T::zero();
        }
        self.legendre_c
            .get(l - self.n)
            .cloned()
            .unwrap_or_else(T::zero)
    }

    /// Highest Legendre degree present (`None` when the tail is empty).
    pub fn max_legendre_degree(&self) -> Option<usize> {
        self.legendre_c.len().checked_sub(1).map(|i| i + self.n)
    }

    /// Full trigonometric coefficients `(a_l, b_l)` for `l ≥ 0`.
    pub fn to_full_trig(&self) -> (Vec<T>, Vec<T>) {
        let (ta, tb) = legendre_to_trig(&self.legendre_c, self.n);
        let mut a = self.trig_a.clone();
        let mut b = self.trig_b.clone();
        a.extend(ta);
        b.extend(tb);
        (a, b)
    }

    /// The same surface split at a different flow integer.
    pub fn with_n(&self, n: usize) -> Self {
        let (a, b) = self.to_full_trig();
        Self::from_trig(n, &a, &b)
    }

    /// `s` as an expanded polynomial in `cos θ`.
    pub fn to_polynomial(&self) -> CosPolynomial<T> {
        let mut s = CosPolynomial::zero();
        let x = CosPolynomial::<T>::x();
        for l in 0..self.n {
            let mode = CosPolynomial::sin_even_power(l as u32 + 1);
            s = &s + &mode.scale(&self.trig_a[l]);
            s = &s + &(&x * &mode).scale(&self.trig_b[l]);
        }
        for (i, c) in self.legendre_c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mode = legendre_mode::<T>(self.n, self.n + i).expect("l >= n");
            s = &s + &mode.scale(c);
        }
        s
    }

    /// Evaluates `s(θ)` term by term, with the Legendre part by recurrence.
    pub fn eval(&self, theta: f64) -> f64 {
        let (sin, cos) = theta.sin_cos();
        let mut total = 0.0;
        for l in 0..self.n {
            let w = sin.powi(2 * l as i32 + 2);
            total += (self.trig_a[l].as_f64() + self.trig_b[l].as_f64() * cos) * w;
        }
        if !self.legendre_c.is_empty() {
            let lmax = self.n + self.legendre_c.len() - 1;
            let column = legendre_column(lmax, self.n, cos);
            let tail: f64 = self
                .legendre_c
                .iter()
                .zip(column)
                .map(|(c, p)| c.as_f64() * p)
                .sum();
            total += sin.powi(2 + self.n as i32) * tail;
        }
        total
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U + Copy) -> AstigmatismCoefficients<U> {
        AstigmatismCoefficients {
            n: self.n,
            trig_a: self.trig_a.iter().map(f).collect(),
            trig_b: self.trig_b.iter().map(f).collect(),
            legendre_c: self.legendre_c.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> AstigmatismCoefficients<f64> {
        self.map(|c| c.as_f64())
    }

    /// Largest coefficient magnitude across all three lists.
    pub fn max_abs(&self) -> T {
        self.trig_a
            .iter()
            .chain(&self.trig_b)
            .chain(&self.legendre_c)
            .map(|c| c.abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// True when every coefficient is at most `abs_tol` in magnitude.
    pub fn is_zero(&self, abs_tol: f64) -> bool {
        self.max_abs().as_f64() <= abs_tol
    }

    /// Exact copy with every coefficient below `rel_tol × max|coefficient|` set to zero.
    pub fn to_exact(&self, rel_tol: f64) -> AstigmatismCoefficients<Rational> {
        let scale = self.max_abs();
        let snap = |c: &T| {
            if c.is_negligible(&scale, rel_tol) {
                Rational::from_i64(0)
            } else {
                Rational::try_from_f64(c.as_f64()).expect("finite coefficient")
            }
        };
        let mut out = AstigmatismCoefficients {
            n: self.n,
            trig_a: self.trig_a.iter().map(snap).collect(),
            trig_b: self.trig_b.iter().map(snap).collect(),
            legendre_c: self.legendre_c.iter().map(snap).collect(),
        };
        while out.legendre_c.last().is_some_and(num_traits::Zero::is_zero) {
            out.legendre_c.pop();
        }
        out
    }
}

/// Writes `g(x) = E(x²) + x·O(x²)` and re-expands `E` and `O` in powers of
/// `(1 − x²)`. Returns `(α_j, β_j)` with `g = Σ_j (α_j + β_j x)(1 − x²)^j`.
fn sin_power_expansion<T: Scalar>(g: &CosPolynomial<T>) -> (Vec<T>, Vec<T>) {
    let coeffs = g.coeffs();
    let even: Vec<T> = coeffs.iter().step_by(2).cloned().collect();
    let odd: Vec<T> = coeffs.iter().skip(1).step_by(2).cloned().collect();
    (reflect_shift(&even), reflect_shift(&odd))
}

/// Coefficients of `p(1 − z)` in powers of `z`, given `p(y) = Σ p_k y^k`.
fn reflect_shift<T: Scalar>(p: &[T]) -> Vec<T> {
    if p.is_empty() {
        return Vec::new();
    }
    let step = CosPolynomial::from_coeffs(vec![T::one(), -T::one()]);
    let mut acc = CosPolynomial::<T>::zero();
    for c in p.iter().rev() {
        acc = &(&acc * &step) + &CosPolynomial::constant(c.clone());
    }
    let mut out = acc.coeffs().to_vec();
    out.resize(p.len(), T::zero());
    out
}

/// Inverse of [`sin_power_expansion`].
fn sin_power_sum<T: Scalar>(alpha: &[T], beta: &[T]) -> CosPolynomial<T> {
    let x = CosPolynomial::<T>::x();
    let len = alpha.len().max(beta.len());
    let mut total = CosPolynomial::zero();
    for j in 0..len {
        let w = CosPolynomial::sin_even_power(j as u32);
        if let Some(a) = alpha.get(j) {
            total = &total + &w.scale(a);
        }
        if let Some(b) = beta.get(j) {
            total = &total + &(&x * &w).scale(b);
        }
    }
    total
}

/// Full trig coefficients of an astigmatism polynomial `s = (1−x²) Σ (a_l + b_l x)(1−x²)^l`.
pub fn full_trig_from_polynomial<T: Scalar>(
    s: &CosPolynomial<T>,
    rel_tol: f64,
) -> Result<(Vec<T>, Vec<T>), BasisError> {
    if s.sin_power() % 2 == 1 {
        return Err(BasisError::OddPrefactor);
    }
    let g = s
        .div_one_minus_x2(rel_tol)
        .ok_or(BasisError::NotVanishingAtPoles)?;
    Ok(sin_power_expansion(&g))
}

/// Exact change of basis for the tail `l ≥ n`:
/// `Σ (a_l + b_l cosθ) sin^{2l+2}θ = sin^{2+n}θ Σ c_l P^n_l(cosθ)`.
///
/// `tail_a[j]`, `tail_b[j]` and the returned `c[j]` all refer to `l = n + j`.
pub fn trig_to_legendre<T: Scalar>(tail_a: &[T], tail_b: &[T], n: usize) -> Vec<T> {
    // Divide both sides by sin^{2+2n}: F(x) = Σ_j (a + b x)(1−x²)^j = Σ c_l Q^n_l(x),
    // where Q^n_l = P^n_l / sin^n has exact degree l − n.
    let mut f = sin_power_sum(tail_a, tail_b);
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    let mut c = vec![T::zero(); deg + 1];
    for d in (0..=deg).rev() {
        let lead = f.coeff(d);
        if lead.is_zero() {
            continue;
        }
        let q = legendre_reduced(n + d, n)
            .expect("l >= n")
            .map(T::from_rational);
        let coef = lead / q.coeff(d);
        f = &f - &q.scale(&coef);
        c[d] = coef;
    }
    while c.last().is_some_and(|v| v.is_zero()) {
        c.pop();
    }
    c
}

/// Exact inverse of [`trig_to_legendre`]; returns `(tail_a, tail_b)` from `l = n`.
pub fn legendre_to_trig<T: Scalar>(c: &[T], n: usize) -> (Vec<T>, Vec<T>) {
    let mut f = CosPolynomial::zero();
    for (j, cj) in c.iter().enumerate() {
        if cj.is_zero() {
            continue;
        }
        let q = legendre_reduced(n + j, n)
            .expect("l >= n")
            .map(T::from_rational);
        f = &f + &q.scale(cj);
    }
    let (mut a, mut b) = sin_power_expansion(&f);
    while a.last().is_some_and(|v| v.is_zero()) {
        a.pop();
    }
    while b.last().is_some_and(|v| v.is_zero()) {
        b.pop();
    }
    let len = a.len().max(b.len());
    a.resize(len, T::zero());
    b.resize(len, T::zero());
    (a, b)
}
