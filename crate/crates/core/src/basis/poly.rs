//! Polynomials in `x = cos θ` carrying a symbolic `sin^p θ` prefactor.

use crate::scalar::Scalar;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `sin^p θ · Σ coeffs[k] cos^k θ`.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq)]
pub struct CosPolynomial<T> {
    coeffs: Vec<T>,
    sin_power: u32,
}

/// Which pole of the sphere: `θ = 0` (north, `x = 1`) or `θ = π` (south, `x = -1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pole {
    North,
    South,
}

impl Pole {
    pub fn x(self) -> i64 {
        match self {
            Pole::North => 1,
            Pole::South => -1,
        }
    }

    pub fn theta(self) -> f64 {
        match self {
            Pole::North => 0.0,
            Pole::South => std::f64::consts::PI,
        }
    }
}

impl<T: Scalar> CosPolynomial<T> {
    pub fn new(coeffs: Vec<T>, sin_power: u32) -> Self {
        let mut p = CosPolynomial { coeffs, sin_power };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        Self::new(coeffs, 0)
    }

    pub fn zero() -> Self {
        CosPolynomial {
            coeffs: Vec::new(),
            sin_power: 0,
        }
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `cos θ`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![T::zero(), T::one()])
    }

    /// `1 - x² = sin² θ` as an expanded polynomial.
    pub fn one_minus_x2() -> Self {
        Self::from_coeffs(vec![T::one(), T::zero(), -T::one()])
    }

    /// `sin^{2k} θ` expanded in powers of `x`.
    pub fn sin_even_power(k: u32) -> Self {
        let base = Self::one_minus_x2();
        (0..k).fold(Self::constant(T::one()), |acc, _| &acc * &base)
    }

    /// `x^k`.
    pub fn monomial(k: usize, c: T) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.sin_power = 0;
        }
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the end).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn sin_power(&self) -> u32 {
        self.sin_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `x`, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Largest coefficient magnitude (after expansion when the prefactor is even).
    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Rewrites an even prefactor `sin^{2k}` as `(1-x²)^k`; `None` for odd prefactors.
    pub fn expanded(&self) -> Option<Self> {
        if self.sin_power % 2 == 1 {
            return None;
        }
        let mut out = CosPolynomial {
            coeffs: self.coeffs.clone(),
            sin_power: 0,
        };
        for _ in 0..self.sin_power / 2 {
            out = &out * &Self::one_minus_x2();
        }
        Some(out)
    }

    /// Reduces the prefactor to its parity (`p mod 2`) by expanding the even part.
    pub fn normalized(&self) -> Self {
        let extra = self.sin_power / 2;
        let mut out = CosPolynomial {
            coeffs: self.coeffs.clone(),
            sin_power: self.sin_power % 2,
        };
        for _ in 0..extra {
            out.coeffs = mul_coeffs(&out.coeffs, &Self::one_minus_x2().coeffs);
        }
        out.trim();
        out
    }

    /// Both operands re-expressed over a common prefactor. `None` on parity mismatch.
    fn aligned(&self, other: &Self) -> Option<(Vec<T>, Vec<T>, u32)> {
        if self.is_zero() {
            return Some((Vec::new(), other.coeffs.clone(), other.sin_power));
        }
        if other.is_zero() {
            return Some((self.coeffs.clone(), Vec::new(), self.sin_power));
        }
        if self.sin_power % 2 != other.sin_power % 2 {
            return None;
        }
        let p = self.sin_power.min(other.sin_power);
        let lift = |q: &Self| -> Vec<T> {
            let mut c = q.coeffs.clone();
            for _ in 0..(q.sin_power - p) / 2 {
                c = mul_coeffs(&c, &Self::one_minus_x2().coeffs);
            }
            c
        };
        Some((lift(self), lift(other), p))
    }

    /// Sum, `None` when the prefactors have different parity.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let (a, b, p) = self.aligned(other)?;
        let n = a.len().max(b.len());
        let coeffs = (0..n)
            .map(|k| {
                let x = a.get(k).cloned().unwrap_or_else(T::zero);
                let y = b.get(k).cloned().unwrap_or_else(T::zero);
                x + y
            })
            .collect();
        Some(Self::new(coeffs, p))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(
            self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            self.sin_power,
        )
    }

    /// d/dx of the polynomial part; the prefactor must be zero.
    pub fn derivative_x(&self) -> Self {
        assert_eq!(self.sin_power, 0, "derivative_x needs an expanded polynomial");
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * T::from_i64(k as i64))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// Antiderivative in `x` that vanishes at `x = 0`; the prefactor must be zero.
    pub fn antiderivative_x(&self) -> Self {
        assert_eq!(self.sin_power, 0, "antiderivative_x needs an expanded polynomial");
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(T::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.clone() / T::from_i64(k as i64 + 1));
        }
        Self::from_coeffs(coeffs)
    }

    /// d/dθ of `sin^p θ · f(cos θ)`, which is `sin^{p-1}[p x f − (1−x²) f']`.
    ///
    /// For `p = 0` the result is `sin θ · (−f')`.
    pub fn d_theta(&self) -> Self {
        let f = CosPolynomial::from_coeffs(self.coeffs.clone());
        let fp = f.derivative_x();
        if self.sin_power == 0 {
            return CosPolynomial::new(fp.coeffs.into_iter().map(|c| -c).collect(), 1);
        }
        let p = T::from_i64(self.sin_power as i64);
        let term1 = (&Self::x() * &f).scale(&p);
        let term2 = &Self::one_minus_x2() * &fp;
        let inner = &term1 - &term2;
        CosPolynomial::new(inner.coeffs, self.sin_power - 1)
    }

    /// Multiplies by `sin^k θ` symbolically.
    pub fn times_sin_power(&self, k: u32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        CosPolynomial {
            coeffs: self.coeffs.clone(),
            sin_power: self.sin_power + k,
        }
    }

    /// Exact division by `(1 − x²)`. Returns `None` when the polynomial does not
    /// vanish at both `x = ±1` (to within the zero threshold for floating types).
    pub fn div_one_minus_x2(&self, rel_tol: f64) -> Option<Self> {
        let expanded = self.expanded()?;
        if expanded.is_zero() {
            return Some(Self::zero());
        }
        let scale = expanded.max_abs_coeff();
        // (1 − x²) = −(x − 1)(x + 1)
        let (q1, r1) = synthetic_div(&expanded.coeffs, &T::one());
        let (q2, r2) = synthetic_div(&q1, &(-T::one()));
        if !r1.is_negligible(&scale, rel_tol) || !r2.is_negligible(&scale, rel_tol) {
            return None;
        }
        Some(Self::from_coeffs(q2.into_iter().map(|c| -c).collect()))
    }

    /// Value of the polynomial part at `x`.
    pub fn eval_poly_x(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.as_f64())
    }

    /// `sin^p θ · f(cos θ)`.
    pub fn eval(&self, theta: f64) -> f64 {
        let base = self.eval_poly_x(theta.cos());
        if self.sin_power == 0 {
            base
        } else {
            base * theta.sin().powi(self.sin_power as i32)
        }
    }

    /// Exact value at a pole (the polynomial part times `sin^p` evaluated at `x = ±1`).
    pub fn value_at_pole(&self, pole: Pole) -> T {
        if self.sin_power > 0 {
            return T::zero();
        }
        let x = T::from_i64(pole.x());
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Coefficients of the expanded polynomial in the local variable `u` with
    /// `x = 1 − u` (north) or `x = −1 + u` (south). `None` for odd prefactors.
    pub fn pole_expansion(&self, pole: Pole) -> Option<Vec<T>> {
        let e = self.expanded()?;
        let sign = T::from_i64(-pole.x());
        let shift = T::from_i64(pole.x());
        // Horner in the shifted variable: x = shift + sign*u
        let step = CosPolynomial::from_coeffs(vec![shift, sign]);
        let mut acc = CosPolynomial::<T>::zero();
        for c in e.coeffs.iter().rev() {
            acc = &(&acc * &step) + &CosPolynomial::constant(c.clone());
        }
        Some(acc.coeffs)
    }

    /// Converts the coefficients to another scalar type.
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CosPolynomial<U> {
        CosPolynomial::new(self.coeffs.iter().map(f).collect(), self.sin_power)
    }

    pub fn to_f64(&self) -> CosPolynomial<f64> {
        self.map(|c| c.as_f64())
    }

    /// True when all coefficients are negligible relative to `scale`.
    pub fn is_negligible(&self, scale: &T, rel_tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible(scale, rel_tol))
    }
}

fn mul_coeffs<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Divides `Σ c_k x^k` by `(x − root)`, returning quotient and remainder.
fn synthetic_div<T: Scalar>(coeffs: &[T], root: &T) -> (Vec<T>, T) {
    if coeffs.is_empty() {
        return (Vec::new(), T::zero());
    }
    let n = coeffs.len();
    let mut quotient = vec![T::zero(); n - 1];
    let mut carry = T::zero();
    for k in (0..n).rev() {
        let value = coeffs[k].clone() + carry.clone() * root.clone();
        if k == 0 {
            return (quotient, value);
        }
        quotient[k - 1] = value.clone();
        carry = value;
    }
    unreachable!()
}

impl<T: Scalar> Add for &CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    fn add(self, rhs: Self) -> CosPolynomial<T> {
        self.checked_add(rhs)
            .expect("adding sin-prefactors of different parity")
    }
}

impl<T: Scalar> Sub for &CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    fn sub(self, rhs: Self) -> CosPolynomial<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    fn neg(self) -> CosPolynomial<T> {
        CosPolynomial::new(
            self.coeffs.iter().map(|c| -c.clone()).collect(),
            self.sin_power,
        )
    }
}

impl<T: Scalar> Mul for &CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    // Prefactor powers add when the polynomials multiply.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Self) -> CosPolynomial<T> {
        CosPolynomial::new(
            mul_coeffs(&self.coeffs, &rhs.coeffs),
            self.sin_power + rhs.sin_power,
        )
    }
}

impl<T: Scalar> Add for CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    fn add(self, rhs: Self) -> CosPolynomial<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    fn sub(self, rhs: Self) -> CosPolynomial<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for CosPolynomial<T> {
    type Output = CosPolynomial<T>;
    fn mul(self, rhs: Self) -> CosPolynomial<T> {
        &self * &rhs
    }
}

impl<T: Scalar> fmt::Display for CosPolynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.sin_power > 0 {
            write!(f, "sin^{}(θ)·(", self.sin_power)?;
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}·x")?,
                _ => write!(f, "{c}·x^{k}")?,
            }
        }
        if self.sin_power > 0 {
            write!(f, ")")?;
        }
        Ok(())
    }
}
