//! Scalar abstraction shared by the exact (rational) and floating-point pipelines.
//!
//! Every coefficient-level algorithm in the crate is written once against
//! [`Scalar`]. With [`Rational`] the triangular solves, quadratures and
//! identities are exact; with `f64` (or `f32`) the same code evaluates
//! time-dependent or fitted data.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Default relative threshold under which floating coefficients count as zero.
pub const ZERO_REL_TOL: f64 = 1e-10;

pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Signed + Send + Sync + 'static
{
    /// True when arithmetic on the type is exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_rational(r: &Rational) -> Self;

    /// `None` for non-finite input.
    fn try_from_f64(v: f64) -> Option<Self>;

    fn as_f64(&self) -> f64;

    /// Zero test relative to `scale`. Exact types ignore the tolerance.
    fn is_negligible(&self, scale: &Self, rel_tol: f64) -> bool;

    fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }
}

macro_rules! impl_float_scalar {
    ($f:ty) => {
        impl Scalar for $f {
            const EXACT: bool = false;

            fn from_i64(v: i64) -> Self {
                v as $f
            }

            fn from_rational(r: &Rational) -> Self {
                ToPrimitive::to_f64(r).unwrap_or(f64::NAN) as $f
            }

            fn try_from_f64(v: f64) -> Option<Self> {
                v.is_finite().then_some(v as $f)
            }

            fn as_f64(&self) -> f64 {
                *self as f64
            }

            fn is_negligible(&self, scale: &Self, rel_tol: f64) -> bool {
                (self.abs() as f64) <= rel_tol * (scale.abs() as f64)
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }

    fn try_from_f64(v: f64) -> Option<Self> {
        <Rational as FromPrimitive>::from_f64(v)
    }

    fn as_f64(&self) -> f64 {
        // Large numerators/denominators can overflow the direct conversion.
        self.to_f64_checked()
    }

    fn is_negligible(&self, _scale: &Self, _rel_tol: f64) -> bool {
        self.is_zero()
    }
}

trait RationalToF64 {
    fn to_f64_checked(&self) -> f64;
}

impl RationalToF64 for Rational {
    fn to_f64_checked(&self) -> f64 {
        match ToPrimitive::to_f64(self) {
            Some(v) if v.is_finite() => v,
            _ => {
                let num = self.numer();
                let den = self.denom();
                let shift = num.bits().max(den.bits()).saturating_sub(900);
                let n = (num >> shift).to_f64().unwrap_or(f64::NAN);
                let d = (den >> shift).to_f64().unwrap_or(f64::NAN);
                n / d
            }
        }
    }
}

/// Shorthand for an exact rational `num/den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"3"`, `"-2/3"`, `"0.125"` or `"1e-3"` into an exact rational.
/// Decimal literals are read exactly (`"0.1"` is 1/10, not the nearest double).
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return None;
        }
        return Some(n / d);
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all.parse::<BigInt>().ok()?);
    let scale = exponent - frac_part.len() as i32;
    let ten = Rational::from_integer(BigInt::from(10));
    if scale >= 0 {
        value *= num_traits::pow(ten, scale as usize);
    } else {
        value /= num_traits::pow(ten, (-scale) as usize);
    }
    Some(if neg { -value } else { value })
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact binomial coefficient as a rational; zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 || n < 0 || k > n {
        return Rational::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Rational::from_integer(acc)
}

/// Exact factorial.
pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_decimals() {
        assert_eq!(parse_rational("0.1"), Some(rat(1, 10)));
        assert_eq!(parse_rational("-2/3"), Some(rat(-2, 3)));
        assert_eq!(parse_rational("1e-3"), Some(rat(1, 1000)));
        assert_eq!(parse_rational("2.5E1"), Some(rat(25, 1)));
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), rat(10, 1));
        assert_eq!(binomial(3, 4), rat(0, 1));
        assert_eq!(binomial(60, 30).as_f64(), 118264581564861424.0);
    }

    #[test]
    fn negligible_threshold() {
        assert!(1e-12_f64.is_negligible(&1.0, ZERO_REL_TOL));
        assert!(!1e-9_f64.is_negligible(&1.0, ZERO_REL_TOL));
        assert!(!rat(1, 1_000_000_000_000).is_negligible(&rat(1, 1), ZERO_REL_TOL));
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = Rational::new(
            num_traits::pow(BigInt::from(10), 400) * 3,
            num_traits::pow(BigInt::from(10), 400),
        );
        assert!((big.as_f64() - 3.0).abs() < 1e-15);
    }
}
