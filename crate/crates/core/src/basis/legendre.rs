//! Associated Legendre polynomials with the Condon–Shortley phase.
//!
//! `P^m_l(x) = (−1)^m / (2^l l!) · (1−x²)^{m/2} · d^{l+m}/dx^{l+m} (x²−1)^l`

use super::poly::CosPolynomial;
use super::BasisError;
use crate::scalar::{factorial, rat, Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{Float, One, Zero};

/// `P^m_l(x)` by upward recurrence in `l`.
pub fn legendre_assoc<F: Float>(l: usize, m: usize, x: F) -> Result<F, BasisError> {
    if m > l {
        return Err(BasisError::LegendreDegree { l, m });
    }
    if x.is_nan() || x.abs() > F::one() {
        return Err(BasisError::LegendreArgument(x.to_f64().unwrap_or(f64::NAN)));
    }
    let row = legendre_column(l, m, x);
    Ok(row[l - m])
}

/// `[P^m_m(x), P^m_{m+1}(x), …, P^m_{lmax}(x)]`; empty when `lmax < m`.
///
/// The argument is assumed to lie in `[−1, 1]`.
pub fn legendre_column<F: Float>(lmax: usize, m: usize, x: F) -> Vec<F> {
    if lmax < m {
        return Vec::new();
    }
    let one = F::one();
    let two = one + one;
    let somx2 = ((one - x) * (one + x)).max(F::zero()).sqrt();
    let mut pmm = one;
    let mut odd = one;
    for _ in 0..m {
        pmm = -pmm * odd * somx2;
        odd = odd + two;
    }
    let mut out = Vec::with_capacity(lmax - m + 1);
    out.push(pmm);
    if lmax == m {
        return out;
    }
    let cast = |v: usize| F::from(v).expect("index fits in float");
    let mut prev = pmm;
    let mut curr = x * cast(2 * m + 1) * pmm;
    out.push(curr);
    for l in (m + 1)..lmax {
        let next = (cast(2 * l + 1) * x * curr - cast(l + m) * prev) / cast(l - m + 1);
        prev = curr;
        curr = next;
        out.push(curr);
    }
    out
}

/// `P^m_l(x) / (1−x²)^{m/2}` as an exact polynomial of degree `l − m` in `x`.
pub fn legendre_reduced(l: usize, m: usize) -> Result<CosPolynomial<Rational>, BasisError> {
    if m > l {
        return Err(BasisError::LegendreDegree { l, m });
    }
    // (x² − 1)^l = Σ_j C(l,j) (−1)^{l−j} x^{2j}
    let order = l + m;
    let mut coeffs = vec![Rational::zero(); l - m + 1];
    for j in 0..=l {
        let power = 2 * j;
        if power < order {
            continue;
        }
        let mut c = crate::scalar::binomial(l as i64, j as i64);
        if (l - j) % 2 == 1 {
            c = -c;
        }
        // d^{order}/dx^{order} x^{power} = power!/(power−order)! x^{power−order}
        let falling = Rational::from_integer(
            factorial(power as u32) / factorial((power - order) as u32),
        );
        coeffs[power - order] += c * falling;
    }
    let mut scale = Rational::new(
        BigInt::one(),
        BigInt::from(2).pow(l as u32) * factorial(l as u32),
    );
    if m % 2 == 1 {
        scale = -scale;
    }
    Ok(CosPolynomial::from_coeffs(coeffs).scale(&scale))
}

/// `P^m_l(cos θ)` as an exact [`CosPolynomial`] with symbolic `sin^m θ` prefactor.
pub fn legendre_exact(l: usize, m: usize) -> Result<CosPolynomial<Rational>, BasisError> {
    Ok(legendre_reduced(l, m)?.times_sin_power(m as u32))
}

/// `(−1)^n (2n−1)!!`, the constant with `P^n_n = (−1)^n (2n−1)!! sin^n θ`.
pub fn sectoral_constant(n: usize) -> Rational {
    let mut c = Rational::one();
    for k in 0..n {
        c *= rat(-(2 * k as i64 + 1), 1);
    }
    c
}

/// `sin^{2+n} θ · P^n_l(cos θ)` as an expanded polynomial in `x`.
pub fn legendre_mode<T: Scalar>(n: usize, l: usize) -> Result<CosPolynomial<T>, BasisError> {
    let reduced = legendre_reduced(l, n)?;
    let mode = &reduced * &CosPolynomial::sin_even_power(n as u32 + 1);
    Ok(mode.map(T::from_rational))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_values() {
        assert_eq!(legendre_assoc(0, 0, 0.3).unwrap(), 1.0);
        assert!((legendre_assoc(1, 1, 0.0).unwrap() + 1.0).abs() < 1e-15);
        // P_2(x) = (3x² − 1)/2
        assert!((legendre_assoc(2, 0, 0.5).unwrap() + 0.125).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            legendre_assoc(1, 2, 0.0),
            Err(BasisError::LegendreDegree { .. })
        ));
        assert!(matches!(
            legendre_assoc(2, 0, 1.5),
            Err(BasisError::LegendreArgument(_))
        ));
        assert!(legendre_assoc(2, 0, f64::NAN).is_err());
    }

    #[test]
    fn exact_polynomials_match_recurrence() {
        for l in 0..12 {
            for m in 0..=l {
                let exact = legendre_exact(l, m).unwrap();
                for &theta in &[0.2_f64, 1.0, 1.9, 2.8] {
                    let rec = legendre_assoc(l, m, theta.cos()).unwrap();
                    let ex = exact.eval(theta);
                    assert!(
                        (rec - ex).abs() <= 1e-10 * (1.0 + rec.abs()),
                        "l={l} m={m} θ={theta}: {rec} vs {ex}"
                    );
                }
            }
        }
    }

    #[test]
    fn condon_shortley_examples() {
        // P¹₂(x) = −3x√(1−x²)
        let p12 = legendre_exact(2, 1).unwrap();
        assert_eq!(p12.sin_power(), 1);
        assert_eq!(p12.coeffs(), &[rat(0, 1), rat(-3, 1)]);
        // P²₂ = 3(1 − x²)
        let p22 = legendre_reduced(2, 2).unwrap();
        assert_eq!(p22.coeffs(), &[rat(3, 1)]);
        assert_eq!(sectoral_constant(2), rat(3, 1));
        assert_eq!(sectoral_constant(3), rat(-15, 1));
    }

    #[test]
    fn single_precision_recurrence() {
        let v: f32 = legendre_assoc(3, 1, 0.25f32).unwrap();
        let d = legendre_assoc(3, 1, 0.25f64).unwrap();
        assert!((v as f64 - d).abs() < 1e-5);
    }
}
