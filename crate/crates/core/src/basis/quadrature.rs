//! Support function from astigmatism and back.
//!
//! With `x = cos θ` and `r = R(x)`:
//! `ψ = R + ½((1−x²)R')'`, `s = −½(1−x²)R''`, and conversely
//! `R = C₂ + C₁x − 2∬ s/(1−x²) dx dx`.

use super::coeffs::AstigmatismCoefficients;
use super::legendre::{legendre_mode, legendre_reduced, sectoral_constant};
use super::poly::CosPolynomial;
use super::BasisError;
use crate::scalar::{binomial, Rational, Scalar};

/// Input accepted by [`quadrature_r_from_s`].
#[derive(Clone, Copy, Debug)]
pub enum AstigmatismSource<'a, T> {
    Coefficients(&'a AstigmatismCoefficients<T>),
    Polynomial(&'a CosPolynomial<T>),
}

/// `r = C₂ + C₁ cos θ − 2∫ sinθ ∫ (s / sinθ) dθ dθ`.
///
/// Coefficient input is integrated mode by mode with the closed forms below;
/// polynomial input is integrated directly. Both pin the homogeneous part to
/// `C₂ + C₁ cos θ` but may differ from each other by an affine term.
pub fn quadrature_r_from_s<T: Scalar>(
    source: AstigmatismSource<'_, T>,
    c1: &T,
    c2: &T,
    rel_tol: f64,
) -> Result<CosPolynomial<T>, BasisError> {
    let particular = match source {
        AstigmatismSource::Polynomial(s) => direct_quadrature(s, rel_tol)?,
        AstigmatismSource::Coefficients(c) => modal_quadrature(c),
    };
    let affine = CosPolynomial::from_coeffs(vec![c2.clone(), c1.clone()]);
    Ok(&particular + &affine)
}

/// `−2 Q₂` where `Q = s/(1−x²)` and `Q₂` is its second antiderivative vanishing with
/// its derivative at `x = 0`.
pub fn direct_quadrature<T: Scalar>(
    s: &CosPolynomial<T>,
    rel_tol: f64,
) -> Result<CosPolynomial<T>, BasisError> {
    if s.sin_power() % 2 == 1 {
        return Err(BasisError::OddPrefactor);
    }
    let q = s
        .div_one_minus_x2(rel_tol)
        .ok_or(BasisError::NotVanishingAtPoles)?;
    Ok(q.antiderivative_x()
        .antiderivative_x()
        .scale(&T::from_i64(-2)))
}

/// Sum of the per-mode closed-form quadratures of a modal expansion.
pub fn modal_quadrature<T: Scalar>(c: &AstigmatismCoefficients<T>) -> CosPolynomial<T> {
    let n = c.n();
    let mut r = CosPolynomial::zero();
    for l in 0..n {
        r = &r + &sin_mode_support::<T>(l).scale(&c.trig_a()[l]);
        r = &r + &cos_sin_mode_support::<T>(l).scale(&c.trig_b()[l]);
    }
    for (i, cl) in c.legendre_c().iter().enumerate() {
        if !cl.is_zero() {
            r = &r + &legendre_mode_support::<T>(n, n + i).scale(cl);
        }
    }
    r
}

/// Support function (without the affine part) of `s = sin^{2l+2} θ`:
/// `−2 Σ_k (−1)^k C(l,k) x^{2k+2} / ((2k+1)(2k+2))`.
pub fn sin_mode_support<T: Scalar>(l: usize) -> CosPolynomial<T> {
    let mut coeffs = vec![T::zero(); 2 * l + 3];
    for k in 0..=l {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let num = binomial(l as i64, k as i64) * crate::scalar::rat(-2 * sign, 1);
        let den = ((2 * k + 1) * (2 * k + 2)) as i64;
        coeffs[2 * k + 2] = T::from_rational(&(num / crate::scalar::rat(den, 1)));
    }
    CosPolynomial::from_coeffs(coeffs)
}

/// Support function (without the affine part) of `s = cos θ sin^{2l+2} θ`:
/// `(1/(l+1)) Σ_{k≤l+1} (−1)^k C(l+1,k) x^{2k+1} / (2k+1)`.
pub fn cos_sin_mode_support<T: Scalar>(l: usize) -> CosPolynomial<T> {
    let mut coeffs = vec![T::zero(); 2 * l + 4];
    for k in 0..=l + 1 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let num = binomial(l as i64 + 1, k as i64) * crate::scalar::rat(sign, 1);
        let den = ((l + 1) * (2 * k + 1)) as i64;
        coeffs[2 * k + 1] = T::from_rational(&(num / crate::scalar::rat(den, 1)));
    }
    CosPolynomial::from_coeffs(coeffs)
}

/// Support function (without the affine part) of `s = sin^{2+n} θ P^n_l(cos θ)`.
///
/// For `l ≥ n+2` this is `−2 sin^{2+n} θ P^{2+n}_l / [(l+n+2)(l+n+1)(l−n)(l−n−1)]`.
/// The modes `l = n` and `l = n+1` are multiples of `sin^{2n+2}θ` and
/// `cos θ sin^{2n+2}θ` and use the trigonometric forms.
pub fn legendre_mode_support<T: Scalar>(n: usize, l: usize) -> CosPolynomial<T> {
    assert!(l >= n, "Legendre mode needs l >= n");
    let k = sectoral_constant(n);
    if l == n {
        return sin_mode_support::<T>(n).scale(&T::from_rational(&k));
    }
    if l == n + 1 {
        let factor = k * crate::scalar::rat(2 * n as i64 + 1, 1);
        return cos_sin_mode_support::<T>(n).scale(&T::from_rational(&factor));
    }
    let reduced = legendre_reduced(l, n + 2).expect("l >= n + 2");
    let body = &reduced * &CosPolynomial::sin_even_power(n as u32 + 2);
    let den = ((l + n + 2) * (l + n + 1) * (l - n) * (l - n - 1)) as i64;
    let scale = crate::scalar::rat(-2, den);
    body.map(T::from_rational).scale(&T::from_rational(&scale))
}

/// `ψ = r + (1/(2 sinθ)) d/dθ(sinθ dr/dθ)`, i.e. `R + ½((1−x²)R')'`.
pub fn psi_from_r<T: Scalar>(r: &CosPolynomial<T>) -> Result<CosPolynomial<T>, BasisError> {
    let r = r.expanded().ok_or(BasisError::OddPrefactor)?;
    let inner = &CosPolynomial::one_minus_x2() * &r.derivative_x();
    Ok(&r + &inner.derivative_x().scale(&T::half()))
}

/// `s = −(sinθ/2) d/dθ((1/sinθ) dr/dθ)`, i.e. `−½(1−x²)R''`.
pub fn s_from_r<T: Scalar>(r: &CosPolynomial<T>) -> Result<CosPolynomial<T>, BasisError> {
    let r = r.expanded().ok_or(BasisError::OddPrefactor)?;
    let second = r.derivative_x().derivative_x();
    Ok((&CosPolynomial::one_minus_x2() * &second).scale(&(-T::half())))
}

/// `sinθ · [d(ψ+s)/dθ + 2 cotθ s] = −(1−x²)(ψ+s)' + 2xs`.
///
/// Zero exactly when the pair comes from a surface.
pub fn codazzi_defect<T: Scalar>(
    psi: &CosPolynomial<T>,
    s: &CosPolynomial<T>,
) -> Result<CosPolynomial<T>, BasisError> {
    let psi = psi.expanded().ok_or(BasisError::OddPrefactor)?;
    let s = s.expanded().ok_or(BasisError::OddPrefactor)?;
    let sum = (&psi + &s).derivative_x();
    let lhs = -&(&CosPolynomial::one_minus_x2() * &sum);
    let rhs = (&CosPolynomial::x() * &s).scale(&T::from_i64(2));
    Ok(&lhs + &rhs)
}

/// A basis mode that failed the roundtrip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundtripMode {
    Sin(usize),
    CosSin(usize),
    Legendre { n: usize, l: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RoundtripSweep {
    pub checked: usize,
    pub failures: Vec<RoundtripMode>,
}

/// Checks `s → r → (ψ, s)` exactly for every trig mode `l ≤ max_trig` and every
/// Legendre mode `n ≤ max_order`, `n ≤ l ≤ max_degree`: `s` must come back
/// unchanged and the Codazzi–Mainardi defect must be the zero polynomial.
pub fn roundtrip_sweep(max_trig: usize, max_order: usize, max_degree: usize) -> RoundtripSweep {
    let mut out = RoundtripSweep::default();
    let mut check = |mode: RoundtripMode, s: CosPolynomial<Rational>, r: CosPolynomial<Rational>| {
        out.checked += 1;
        let ok = match (s_from_r(&r), psi_from_r(&r)) {
            (Ok(back), Ok(psi)) => back == s && codazzi_defect(&psi, &back).is_ok_and(|d| d.is_zero()),
            _ => false,
        };
        if !ok {
            out.failures.push(mode);
        }
    };
    let x = CosPolynomial::<Rational>::x();
    for l in 0..=max_trig {
        let base = CosPolynomial::sin_even_power(l as u32 + 1);
        check(RoundtripMode::Sin(l), base.clone(), sin_mode_support(l));
        check(RoundtripMode::CosSin(l), &x * &base, cos_sin_mode_support(l));
    }
    for n in 0..=max_order {
        for l in n..=max_degree {
            // Degree l ≥ n is always in range.
            let s = legendre_mode::<Rational>(n, l).expect("l >= n");
            check(RoundtripMode::Legendre { n, l }, s, legendre_mode_support(n, l));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::legendre::legendre_mode;
    use crate::scalar::{rat, Rational};
    use num_traits::Zero;

    fn q(v: i64) -> Rational {
        rat(v, 1)
    }

    #[test]
    fn lowest_sin_mode() {
        let s = CosPolynomial::sin_even_power(1).scale(&q(3));
        let r = quadrature_r_from_s(AstigmatismSource::Polynomial(&s), &q(2), &q(7), 0.0).unwrap();
        assert_eq!(r.coeffs(), &[q(7), q(2), q(-3)]);
        let psi = psi_from_r(&r).unwrap();
        // ψ = C₂ + C₀ − 2C₀ sin²θ
        let expect = &CosPolynomial::constant(q(10)) - &CosPolynomial::sin_even_power(1).scale(&q(6));
        assert_eq!(psi, expect);
        assert_eq!(s_from_r(&r).unwrap(), s);
    }

    #[test]
    fn round_sphere() {
        let r = CosPolynomial::constant(q(5));
        assert_eq!(psi_from_r(&r).unwrap(), r);
        assert!(s_from_r(&r).unwrap().is_zero());
        let zero = CosPolynomial::<Rational>::zero();
        let r0 = quadrature_r_from_s(AstigmatismSource::Polynomial(&zero), &q(1), &q(4), 0.0).unwrap();
        assert_eq!(r0.coeffs(), &[q(4), q(1)]);
    }

    #[test]
    fn legendre_closed_form_n0_l4() {
        // s = sin²θ P₄(cosθ) → r = −(2/360) sin²θ P²₄(cosθ)
        let r = legendre_mode_support::<Rational>(0, 4);
        let p24 = crate::basis::legendre::legendre_exact(4, 2).unwrap();
        let expect = p24.times_sin_power(2).expanded().unwrap().scale(&rat(-1, 180));
        assert_eq!(r, expect);
    }

    #[test]
    fn rejects_nonzero_pole_values() {
        let s = CosPolynomial::from_coeffs(vec![q(1), q(1)]);
        assert_eq!(
            direct_quadrature(&s, 0.0),
            Err(BasisError::NotVanishingAtPoles)
        );
    }

    #[test]
    fn trig_modes_roundtrip_with_codazzi() {
        for l in 0..=8usize {
            let x = CosPolynomial::<Rational>::x();
            let sm = CosPolynomial::sin_even_power(l as u32 + 1);
            for (s, r) in [
                (sm.clone(), sin_mode_support::<Rational>(l)),
                (&x * &sm, cos_sin_mode_support::<Rational>(l)),
            ] {
                assert_eq!(s_from_r(&r).unwrap(), s, "l={l}");
                let psi = psi_from_r(&r).unwrap();
                assert!(codazzi_defect(&psi, &s).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn legendre_modes_roundtrip_and_match_direct_route() {
        for n in 0..=3usize {
            for l in n..=10 {
                let s = legendre_mode::<Rational>(n, l).unwrap();
                let r = legendre_mode_support::<Rational>(n, l);
                assert_eq!(s_from_r(&r).unwrap(), s, "n={n} l={l}");
                let direct = direct_quadrature(&s, 0.0).unwrap();
                let diff = &r - &direct;
                assert!(diff.degree().unwrap_or(0) <= 1, "n={n} l={l}");
            }
        }
    }

    #[test]
    fn sweep_counts_every_mode() {
        let sweep = roundtrip_sweep(8, 3, 10);
        assert!(sweep.failures.is_empty(), "{:?}", sweep.failures);
        assert_eq!(sweep.checked, 18 + 11 + 10 + 9 + 8);
    }

    #[test]
    fn sin_mode_mean_radius_cross_check() {
        // For l ≥ 1: ψ = C₂ + C₀ Σ_k (−1)^k (k+2)/(k+1) C(l,k) − (1 + 1/(l+1)) C₀ sin^{2l+2}θ.
        for l in 1..=6usize {
            let r = sin_mode_support::<Rational>(l);
            let psi = psi_from_r(&r).unwrap();
            let mut constant = Rational::zero();
            for k in 0..=l {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                constant += binomial(l as i64, k as i64) * rat(sign * (k as i64 + 2), k as i64 + 1);
            }
            let expect = &CosPolynomial::constant(constant)
                - &CosPolynomial::sin_even_power(l as u32 + 1).scale(&rat(l as i64 + 2, l as i64 + 1));
            assert_eq!(psi, expect, "l={l}");
        }
    }

    #[test]
    fn cos_mode_mean_radius_derivative() {
        // dψ/dθ = −2(l+2) sin^{2l+1}θ + (2l+5) sin^{2l+3}θ for s = cosθ sin^{2l+2}θ
        for l in 0..=6usize {
            let psi = psi_from_r(&cos_sin_mode_support::<Rational>(l)).unwrap();
            let d = psi.d_theta().normalized();
            let expect = (&CosPolynomial::sin_even_power(l as u32).scale(&q(-2 * (l as i64 + 2)))
                + &CosPolynomial::sin_even_power(l as u32 + 1).scale(&q(2 * l as i64 + 5)))
                .times_sin_power(1)
                .normalized();
            assert_eq!(d, expect, "l={l}");
        }
    }

    #[test]
    fn modal_and_direct_routes_agree_up_to_affine() {
        let c = AstigmatismCoefficients::new(2, vec![q(1), q(-2)], vec![q(3), q(1)], vec![q(2), q(0), q(5)]).unwrap();
        let s = c.to_polynomial();
        let a = modal_quadrature(&c);
        let b = direct_quadrature(&s, 0.0).unwrap();
        assert!((&a - &b).degree().unwrap_or(0) <= 1);
        assert_eq!(s_from_r(&a).unwrap(), s);
    }

    #[test]
    fn corrupted_pair_detected() {
        let r = sin_mode_support::<Rational>(1);
        let psi = psi_from_r(&r).unwrap();
        let s = &s_from_r(&r).unwrap() + &CosPolynomial::sin_even_power(2);
        assert!(!codazzi_defect(&psi, &s).unwrap().is_zero());
    }
}
