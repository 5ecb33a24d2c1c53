//! Least-squares decomposition of sampled astigmatism into modal coefficients.

use super::coeffs::AstigmatismCoefficients;
use super::legendre::legendre_column;
use super::BasisError;
use nalgebra::{DMatrix, DVector};

pub const DEFAULT_MAX_DEGREE: usize = 32;
pub const DEFAULT_FIT_TOLERANCE: f64 = 1e-9;

/// Fitted coefficients and the worst absolute misfit over the samples.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleFit {
    pub coeffs: AstigmatismCoefficients<f64>,
    pub residual: f64,
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, nodes ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `θ` values of an `order`-point Gauss–Legendre rule in `cos θ`, ascending in θ.
pub fn gauss_theta_nodes(order: usize) -> Vec<f64> {
    let (x, _) = gauss_legendre(order);
    x.iter().rev().map(|v| v.acos()).collect()
}

/// Fits `s(θ)` in the mixed basis for flow integer `n`, with Legendre degrees
/// up to `max_degree`, by SVD least squares on column-normalised basis values.
pub fn decompose_samples(
    samples: &[(f64, f64)],
    n: usize,
    max_degree: usize,
    tolerance: f64,
) -> Result<SampleFit, BasisError> {
    for &(theta, v) in samples {
        if !(theta > 0.0 && theta < std::f64::consts::PI) || !v.is_finite() {
            return Err(BasisError::BadSample(theta));
        }
    }
    let max_degree = max_degree.max(n);
    let legendre_count = max_degree - n + 1;
    let unknowns = 2 * n + legendre_count;
    if samples.len() < unknowns {
        return Err(BasisError::TooFewSamples {
            needed: unknowns,
            got: samples.len(),
        });
    }
    if samples.iter().all(|&(_, v)| v == 0.0) {
        return Ok(SampleFit {
            coeffs: AstigmatismCoefficients::zero(n),
            residual: 0.0,
        });
    }

    let mut design = DMatrix::<f64>::zeros(samples.len(), unknowns);
    for (row, &(theta, _)) in samples.iter().enumerate() {
        let (sin, cos) = theta.sin_cos();
        for l in 0..n {
            let w = sin.powi(2 * l as i32 + 2);
            design[(row, l)] = w;
            design[(row, n + l)] = cos * w;
        }
        let prefactor = sin.powi(2 + n as i32);
        for (j, p) in legendre_column(max_degree, n, cos).into_iter().enumerate() {
            design[(row, 2 * n + j)] = prefactor * p;
        }
    }
    let mut norms = vec![1.0; unknowns];
    for (j, norm) in norms.iter_mut().enumerate() {
        let v = design.column(j).norm();
        if v > 0.0 {
            *norm = v;
            design.column_mut(j).scale_mut(1.0 / v);
        }
    }
    let rhs = DVector::from_iterator(samples.len(), samples.iter().map(|&(_, v)| v));
    let svd = design.clone().svd(true, true);
    let scaled = svd
        .solve(&rhs, 1e-13)
        .map_err(|_| BasisError::FitResidual {
            residual: f64::INFINITY,
            tolerance,
        })?;
    let fitted = &design * &scaled;
    let residual = (&fitted - &rhs).amax();
    let solution: Vec<f64> = scaled.iter().zip(&norms).map(|(c, w)| c / w).collect();

    if residual > tolerance {
        return Err(BasisError::FitResidual { residual, tolerance });
    }
    let coeffs = AstigmatismCoefficients::new(
        n,
        solution[..n].to_vec(),
        solution[n..2 * n].to_vec(),
        solution[2 * n..].to_vec(),
    )
    .expect("trig lists have length n");
    Ok(SampleFit { coeffs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let quartic: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((quartic - 0.4).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn fits_lowest_mode() {
        let samples: Vec<_> = gauss_theta_nodes(64)
            .into_iter()
            .map(|t| (t, t.sin().powi(2)))
            .collect();
        let fit = decompose_samples(&samples, 0, DEFAULT_MAX_DEGREE, DEFAULT_FIT_TOLERANCE).unwrap();
        assert!((fit.coeffs.legendre(0) - 1.0).abs() < 1e-12);
        for l in 1..=DEFAULT_MAX_DEGREE {
            assert!(fit.coeffs.legendre(l).abs() < 1e-12, "l={l}");
        }
    }

    #[test]
    fn fits_mixed_surface() {
        let f = |t: f64| (1.0 + t.cos()) * t.sin().powi(2) + 2.0 * t.sin().powi(4);
        let samples: Vec<_> = gauss_theta_nodes(64).into_iter().map(|t| (t, f(t))).collect();
        let fit = decompose_samples(&samples, 1, 12, DEFAULT_FIT_TOLERANCE).unwrap();
        assert!((fit.coeffs.trig_a()[0] - 1.0).abs() < 1e-10);
        assert!((fit.coeffs.trig_b()[0] - 1.0).abs() < 1e-10);
        // 2 sin⁴θ = sin³θ · (−2) P¹₁(cosθ)
        assert!((fit.coeffs.legendre(1) + 2.0).abs() < 1e-10);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn zero_samples_and_errors() {
        let samples: Vec<_> = gauss_theta_nodes(40).into_iter().map(|t| (t, 0.0)).collect();
        let fit = decompose_samples(&samples, 2, 10, DEFAULT_FIT_TOLERANCE).unwrap();
        assert_eq!(fit.coeffs.max_abs(), 0.0);
        assert!(matches!(
            decompose_samples(&samples[..3], 2, 10, 1e-9),
            Err(BasisError::TooFewSamples { .. })
        ));
        assert!(matches!(
            decompose_samples(&[(0.0, 1.0)], 0, 0, 1e-9),
            Err(BasisError::BadSample(_))
        ));
        // |cos θ|·sin²θ is not a polynomial: a low-degree fit must be flagged.
        let kink: Vec<_> = gauss_theta_nodes(64)
            .into_iter()
            .map(|t| (t, t.cos().abs() * t.sin().powi(2)))
            .collect();
        assert!(matches!(
            decompose_samples(&kink, 0, 8, 1e-9),
            Err(BasisError::FitResidual { .. })
        ));
    }
}
