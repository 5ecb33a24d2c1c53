//! A sphere at one instant: support function `r`, mean radius `ψ` and
//! astigmatism `s` as functions of the Gauss-map angle θ.

use crate::basis::poly::CosPolynomial;
use crate::basis::quadrature::{psi_from_r, s_from_r};
use crate::basis::BasisError;
use crate::scalar::Rational;

/// Closed-form triple together with θ-derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialProfile {
    pub r: CosPolynomial<f64>,
    pub psi: CosPolynomial<f64>,
    pub s: CosPolynomial<f64>,
    dr: CosPolynomial<f64>,
    dpsi: CosPolynomial<f64>,
    ds: CosPolynomial<f64>,
    /// Exact version when the state was built from rational data.
    exact: Option<ExactProfile>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactProfile {
    pub r: CosPolynomial<Rational>,
    pub psi: CosPolynomial<Rational>,
    pub s: CosPolynomial<Rational>,
}

/// Values and θ-derivatives on an increasing θ grid covering `[0, π]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledProfile {
    pub theta: Vec<f64>,
    pub r: Vec<f64>,
    pub dr: Vec<f64>,
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub s: Vec<f64>,
    pub ds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateBacking {
    Polynomial(PolynomialProfile),
    Sampled(SampledProfile),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereState {
    backing: StateBacking,
    time: f64,
}

/// The six quantities at one angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointValues {
    pub r: f64,
    pub dr: f64,
    pub psi: f64,
    pub dpsi: f64,
    pub s: f64,
    pub ds: f64,
}

impl SphereState {
    /// State from an exact support function; `ψ` and `s` follow by differentiation.
    pub fn from_exact_support(r: CosPolynomial<Rational>, time: f64) -> Result<Self, BasisError> {
        let psi = psi_from_r(&r)?;
        let s = s_from_r(&r)?;
        let exact = ExactProfile {
            r: r.expanded().ok_or(BasisError::OddPrefactor)?,
            psi,
            s,
        };
        let mut profile = Self::profile(exact.r.to_f64(), exact.psi.to_f64(), exact.s.to_f64());
        profile.exact = Some(exact);
        Ok(SphereState {
            backing: StateBacking::Polynomial(profile),
            time,
        })
    }

    /// State from a floating-point support function.
    pub fn from_support(r: CosPolynomial<f64>, time: f64) -> Result<Self, BasisError> {
        let psi = psi_from_r(&r)?;
        let s = s_from_r(&r)?;
        let r = r.expanded().ok_or(BasisError::OddPrefactor)?;
        Ok(SphereState {
            backing: StateBacking::Polynomial(Self::profile(r, psi, s)),
            time,
        })
    }

    /// State from separately known closed forms (caller guarantees consistency).
    pub fn from_polynomials(
        r: CosPolynomial<f64>,
        psi: CosPolynomial<f64>,
        s: CosPolynomial<f64>,
        time: f64,
    ) -> Self {
        SphereState {
            backing: StateBacking::Polynomial(Self::profile(r, psi, s)),
            time,
        }
    }

    pub fn from_samples(samples: SampledProfile, time: f64) -> Self {
        debug_assert!(samples.theta.windows(2).all(|w| w[0] < w[1]));
        SphereState {
            backing: StateBacking::Sampled(samples),
            time,
        }
    }

    fn profile(r: CosPolynomial<f64>, psi: CosPolynomial<f64>, s: CosPolynomial<f64>) -> PolynomialProfile {
        PolynomialProfile {
            dr: r.d_theta(),
            dpsi: psi.d_theta(),
            ds: s.d_theta(),
            r,
            psi,
            s,
            exact: None,
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn with_time(mut self, time: f64) -> Self {
        self.time = time;
        self
    }

    pub fn backing(&self) -> &StateBacking {
        &self.backing
    }

    pub fn polynomials(&self) -> Option<&PolynomialProfile> {
        match &self.backing {
            StateBacking::Polynomial(p) => Some(p),
            StateBacking::Sampled(_) => None,
        }
    }

    pub fn exact(&self) -> Option<&ExactProfile> {
        self.polynomials().and_then(|p| p.exact.as_ref())
    }

    pub fn at(&self, theta: f64) -> PointValues {
        match &self.backing {
            StateBacking::Polynomial(p) => PointValues {
                r: p.r.eval(theta),
                dr: p.dr.eval(theta),
                psi: p.psi.eval(theta),
                dpsi: p.dpsi.eval(theta),
                s: p.s.eval(theta),
                ds: p.ds.eval(theta),
            },
            StateBacking::Sampled(g) => g.interpolate(theta),
        }
    }

    pub fn r(&self, theta: f64) -> f64 {
        self.at(theta).r
    }

    pub fn psi(&self, theta: f64) -> f64 {
        self.at(theta).psi
    }

    pub fn s(&self, theta: f64) -> f64 {
        self.at(theta).s
    }

    /// Principal radius `ψ + s`.
    pub fn r1(&self, theta: f64) -> f64 {
        let v = self.at(theta);
        v.psi + v.s
    }

    /// Principal radius of the profile curve, `ψ − s`.
    pub fn r2(&self, theta: f64) -> f64 {
        let v = self.at(theta);
        v.psi - v.s
    }

    /// `samples` equally spaced angles from 0 to π inclusive.
    pub fn grid(samples: usize) -> Vec<f64> {
        let m = samples.max(2) - 1;
        (0..=m)
            .map(|i| std::f64::consts::PI * i as f64 / m as f64)
            .collect()
    }

    /// Min over θ of `min(ψ + s, ψ − s)`; positive iff the sphere is strictly convex.
    pub fn min_principal_radius(&self, samples: usize) -> f64 {
        Self::grid(samples)
            .into_iter()
            .map(|t| {
                let v = self.at(t);
                (v.psi + v.s).min(v.psi - v.s)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_convex(&self, samples: usize) -> bool {
        self.min_principal_radius(samples) > 0.0
    }
}

impl SampledProfile {
    /// Piecewise cubic Hermite interpolation in θ (values and derivatives both interpolated).
    pub fn interpolate(&self, theta: f64) -> PointValues {
        let n = self.theta.len();
        let i = match self
            .theta
            .binary_search_by(|v| v.partial_cmp(&theta).expect("finite grid"))
        {
            Ok(i) => {
                return PointValues {
                    r: self.r[i],
                    dr: self.dr[i],
                    psi: self.psi[i],
                    dpsi: self.dpsi[i],
                    s: self.s[i],
                    ds: self.ds[i],
                }
            }
            Err(0) => 0,
            Err(i) if i >= n => n - 2,
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.theta[i], self.theta[i + 1]);
        let h = t1 - t0;
        let u = (theta - t0) / h;
        let (r, dr) = hermite(u, h, self.r[i], self.dr[i], self.r[i + 1], self.dr[i + 1]);
        let (psi, dpsi) = hermite(u, h, self.psi[i], self.dpsi[i], self.psi[i + 1], self.dpsi[i + 1]);
        let (s, ds) = hermite(u, h, self.s[i], self.ds[i], self.s[i + 1], self.ds[i + 1]);
        PointValues {
            r,
            dr,
            psi,
            dpsi,
            s,
            ds,
        }
    }
}

/// Cubic Hermite value and derivative at local coordinate `u ∈ [0, 1]`.
fn hermite(u: f64, h: f64, y0: f64, d0: f64, y1: f64, d1: f64) -> (f64, f64) {
    let u2 = u * u;
    let u3 = u2 * u;
    let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    let h10 = u3 - 2.0 * u2 + u;
    let h01 = -2.0 * u3 + 3.0 * u2;
    let h11 = u3 - u2;
    let value = h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    let dh00 = 6.0 * u2 - 6.0 * u;
    let dh10 = 3.0 * u2 - 4.0 * u + 1.0;
    let dh01 = -6.0 * u2 + 6.0 * u;
    let dh11 = 3.0 * u2 - 2.0 * u;
    let deriv = (dh00 * y0 + dh01 * y1) / h + dh10 * d0 + dh11 * d1;
    (value, deriv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn round_sphere_state() {
        let st = SphereState::from_exact_support(CosPolynomial::constant(rat(4, 1)), 0.0).unwrap();
        for t in SphereState::grid(9) {
            assert_eq!(st.psi(t), 4.0);
            assert_eq!(st.s(t), 0.0);
        }
        assert!(st.is_convex(64));
    }

    #[test]
    fn hermite_reproduces_cubic() {
        let f = |t: f64| t * t * t - 2.0 * t;
        let df = |t: f64| 3.0 * t * t - 2.0;
        let theta: Vec<f64> = (0..=10).map(|i| i as f64 * 0.3).collect();
        let col = |g: &dyn Fn(f64) -> f64| theta.iter().map(|&t| g(t)).collect::<Vec<_>>();
        let p = SampledProfile {
            theta: theta.clone(),
            r: col(&f),
            dr: col(&df),
            psi: col(&f),
            dpsi: col(&df),
            s: col(&f),
            ds: col(&df),
        };
        let v = p.interpolate(1.234);
        assert!((v.r - f(1.234)).abs() < 1e-12);
        assert!((v.dr - df(1.234)).abs() < 1e-11);
    }
}
