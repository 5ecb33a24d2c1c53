//! Order of contact, degeneracy and RoC slopes at the polar umbilics.
//!
//! Write `s = sin²θ · S`. If `S` vanishes to order `j` in `u = 1 ∓ cos θ` at a
//! pole, then `(ψ(pole) − ψ)/s → (j+2)/(j+1)` there.

use super::state::{SphereState, StateBacking};
use super::GeometryError;
use crate::basis::coeffs::AstigmatismCoefficients;
use crate::basis::poly::{CosPolynomial, Pole};
use crate::basis::BasisError;
use crate::scalar::{rat, Rational, Scalar, ZERO_REL_TOL};

#[derive(Clone, Debug, PartialEq)]
pub enum Slope {
    /// Exact value from the polynomial expansion at the pole.
    Exact(Rational),
    /// Extrapolated from samples.
    Estimate(f64),
    /// `s` vanishes identically.
    Round,
    /// `s` vanishes to all resolved orders on this side; the slope is undefined.
    FlatContact,
}

impl Slope {
    pub fn value(&self) -> Option<f64> {
        match self {
            Slope::Exact(q) => Some(q.as_f64()),
            Slope::Estimate(v) => Some(*v),
            Slope::Round | Slope::FlatContact => None,
        }
    }
}

impl std::fmt::Display for Slope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Slope::Exact(q) => write!(f, "{q}"),
            Slope::Estimate(v) => write!(f, "{v}"),
            Slope::Round => write!(f, "round"),
            Slope::FlatContact => write!(f, "undefined (flat-order contact)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleSlopes {
    pub north: Slope,
    pub south: Slope,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UmbilicData {
    /// Least `l` with `(a_l, b_l) ≠ (0, 0)`; `None` for a round sphere.
    pub order: Option<usize>,
    pub nondegenerate: bool,
    pub slopes: PoleSlopes,
}

/// `(j+2)/(j+1)`.
pub fn slope_for_contact(j: usize) -> Rational {
    rat(j as i64 + 2, j as i64 + 1)
}

/// Vanishing order of `s / sin²θ` at `pole`; `None` when `s` is negligible.
pub fn contact_order<T: Scalar>(
    s: &CosPolynomial<T>,
    pole: Pole,
    rel_tol: f64,
) -> Result<Option<usize>, BasisError> {
    let g = s
        .div_one_minus_x2(rel_tol)
        .ok_or(BasisError::NotVanishingAtPoles)?;
    let series = g.pole_expansion(pole).ok_or(BasisError::OddPrefactor)?;
    let scale = series
        .iter()
        .fold(T::zero(), |m, c| if c.abs() > m { c.abs() } else { m });
    Ok(series.iter().position(|c| !c.is_negligible(&scale, rel_tol)))
}

pub fn polynomial_slopes<T: Scalar>(s: &CosPolynomial<T>, rel_tol: f64) -> Result<PoleSlopes, BasisError> {
    let side = |pole| -> Result<Slope, BasisError> {
        Ok(match contact_order(s, pole, rel_tol)? {
            Some(j) => Slope::Exact(slope_for_contact(j)),
            None => Slope::Round,
        })
    };
    Ok(PoleSlopes {
        north: side(Pole::North)?,
        south: side(Pole::South)?,
    })
}

pub fn slope_at_poles<T: Scalar>(coeffs: &AstigmatismCoefficients<T>) -> Result<PoleSlopes, BasisError> {
    polynomial_slopes(&coeffs.to_polynomial(), ZERO_REL_TOL)
}

pub fn order_and_degeneracy<T: Scalar>(
    coeffs: &AstigmatismCoefficients<T>,
    tol: f64,
) -> Result<UmbilicData, BasisError> {
    let (a, b) = coeffs.to_full_trig();
    let scale = coeffs.max_abs();
    let negligible = |v: &T| v.is_negligible(&scale, tol);
    let order = (0..a.len().max(b.len())).find(|&l| {
        let al = a.get(l).cloned().unwrap_or_else(T::zero);
        let bl = b.get(l).cloned().unwrap_or_else(T::zero);
        !(negligible(&al) && negligible(&bl))
    });
    let nondegenerate = match order {
        Some(k) => {
            let al = a.get(k).cloned().unwrap_or_else(T::zero);
            let bl = b.get(k).cloned().unwrap_or_else(T::zero);
            let (a2, b2) = (al.clone() * al, bl.clone() * bl);
            let big = if a2 > b2 { a2.clone() } else { b2.clone() };
            !(a2 - b2).is_negligible(&big, tol)
        }
        None => false,
    };
    Ok(UmbilicData {
        order,
        nondegenerate,
        slopes: polynomial_slopes(&coeffs.to_polynomial(), tol)?,
    })
}

/// Slopes of any state: exact for polynomial backing, Richardson-extrapolated
/// `−ψ'/s'` toward each pole for sampled backing.
pub fn state_slopes(state: &SphereState) -> Result<PoleSlopes, GeometryError> {
    if let Some(exact) = state.exact() {
        return Ok(polynomial_slopes(&exact.s, 0.0)?);
    }
    match state.backing() {
        StateBacking::Polynomial(p) => Ok(polynomial_slopes(&p.s, ZERO_REL_TOL)?),
        StateBacking::Sampled(g) => {
            let scale = g.s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                return Ok(PoleSlopes {
                    north: Slope::Round,
                    south: Slope::Round,
                });
            }
            Ok(PoleSlopes {
                north: extrapolated_slope(state, Pole::North, scale),
                south: extrapolated_slope(state, Pole::South, scale),
            })
        }
    }
}

fn extrapolated_slope(state: &SphereState, pole: Pole, scale: f64) -> Slope {
    let base = pole.theta();
    let dir = if pole == Pole::North { 1.0 } else { -1.0 };
    let mut column = Vec::with_capacity(4);
    for i in 0..4 {
        let h = 0.08 / f64::from(1u32 << i);
        let v = state.at(base + dir * h);
        if v.ds.abs() <= 1e-14 * scale {
            return Slope::FlatContact;
        }
        column.push(-v.dpsi / v.ds);
    }
    // Error expands in even powers of the pole distance.
    let mut factor = 4.0;
    while column.len() > 1 {
        column = column
            .windows(2)
            .map(|w| (factor * w[1] - w[0]) / (factor - 1.0))
            .collect();
        factor *= 4.0;
    }
    Slope::Estimate(column[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::hopf::hopf_sphere;
    use proptest::prelude::*;

    fn q(v: i64) -> Rational {
        rat(v, 1)
    }

    #[test]
    fn documented_slopes() {
        let c = AstigmatismCoefficients::from_trig(0, &[q(3)], &[q(2)]);
        let s = slope_at_poles(&c).unwrap();
        assert_eq!(s.north, Slope::Exact(q(2)));
        assert_eq!(s.south, Slope::Exact(q(2)));
        let c = AstigmatismCoefficients::from_trig(0, &[q(1), q(2)], &[q(1), q(3)]);
        let s = slope_at_poles(&c).unwrap();
        assert_eq!(s.north, Slope::Exact(q(2)));
        assert_eq!(s.south, Slope::Exact(rat(3, 2)));
        let zero = AstigmatismCoefficients::<Rational>::zero(2);
        assert_eq!(slope_at_poles(&zero).unwrap().north, Slope::Round);
    }

    #[test]
    fn order_examples() {
        let c = AstigmatismCoefficients::from_trig(0, &[q(1)], &[]);
        let d = order_and_degeneracy(&c, 0.0).unwrap();
        assert_eq!((d.order, d.nondegenerate), (Some(0), true));
        let c = AstigmatismCoefficients::from_trig(3, &[q(0), q(5)], &[]);
        let d = order_and_degeneracy(&c, 0.0).unwrap();
        assert_eq!(d.order, Some(1));
        assert_eq!(d.slopes.north, Slope::Exact(rat(3, 2)));
        let c = AstigmatismCoefficients::from_trig(1, &[q(1), q(2)], &[q(1), q(3)]);
        let d = order_and_degeneracy(&c, 0.0).unwrap();
        assert_eq!((d.order, d.nondegenerate), (Some(0), false));
    }

    #[test]
    fn sampled_hopf_slopes() {
        for &mu in &[1.8, 2.0, 2.6] {
            let h = hopf_sphere(mu, 10.0, 0.5).unwrap();
            let s = state_slopes(&h.state).unwrap();
            let (n, so) = (s.north.value().unwrap(), s.south.value().unwrap());
            assert!((n - mu).abs() < 1e-6 && (so - mu).abs() < 1e-6, "μ={mu}: {n} {so}");
        }
    }

    proptest! {
        #[test]
        fn slope_bound(k in 0usize..4, coeffs in proptest::collection::vec(-20i64..20, 11), lead in 1i64..9) {
            let mut a: Vec<Rational> = vec![q(0); k];
            let mut b = a.clone();
            a.push(q(lead));
            b.push(q(coeffs[0]));
            for pair in coeffs[1..].chunks(2) {
                a.push(q(pair[0]));
                b.push(q(pair[1]));
            }
            let c = AstigmatismCoefficients::from_trig(2, &a, &b);
            let d = order_and_degeneracy(&c, 0.0).unwrap();
            prop_assert_eq!(d.order, Some(k));
            let bound = slope_for_contact(k);
            for s in [&d.slopes.north, &d.slopes.south] {
                let Slope::Exact(v) = s else { panic!("exact slope expected") };
                prop_assert!(v <= &bound);
            }
            let both = d.slopes.north == Slope::Exact(bound.clone()) && d.slopes.south == Slope::Exact(bound);
            prop_assert_eq!(both, d.nondegenerate);
        }
    }
}
