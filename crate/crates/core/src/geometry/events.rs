//! Loss of convexity and motion of umbilic circles along a flow.
//!
//! Candidate times are bracketed on a uniform time grid, with `θ` resolved on
//! [`EVENT_GRID`] samples, then refined by bisection on the closed forms.

use super::state::SphereState;
use super::GeometryError;
use crate::basis::poly::{CosPolynomial, Pole};
use crate::basis::BasisError;
use crate::flow::series::QuasiSeries;
use crate::flow::solution::FlowSolution;
use crate::scalar::{Rational, Scalar};

pub const EVENT_GRID: usize = 2048;
pub const EVENT_TIME_STEPS: usize = 512;
pub const EVENT_TIME_TOL: f64 = 1e-10;
const ANGLE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radius {
    /// `ψ + s`.
    Parallel,
    /// `ψ − s`, the radius of the profile curve.
    Meridian,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    /// A principal radius changes sign: the RoC curve crosses a diagonal.
    FocalCrossing {
        time: f64,
        theta: f64,
        radius: Radius,
        /// True when convexity is lost, false when it is regained.
        losing: bool,
    },
    /// An umbilic circle reaches a pole (or emerges from one).
    UmbilicPop {
        time: f64,
        pole: Pole,
        circles_before: usize,
        circles_after: usize,
    },
}

impl Event {
    pub fn time(&self) -> f64 {
        match self {
            Event::FocalCrossing { time, .. } | Event::UmbilicPop { time, .. } => *time,
        }
    }
}

/// Interior umbilic angles at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct UmbilicTrack {
    pub time: f64,
    pub angles: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventReport {
    pub events: Vec<Event>,
    pub tracks: Vec<UmbilicTrack>,
}

/// `Σ c e^{σt}` with exact rates and coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpSum {
    pub terms: Vec<(Rational, Rational)>,
}

impl ExpSum {
    pub fn eval(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(rate, c)| c.as_f64() * (rate.as_f64() * t).exp())
            .sum()
    }
}

/// `s / sin²θ` as a series in time.
pub fn reduced_astigmatism(sol: &FlowSolution) -> Result<QuasiSeries, BasisError> {
    sol.s_series()
        .map_polys(|p| p.div_one_minus_x2(0.0).ok_or(BasisError::NotVanishingAtPoles))
}

/// Limit of `s / sin²θ` at a pole, as a function of time.
pub fn pole_astigmatism(sol: &FlowSolution, pole: Pole) -> Result<ExpSum, BasisError> {
    let reduced = reduced_astigmatism(sol)?;
    let terms = reduced
        .terms()
        .iter()
        .map(|t| (t.rate.clone(), t.poly.value_at_pole(pole)))
        .filter(|(_, c)| !num_traits::Zero::is_zero(c))
        .collect();
    Ok(ExpSum { terms })
}

/// Interior zeros in `θ` of a reduced astigmatism polynomial.
pub fn umbilic_angles(reduced: &CosPolynomial<f64>) -> Vec<f64> {
    if reduced.is_zero() {
        return Vec::new();
    }
    let grid = SphereState::grid(EVENT_GRID + 1);
    let f = |t: f64| reduced.eval_poly_x(t.cos());
    let inner = &grid[1..grid.len() - 1];
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &t in inner {
        let v = f(t);
        if v == 0.0 {
            out.push(t);
            prev = None;
            continue;
        }
        if let Some((pt, pv)) = prev {
            if pv * v < 0.0 {
                out.push(bisect(f, pt, t, ANGLE_TOL));
            }
        }
        prev = Some((t, v));
    }
    out
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest value of one principal radius over the event grid, with its angle.
fn min_radius(sol: &FlowSolution, t: f64, radius: Radius) -> (f64, f64) {
    let state = sol.state_at(t);
    let sign = match radius {
        Radius::Parallel => 1.0,
        Radius::Meridian => -1.0,
    };
    SphereState::grid(EVENT_GRID + 1)
        .into_iter()
        .map(|th| {
            let v = state.at(th);
            (v.psi + sign * v.s, th)
        })
        .fold((f64::INFINITY, 0.0), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// Times where `f` changes sign between consecutive nonzero samples, refined by bisection.
fn sign_changes(f: &impl Fn(f64) -> f64, times: &[f64]) -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &t in times {
        let v = f(t);
        if v == 0.0 {
            continue;
        }
        if let Some((pt, pv)) = prev {
            if pv * v < 0.0 {
                out.push((bisect(f, pt, t, EVENT_TIME_TOL), pv, v));
            }
        }
        prev = Some((t, v));
    }
    out
}

pub fn convexity_and_umbilic_events(
    sol: &FlowSolution,
    start: f64,
    end: f64,
) -> Result<EventReport, GeometryError> {
    if !(start.is_finite() && end.is_finite() && start >= 0.0 && end >= start) {
        return Err(GeometryError::TimeRange { start, end });
    }
    let times: Vec<f64> = (0..=EVENT_TIME_STEPS)
        .map(|i| start + (end - start) * i as f64 / EVENT_TIME_STEPS as f64)
        .collect();
    let reduced = reduced_astigmatism(sol)?;
    let circles = |t: f64| umbilic_angles(&reduced.at_time(t)).len();
    let mut events = Vec::new();

    if end > start {
        for radius in [Radius::Parallel, Radius::Meridian] {
            let focal = |t: f64| min_radius(sol, t, radius).0;
            for (time, before, _) in sign_changes(&focal, &times) {
                events.push(Event::FocalCrossing {
                    time,
                    theta: min_radius(sol, time, radius).1,
                    radius,
                    losing: before > 0.0,
                });
            }
        }
        for pole in [Pole::North, Pole::South] {
            let value = pole_astigmatism(sol, pole)?;
            let f = |t: f64| value.eval(t);
            for (time, _, _) in sign_changes(&f, &times) {
                let step = (end - start) / EVENT_TIME_STEPS as f64;
                let (lo, hi) = ((time - step).max(start), (time + step).min(end));
                events.push(Event::UmbilicPop {
                    time,
                    pole,
                    circles_before: circles(lo),
                    circles_after: circles(hi),
                });
            }
        }
    }
    events.sort_by(|a, b| a.time().total_cmp(&b.time()));
    let tracks = times
        .iter()
        .map(|&t| UmbilicTrack {
            time: t,
            angles: umbilic_angles(&reduced.at_time(t)),
        })
        .collect();
    Ok(EventReport { events, tracks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::coeffs::AstigmatismCoefficients;
    use crate::flow::params::FlowParams;
    use crate::flow::solution::InitialSupport;
    use crate::scalar::rat;

    fn q(v: i64) -> Rational {
        rat(v, 1)
    }

    fn solution(n: usize, a: [i64; 2], b: [i64; 2], c0: i64) -> FlowSolution {
        let c = AstigmatismCoefficients::from_trig(n, &[q(a[0]), q(a[1])], &[q(b[0]), q(b[1])]);
        let support = InitialSupport::Offsets { c0: q(c0), c1: q(0) };
        FlowSolution::new(FlowParams::new(n, q(10)).unwrap(), &c, support).unwrap()
    }

    #[test]
    fn round_flow_is_quiet() {
        let sol = solution(0, [0, 0], [0, 0], 2);
        let rep = convexity_and_umbilic_events(&sol, 0.0, 5.0).unwrap();
        assert!(rep.events.is_empty());
        assert!(rep.tracks.iter().all(|t| t.angles.is_empty()));
    }

    #[test]
    fn umbilic_reaches_south_pole() {
        let sol = solution(0, [1, 2], [5, 3], 1);
        let south = pole_astigmatism(&sol, Pole::South).unwrap();
        let printed = |t: f64| 7.0 / 3.0 - 4.0 / 3.0 * (-3.0 * t).exp() - 31.0 / 5.0 * (-t).exp() + 1.2 * (-6.0 * t).exp();
        for &t in &[0.0, 0.3, 2.0] {
            assert!((south.eval(t) - printed(t)).abs() < 1e-12);
        }
        let rep = convexity_and_umbilic_events(&sol, 0.0, 4.0).unwrap();
        let pops: Vec<_> = rep
            .events
            .iter()
            .filter_map(|e| match e {
                Event::UmbilicPop { time, pole, circles_before, circles_after } => {
                    Some((*time, *pole, *circles_before, *circles_after))
                }
                _ => None,
            })
            .collect();
        assert_eq!(pops.len(), 1);
        let (t, pole, before, after) = pops[0];
        assert_eq!((pole, before, after), (Pole::South, 1, 0));
        assert!(printed(t).abs() < 1e-9);
    }

    #[test]
    fn growing_flow_loses_convexity() {
        let sol = solution(1, [2, 1], [5, -1], 1);
        let rep = convexity_and_umbilic_events(&sol, 0.0, 10.0).unwrap();
        let hit = rep.events.iter().find(|e| matches!(e, Event::FocalCrossing { .. }));
        let Some(Event::FocalCrossing { time, losing, radius, .. }) = hit else { panic!("no focal crossing") };
        assert!(*losing && *time > 0.0);
        assert!(min_radius(&sol, *time, *radius).0.abs() < 1e-6);
    }
}
