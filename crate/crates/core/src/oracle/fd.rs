//! Crank–Nicolson integration of the astigmatism equation
//! `∂t s = (λ−1)/2 s'' − (λ+1)/2 cotθ s' + (1+cos²θ)/sin²θ s` with `s(0) = s(π) = 0`.
//!
//! Near a pole both `θ²` and `θ^{2/(λ−1)}` solve the equation, so a plain
//! central stencil on `s` carries spurious `O(1/h²)` growth in the first rows.
//! The stencil is therefore built on `s/sin²θ`, which is smooth and even at the poles.

use super::grid::{solve_tridiagonal, Grid};
use super::OracleError;
use crate::flow::rates::mode_rates;
use crate::flow::solution::FlowSolution;
use crate::scalar::Scalar;

/// Allowed sup-norm growth is this factor times `e^{rate·t}`.
pub const GUARD_FACTOR: f64 = 10.0;

/// Rate used by the stability guard: `λ − 1`, raised to the fastest finite-mode
/// rate when `λ = 1 + 1/(n+1)` for an integer `n`.
pub fn guard_rate(lambda: f64) -> f64 {
    let base = lambda - 1.0;
    let n = 1.0 / base - 1.0;
    if n >= 0.0 && (n - n.round()).abs() < 1e-9 && n < 1e4 {
        if let Some(top) = mode_rates(n.round() as usize).max_growth() {
            return base.max(top.as_f64());
        }
    }
    base
}

/// Evolves node values of `s` (poles included, held at 0) to `t_end`.
///
/// The step is shortened so that a whole number of steps lands on `t_end`.
pub fn fd_evolve_s(grid: &Grid, initial: &[f64], lambda: f64, t_end: f64) -> Result<Vec<f64>, OracleError> {
    if !(lambda > 1.0) {
        return Err(OracleError::NotParabolic(lambda));
    }
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(OracleError::BadEndTime(t_end));
    }
    let n = grid.intervals();
    if initial.len() != n + 1 {
        return Err(OracleError::LengthMismatch {
            expected: n + 1,
            got: initial.len(),
        });
    }
    let steps = (t_end / grid.dt()).ceil().max(0.0) as usize;
    let mut s = initial.to_vec();
    s[0] = 0.0;
    s[n] = 0.0;
    if steps == 0 {
        return Ok(s);
    }
    let dt = t_end / steps as f64;
    let h = grid.spacing();
    let m = n - 1;

    let op = operator_rows(n, h, lambda)?;
    let half = 0.5 * dt;
    // Corner rows of `I − (dt/2) A`; their first entry is the diagonal.
    let system = |row: &[f64]| -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(k, v)| if k == 0 { 1.0 - half * v } else { -half * v })
            .collect()
    };
    let mut lo: Vec<f64> = op.lo.iter().map(|v| -half * v).collect();
    let mut up: Vec<f64> = op.up.iter().map(|v| -half * v).collect();
    let mut di: Vec<f64> = op.di.iter().map(|v| 1.0 - half * v).collect();
    let north = fold_corner(&system(&op.north), &lo, &di, &up, false);
    let south = fold_corner(&system(&op.south), &lo, &di, &up, true);
    (di[0], up[0]) = (north.diag, north.off);
    (di[m - 1], lo[m - 1]) = (south.diag, south.off);

    let start_norm = sup(&s);
    let rate = guard_rate(lambda);
    let mut rhs = vec![0.0; m];
    for step in 1..=steps {
        op.apply(&s[1..n], &mut rhs);
        for j in 0..m {
            rhs[j] = s[j + 1] + half * rhs[j];
        }
        for &(pivot, f) in &north.steps {
            rhs[0] -= f * rhs[pivot];
        }
        for &(pivot, f) in &south.steps {
            rhs[m - 1] -= f * rhs[pivot];
        }
        solve_tridiagonal(&lo, &di, &up, &mut rhs);
        s[1..n].copy_from_slice(&rhs);
        if start_norm > 0.0 {
            let t = step as f64 * dt;
            let growth = sup(&s) / start_norm;
            let bound = GUARD_FACTOR * (rate * t).exp();
            if !(growth <= bound) {
                return Err(OracleError::Unstable { time: t, growth, bound });
            }
        }
    }
    Ok(s)
}

/// A corner row reduced to tridiagonal form, with the row operations that did it.
struct FoldedCorner {
    diag: f64,
    off: f64,
    /// `(pivot row, factor)`: subtract `factor · rhs[pivot]` from the corner's rhs.
    steps: Vec<(usize, f64)>,
}

/// Eliminates the far entries of a corner row with the neighbouring tridiagonal
/// rows, outermost first. `mirrored` selects the south corner, whose row is
/// indexed inward from the last unknown.
fn fold_corner(row: &[f64], lo: &[f64], di: &[f64], up: &[f64], mirrored: bool) -> FoldedCorner {
    let m = di.len();
    let idx = |k: usize| if mirrored { m - 1 - k } else { k };
    let mut row = row.to_vec();
    let mut steps = Vec::new();
    for k in (2..row.len()).rev() {
        let pivot = idx(k - 1);
        // Pivot entries on columns k, k−1 and k−2 (counted from the corner).
        let (outer, centre, inner) = if mirrored {
            (lo[pivot], di[pivot], up[pivot])
        } else {
            (up[pivot], di[pivot], lo[pivot])
        };
        let f = row[k] / outer;
        row[k - 1] -= f * centre;
        row[k - 2] -= f * inner;
        steps.push((pivot, f));
    }
    FoldedCorner {
        diag: row[0],
        off: row[1],
        steps,
    }
}

/// Interior operator: tridiagonal rows plus full rows at the two pole-adjacent nodes.
struct PoleOperator {
    lo: Vec<f64>,
    di: Vec<f64>,
    up: Vec<f64>,
    /// Row 1 on `s_1, s_2, ..`.
    north: Vec<f64>,
    /// Row `N−1` on `s_{N−1}, s_{N−2}, ..`.
    south: Vec<f64>,
}

impl PoleOperator {
    fn apply(&self, s: &[f64], out: &mut [f64]) {
        let m = s.len();
        for j in 1..m - 1 {
            out[j] = self.lo[j] * s[j - 1] + self.di[j] * s[j] + self.up[j] * s[j + 1];
        }
        out[0] = self.north.iter().zip(s).map(|(w, v)| w * v).sum();
        out[m - 1] = self.south.iter().zip(s.iter().rev()).map(|(w, v)| w * v).sum();
    }
}

/// Points used by the even extrapolation to a pole.
///
/// Besides the regular branch, `θ^r` with `r = (4 − 2λ)/(λ − 1)` is a bounded
/// local solution of `M`. The extrapolation must be exact through `θ^r`, or the
/// discrete problem selects the wrong pole condition and loses modes.
pub fn pole_closure_points(lambda: f64) -> usize {
    let r = (4.0 - 2.0 * lambda) / (lambda - 1.0);
    if r < 0.0 {
        2
    } else {
        (0.5 * r + 1e-9).floor() as usize + 2
    }
}

/// Beyond this the extrapolation weights are too large for a stable scheme.
pub const MAX_CLOSURE_POINTS: usize = 5;

/// Weights `w_k` with `S(0) ≈ Σ w_k S(k h)`, exact for even polynomials of degree `< 2K`.
pub fn pole_closure_weights(points: usize) -> Vec<f64> {
    (1..=points)
        .map(|k| {
            let k2 = (k * k) as f64;
            (1..=points)
                .filter(|&j| j != k)
                .map(|j| {
                    let j2 = (j * j) as f64;
                    j2 / (j2 - k2)
                })
                .product()
        })
        .collect()
}

/// Rows of the spatial operator on the interior unknowns `s_1..s_{N−1}`.
///
/// Uses `L s = sin²θ · M(s/sin²θ)` with
/// `M S = (λ−1)/2 S'' + (3λ−5)/2 cotθ S' + (2−λ) S`, central differences for `M`,
/// and an even extrapolation of `S` to each pole.
fn operator_rows(n: usize, h: f64, lambda: f64) -> Result<PoleOperator, OracleError> {
    let points = pole_closure_points(lambda);
    if points > MAX_CLOSURE_POINTS || 2 * points + 4 > n {
        return Err(OracleError::PoleClosure { lambda, points });
    }
    let w = pole_closure_weights(points);
    let m = n - 1;
    let a = 0.5 * (lambda - 1.0);
    let c = 0.5 * (3.0 * lambda - 5.0);
    let sin2: Vec<f64> = (0..=n).map(|i| (i as f64 * h).sin().powi(2)).collect();
    let stencil = |i: usize| {
        let cot = 1.0 / (i as f64 * h).tan();
        (
            a / (h * h) - c * cot / (2.0 * h),
            -2.0 * a / (h * h) + (2.0 - lambda),
            a / (h * h) + c * cot / (2.0 * h),
        )
    };
    let (mut lo, mut di, mut up) = (vec![0.0; m], vec![0.0; m], vec![0.0; m]);
    for j in 1..m - 1 {
        let i = j + 1;
        let (wl, wd, wu) = stencil(i);
        lo[j] = sin2[i] * wl / sin2[i - 1];
        di[j] = wd;
        up[j] = sin2[i] * wu / sin2[i + 1];
    }
    // Pole rows in S: outer·S_pole + diag·S_1 + inner·S_2, with S_pole = Σ w_k S_k.
    let corner = |i: usize, outer: f64, d: f64, inner: f64, node: &dyn Fn(usize) -> usize| {
        let mut row: Vec<f64> = w.iter().map(|wk| outer * wk).collect();
        row[0] += d;
        row[1] += inner;
        row.iter()
            .enumerate()
            .map(|(k, v)| sin2[i] * v / sin2[node(k)])
            .collect::<Vec<f64>>()
    };
    let (wl, wd, wu) = stencil(1);
    let north = corner(1, wl, wd, wu, &|k| k + 1);
    let (wl, wd, wu) = stencil(n - 1);
    let south = corner(n - 1, wu, wd, wl, &|k| n - 1 - k);
    di[0] = north[0];
    up[0] = north[1];
    di[m - 1] = south[0];
    lo[m - 1] = south[1];
    Ok(PoleOperator { lo, di, up, north, south })
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Sup-norm gap at `t_end` between the oracle and the closed-form astigmatism.
pub fn closed_form_discrepancy(sol: &FlowSolution, grid: &Grid, t_end: f64) -> Result<f64, OracleError> {
    let start = sol.s_at(0.0);
    let end = sol.s_at(t_end);
    let lambda = sol.params().lambda_f64();
    let fd = fd_evolve_s(grid, &grid.sample(|t| start.eval(t)), lambda, t_end)?;
    Ok(grid
        .nodes()
        .iter()
        .zip(&fd)
        .map(|(&t, v)| (v - end.eval(t)).abs())
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub intervals: Vec<usize>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `−log error` against `log N`; `None` at the round-off floor.
    pub order: Option<f64>,
    /// `log(sup|s(T)| / sup|s(0)|) / T` on the finest grid.
    pub observed_rate: f64,
}

/// Errors below this fraction of the data's size count as round-off.
pub const ROUND_OFF_FLOOR: f64 = 1e-10;

/// Runs the oracle on each grid with `dt = dt_times_n / N` and compares with `exact` at `t_end`.
pub fn fd_convergence_order(
    initial: impl Fn(f64) -> f64,
    exact: impl Fn(f64) -> f64,
    lambda: f64,
    t_end: f64,
    intervals: &[usize],
    dt_times_n: f64,
) -> Result<ConvergenceReport, OracleError> {
    let mut errors = Vec::with_capacity(intervals.len());
    let mut observed_rate = 0.0;
    let mut scale: f64 = 0.0;
    for &n in intervals {
        let grid = Grid::new(n, dt_times_n / n as f64)?;
        let start = grid.sample(&initial);
        let fd = fd_evolve_s(&grid, &start, lambda, t_end)?;
        let err = grid
            .nodes()
            .iter()
            .zip(&fd)
            .map(|(&t, v)| (v - exact(t)).abs())
            .fold(0.0, f64::max);
        scale = scale.max(sup(&start));
        if t_end > 0.0 && sup(&start) > 0.0 {
            observed_rate = (sup(&fd) / sup(&start)).ln() / t_end;
        }
        errors.push(err);
    }
    let at_floor = errors.iter().all(|&e| e <= ROUND_OFF_FLOOR * scale.max(1.0));
    let order = (!at_floor && intervals.len() >= 2).then(|| {
        let xs: Vec<f64> = intervals.iter().map(|&n| (n as f64).ln()).collect();
        let ys: Vec<f64> = errors.iter().map(|e| -e.ln()).collect();
        let k = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        cov / var
    });
    Ok(ConvergenceReport {
        intervals: intervals.to_vec(),
        errors,
        order,
        observed_rate,
    })
}
