use super::OracleError;

/// Uniform grid `θ_i = iπ/N`, `i = 0..=N`, with a time step.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid {
    intervals: usize,
    dt: f64,
}

pub const DEFAULT_INTERVALS: usize = 512;
pub const DEFAULT_DT: f64 = 1e-3;

impl Grid {
    pub fn new(intervals: usize, dt: f64) -> Result<Self, OracleError> {
        if intervals < 16 {
            return Err(OracleError::GridTooSmall(intervals));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(OracleError::BadTimeStep(dt));
        }
        Ok(Grid { intervals, dt })
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn spacing(&self) -> f64 {
        std::f64::consts::PI / self.intervals as f64
    }

    /// All nodes, poles included.
    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.intervals).map(|i| i as f64 * self.spacing()).collect()
    }

    /// `f` at every node, with the pole values forced to zero.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut v: Vec<f64> = self.nodes().into_iter().map(f).collect();
        v[0] = 0.0;
        v[self.intervals] = 0.0;
        v
    }
}

/// Solves a tridiagonal system in place: `lower[i] x[i−1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut denom = diag[0];
    c[0] = upper[0] / denom;
    rhs[0] /= denom;
    for i in 1..n {
        denom = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / denom;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert_eq!(Grid::new(8, 1e-3), Err(OracleError::GridTooSmall(8)));
        assert!(matches!(Grid::new(16, 0.0), Err(OracleError::BadTimeStep(_))));
        let g = Grid::new(16, 0.1).unwrap();
        let s = g.sample(|t| t.cos() + 2.0);
        assert_eq!((s[0], s[16]), (0.0, 0.0));
    }

    #[test]
    fn tridiagonal_solve() {
        let (lo, d, up) = (vec![0.0, 1.0, 1.0], vec![4.0, 4.0, 4.0], vec![1.0, 1.0, 0.0]);
        let x = [1.0, -2.0, 3.0];
        let mut rhs: Vec<f64> = (0..3)
            .map(|i| {
                d[i] * x[i] + if i > 0 { lo[i] * x[i - 1] } else { 0.0 } + if i < 2 { up[i] * x[i + 1] } else { 0.0 }
            })
            .collect();
        solve_tridiagonal(&lo, &d, &up, &mut rhs);
        for i in 0..3 {
            assert!((rhs[i] - x[i]).abs() < 1e-14);
        }
    }
}
