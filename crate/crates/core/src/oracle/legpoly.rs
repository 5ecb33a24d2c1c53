//! Discrete check that `P^n_l(cos θ)` is an eigenfunction of
//! `(1/(2(n+1))) [∂²θ + cotθ ∂θ + n(n+1) − n²/sin²θ]` with eigenvalue `−ω_l`.

use super::grid::Grid;
use super::OracleError;
use crate::basis::legendre::legendre_assoc;

/// Least-squares eigenvalue of the discretised operator on the interior nodes.
pub fn legpoly_operator_check(n: usize, l: usize, grid: &Grid) -> Result<f64, OracleError> {
    if l < n {
        return Err(OracleError::Degree { n, l });
    }
    let nodes = grid.nodes();
    let f: Vec<f64> = nodes
        .iter()
        .map(|t| legendre_assoc(l, n, t.cos()).map_err(|_| OracleError::Degree { n, l }))
        .collect::<Result<_, _>>()?;
    let h = grid.spacing();
    let nf = n as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 1..nodes.len() - 1 {
        let (sin, cos) = nodes[i].sin_cos();
        let d2 = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        let d1 = (f[i + 1] - f[i - 1]) / (2.0 * h);
        let op = (d2 + cos / sin * d1 + (nf * (nf + 1.0) - nf * nf / (sin * sin)) * f[i]) / (2.0 * (nf + 1.0));
        num += op * f[i];
        den += f[i] * f[i];
    }
    Ok(num / den)
}
