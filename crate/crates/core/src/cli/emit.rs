//! CSV and SVG output. CSV values use the shortest decimal that round-trips.

use crate::geometry::profile::profile_curve;
use crate::geometry::roc::roc_diagram;
use crate::geometry::state::SphereState;
use std::fmt::Write as _;

pub const STATE_HEADER: &str = "theta,psi,s,r";
pub const PROFILE_HEADER: &str = "x1,x2";

/// `theta,psi,s,r` rows; `s` is pinned to 0 at the poles.
pub fn state_csv(state: &SphereState, samples: usize) -> String {
    let roc = roc_diagram(state, samples);
    let mut out = format!("{STATE_HEADER}\n");
    for (&t, &(psi, s)) in roc.theta.iter().zip(&roc.points) {
        writeln!(out, "{t},{psi},{s},{}", state.r(t)).expect("string write");
    }
    out
}

pub fn profile_csv(state: &SphereState, samples: usize) -> String {
    let mut out = format!("{PROFILE_HEADER}\n");
    for (x1, x2) in profile_curve(state, samples) {
        writeln!(out, "{x1},{x2}").expect("string write");
    }
    out
}

/// Reads a CSV with a header row into named columns.
pub fn read_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), String> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or("empty file")?
        .split(',')
        .map(|h| h.trim().to_string())
        .collect();
    let mut columns = vec![Vec::new(); header.len()];
    for (i, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != header.len() {
            return Err(format!("row {}: expected {} fields, got {}", i + 2, header.len(), cells.len()));
        }
        for (col, cell) in columns.iter_mut().zip(cells) {
            col.push(
                cell.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("row {}: '{}' is not a number", i + 2, cell.trim()))?,
            );
        }
    }
    Ok((header, columns))
}

/// One polyline in an auto-fitted viewBox with a 5% margin, y axis pointing up.
/// With `horizon`, the line `y = 0` is drawn across the box as a reference.
pub fn svg_polyline(points: &[(f64, f64)], horizon: bool, x_label: &str, y_label: &str) -> String {
    let finite: Vec<(f64, f64)> = points.iter().copied().filter(|p| p.0.is_finite() && p.1.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = finite.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if finite.is_empty() {
        (x0, x1, y0, y1) = (-1.0, 1.0, -1.0, 1.0);
    }
    if horizon {
        y0 = y0.min(0.0);
        y1 = y1.max(0.0);
    }
    let pad = |lo: f64, hi: f64| {
        let span = if hi > lo { hi - lo } else { lo.abs().max(1.0) };
        (lo - 0.05 * span, hi + 0.05 * span)
    };
    let (x0, x1) = pad(x0, x1);
    let (y0, y1) = pad(y0, y1);
    let (w, h) = (x1 - x0, y1 - y0);
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{x0} {} {w} {h}\" width=\"600\" height=\"600\" preserveAspectRatio=\"xMidYMid meet\">",
        -y1
    )
    .expect("string write");
    writeln!(out, "<title>{y_label} against {x_label}</title>").expect("string write");
    if horizon {
        writeln!(
            out,
            "<line x1=\"{x0}\" y1=\"0\" x2=\"{x1}\" y2=\"0\" stroke=\"#888\" stroke-dasharray=\"4 4\" vector-effect=\"non-scaling-stroke\"/>"
        )
        .expect("string write");
    }
    let pts: Vec<String> = finite.iter().map(|(x, y)| format!("{x},{}", -y)).collect();
    writeln!(
        out,
        "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\" points=\"{}\"/>",
        pts.join(" ")
    )
    .expect("string write");
    out.push_str("</svg>\n");
    out
}

pub fn roc_svg(state: &SphereState, samples: usize) -> String {
    svg_polyline(&roc_diagram(state, samples).points, true, "psi", "s")
}

pub fn profile_svg(state: &SphereState, samples: usize) -> String {
    svg_polyline(&profile_curve(state, samples), false, "x1", "x2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::poly::CosPolynomial;

    fn round(radius: f64) -> SphereState {
        SphereState::from_support(CosPolynomial::constant(radius), 0.0).unwrap()
    }

    #[test]
    fn state_csv_schema() {
        let text = state_csv(&round(2.0), 3);
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], STATE_HEADER);
        assert_eq!(lines[1], "0,2,0,2");
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
        let (head, cols) = read_csv(&text).unwrap();
        assert_eq!(head, ["theta", "psi", "s", "r"]);
        assert_eq!(cols[0][2], std::f64::consts::PI);
    }

    #[test]
    fn profile_of_round_sphere_is_a_circle() {
        let (_, cols) = read_csv(&profile_csv(&round(3.0), 33)).unwrap();
        for (x, y) in cols[0].iter().zip(&cols[1]) {
            assert!((x.hypot(*y) - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn svg_has_margin_and_horizon() {
        let svg = svg_polyline(&[(0.0, 1.0), (10.0, 2.0)], true, "psi", "s");
        assert!(svg.contains("viewBox=\"-0.5 -2.1 11 2.2\""), "{svg}");
        assert!(svg.contains("<line"));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert!(!svg_polyline(&[(0.0, 1.0), (1.0, 2.0)], false, "x1", "x2").contains("<line"));
    }

    #[test]
    fn read_csv_reports_bad_rows() {
        assert!(read_csv("a,b\n1,2\n3\n").unwrap_err().contains("row 3"));
        assert!(read_csv("a,b\n1,x\n").unwrap_err().contains("'x'"));
    }
}
