//! Subcommand implementations. Output goes to the supplied writers so tests can capture it.

use super::config::{Formats, InitialSource, RunConfig};
use super::emit::{profile_csv, profile_svg, read_csv, roc_svg, state_csv, svg_polyline, PROFILE_HEADER};
use super::{Cli, CliError, Command, CommonArgs, FormatArg, VerifySuite, EXIT_OK, EXIT_VERIFY};
use crate::basis::coeffs::AstigmatismCoefficients;
use crate::basis::fit::{decompose_samples, gauss_theta_nodes, DEFAULT_FIT_TOLERANCE, DEFAULT_MAX_DEGREE};
use crate::basis::lemmas::{first_expected, first_sum, second_expected, second_sum, sweep_lemmas};
use crate::basis::poly::Pole;
use crate::basis::BasisError;
use crate::basis::quadrature::roundtrip_sweep;
use crate::flow::hopf::hopf_sphere;
use crate::flow::params::FlowParams;
use crate::flow::soliton::Soliton;
use crate::flow::solution::{FlowSolution, InitialSupport};
use crate::geometry::cm::{cm_residual, CM_SAMPLES};
use crate::geometry::events::{convexity_and_umbilic_events, Event, Radius};
use crate::geometry::roc::roc_diagram;
use crate::geometry::fate::{classify_solution, Verdict};
use crate::geometry::state::SphereState;
use crate::geometry::umbilic::{order_and_degeneracy, state_slopes};
use crate::oracle::fd::closed_form_discrepancy;
use crate::oracle::grid::{Grid, DEFAULT_DT, DEFAULT_INTERVALS};
use crate::scalar::{format_rational, rat, Rational, Scalar, ZERO_REL_TOL};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Codazzi–Mainardi residual allowed on emitted states, relative to `max(1, ψ∞)`.
pub const DEFAULT_CM_TOLERANCE: f64 = 1e-8;
/// Sup-norm gap allowed by `verify oracle`.
pub const DEFAULT_ORACLE_TOLERANCE: f64 = 5e-4;
/// Gauss nodes used to sample non-polynomial Hopf spheres before fitting.
const HOPF_FIT_NODES: usize = 128;

type Out<'a> = &'a mut dyn Write;

fn say(out: Out<'_>, line: impl AsRef<str>) -> Result<(), CliError> {
    writeln!(out, "{}", line.as_ref()).map_err(|e| CliError::Io {
        path: PathBuf::from("<output>"),
        message: e.to_string(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

pub fn dispatch(cli: &Cli, out: Out<'_>, err: Out<'_>) -> Result<i32, CliError> {
    let common = &cli.common;
    match &cli.command {
        Command::Evolve => {
            let cfg = load_config(common, "evolve")?;
            evolve(&cfg, common, out, err)
        }
        Command::Classify => classify(&load_config(common, "classify")?, common, out),
        Command::Decompose => decompose(&load_config(common, "decompose")?, common, out),
        Command::Soliton => {
            let cfg = load_config(common, "soliton")?;
            let InitialSource::Soliton { .. } = cfg.initial else {
                return Err(CliError::config("soliton needs initial.soliton.lambda, psi_0 and s_half"));
            };
            evolve(&cfg, common, out, err)
        }
        Command::Render { files } if !files.is_empty() => render_files(files, common, out),
        Command::Render { .. } => {
            let mut cfg = load_config(common, "render")?;
            cfg.formats = Formats::SVG;
            evolve(&cfg, common, out, err)
        }
        Command::Verify { suite } => verify(suite, common, out),
    }
}

/// Loads `--config` and applies `--out` and `--format`.
pub fn load_config(common: &CommonArgs, command: &str) -> Result<RunConfig, CliError> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| CliError::config(format!("{command} needs --config <path>")))?;
    let mut cfg = RunConfig::load(path).map_err(CliError::Config)?;
    if let Some(dir) = &common.out {
        cfg.directory = dir.clone();
    }
    if let Some(f) = common.format {
        cfg.formats = match f {
            FormatArg::Csv => Formats::CSV,
            FormatArg::Svg => Formats::SVG,
            FormatArg::Both => Formats::BOTH,
        };
    }
    Ok(cfg)
}

fn output_samples(common: &CommonArgs) -> Result<usize, CliError> {
    match common.grid {
        Some(n) if n < 2 => Err(CliError::config(format!("--grid must be at least 2, got {n}"))),
        Some(n) => Ok(n + 1),
        None => Ok(DEFAULT_INTERVALS + 1),
    }
}

/// Where the run came from, and how it evolves.
#[allow(clippy::large_enum_variant)]
pub enum Run {
    Modal {
        solution: FlowSolution,
        source: &'static str,
        /// Worst misfit when the coefficients came from a least-squares fit.
        fit_residual: Option<f64>,
    },
    Soliton(Soliton),
}

impl Run {
    pub fn state(&self, t: f64) -> SphereState {
        match self {
            Run::Modal { solution, .. } if t == 0.0 => solution.initial_state(),
            Run::Modal { solution, .. } => solution.state_at(t),
            Run::Soliton(s) => s.state(t),
        }
    }
}

fn initial_data_error(e: impl std::fmt::Display) -> CliError {
    CliError::config(format!("initial data: {e}"))
}

fn fit(samples: &[(f64, f64)], n: usize, tol: f64) -> Result<(AstigmatismCoefficients<Rational>, f64), CliError> {
    let fit = decompose_samples(samples, n, DEFAULT_MAX_DEGREE, tol).map_err(initial_data_error)?;
    Ok((fit.coeffs.to_exact(ZERO_REL_TOL), fit.residual))
}

/// `(θ, s)` from a CSV with `theta` and `s` columns; pole rows are dropped.
pub fn read_samples(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read samples {}: {e}", path.display())))?;
    let (header, cols) = read_csv(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::config(format!("{}: no '{name}' column", path.display())))
    };
    let (ti, si) = (col("theta")?, col("s")?);
    Ok(cols[ti]
        .iter()
        .zip(&cols[si])
        .filter(|(t, _)| **t > 0.0 && **t < std::f64::consts::PI)
        .map(|(t, s)| (*t, *s))
        .collect())
}

/// `fit_tol` bounds the misfit when the initial data has to be fitted.
pub fn build_run(cfg: &RunConfig, fit_tol: f64) -> Result<Run, CliError> {
    let params = FlowParams::new(cfg.n, cfg.psi_inf.clone()).map_err(initial_data_error)?;
    let offsets = InitialSupport::Offsets {
        c0: cfg.c0.clone(),
        c1: cfg.c1.clone(),
    };
    let modal = |coeffs: &AstigmatismCoefficients<Rational>, support: InitialSupport| {
        FlowSolution::new(params.clone(), coeffs, support).map_err(initial_data_error)
    };
    Ok(match &cfg.initial {
        InitialSource::Coefficients { a, b, c } => {
            let trig = AstigmatismCoefficients::from_trig(cfg.n, a, b);
            let mut legendre = trig.legendre_c().to_vec();
            if legendre.len() < c.len() {
                legendre.resize(c.len(), rat(0, 1));
            }
            for (dst, src) in legendre.iter_mut().zip(c) {
                *dst += src;
            }
            let coeffs =
                AstigmatismCoefficients::new(cfg.n, trig.trig_a().to_vec(), trig.trig_b().to_vec(), legendre)
                    .map_err(initial_data_error)?;
            Run::Modal {
                solution: modal(&coeffs, offsets)?,
                source: "coefficients",
                fit_residual: None,
            }
        }
        InitialSource::Samples(path) => {
            let (coeffs, residual) = fit(&read_samples(path)?, cfg.n, fit_tol)?;
            Run::Modal {
                solution: modal(&coeffs, offsets)?,
                source: "samples",
                fit_residual: Some(residual),
            }
        }
        InitialSource::Hopf { mu, c0 } => {
            let hopf = hopf_sphere(*mu, cfg.psi_inf.as_f64(), *c0).map_err(initial_data_error)?;
            match hopf.state.polynomials() {
                Some(p) => {
                    let r = p.r.map(|v| Rational::try_from_f64(*v).expect("finite coefficient"));
                    Run::Modal {
                        solution: FlowSolution::from_support(params, &r).map_err(initial_data_error)?,
                        source: "hopf",
                        fit_residual: None,
                    }
                }
                None => {
                    let samples: Vec<(f64, f64)> = gauss_theta_nodes(HOPF_FIT_NODES)
                        .into_iter()
                        .map(|t| (t, hopf.state.s(t)))
                        .collect();
                    let (coeffs, residual) = fit(&samples, cfg.n, fit_tol)?;
                    // A Hopf sphere has ψ = ψ∞ at the poles.
                    Run::Modal {
                        solution: modal(&coeffs, InitialSupport::default())?,
                        source: "hopf",
                        fit_residual: Some(residual),
                    }
                }
            }
        }
        InitialSource::Soliton { lambda, psi0, s_half } => Run::Soliton(
            Soliton::new(*lambda, cfg.psi_inf.as_f64(), *psi0, *s_half).map_err(initial_data_error)?,
        ),
    })
}

fn pole_name(p: Pole) -> &'static str {
    match p {
        Pole::North => "north",
        Pole::South => "south",
    }
}

fn event_line(e: &Event) -> String {
    match e {
        Event::FocalCrossing { time, theta, radius, losing } => format!(
            "event: focal-crossing t={time} theta={theta} radius={} {}",
            match radius {
                Radius::Parallel => "psi+s",
                Radius::Meridian => "psi-s",
            },
            if *losing { "convexity-lost" } else { "convexity-regained" }
        ),
        Event::UmbilicPop { time, pole, circles_before, circles_after } => format!(
            "event: umbilic-pop t={time} pole={} circles={circles_before}->{circles_after}",
            pole_name(*pole)
        ),
    }
}

fn header_lines(run: &Run) -> Result<Vec<String>, CliError> {
    let mut lines = Vec::new();
    match run {
        Run::Modal { solution, source, fit_residual } => {
            let p = solution.params();
            lines.push(format!("source = {source}"));
            lines.push(format!("n = {}", p.n()));
            lines.push(format!("lambda = {}", format_rational(p.lambda())));
            lines.push(format!("psi_inf = {}", format_rational(p.psi_inf())));
            if let Some(r) = fit_residual {
                lines.push(format!("fit_residual = {r:e}"));
            }
            let u = order_and_degeneracy(solution.initial(), 0.0)?;
            lines.push(format!("order = {}", u.order.map_or("round".into(), |k| k.to_string())));
            lines.push(format!("nondegenerate = {}", u.nondegenerate));
            let fate = classify_solution(solution)?;
            lines.push(format!("verdict = {}", fate.verdict));
            lines.push(match &fate.witness {
                Some(w) => format!("witness = {} rate {}", w.mode, format_rational(&w.rate)),
                None => "witness = none".into(),
            });
        }
        Run::Soliton(s) => {
            lines.push("source = soliton".into());
            lines.push(format!("lambda = {}", s.lambda()));
            lines.push(format!("psi_inf = {}", s.psi_inf()));
            lines.push(format!("psi_0 = {}", s.psi0()));
            lines.push(format!("s_half = {}", s.s_eq()));
            let kind = if s.is_translation() {
                "translation"
            } else if s.relaxation().is_some_and(|e| e.abs() <= 1e-12 * s.psi_inf().abs().max(1.0)) {
                "dilation"
            } else {
                "general"
            };
            lines.push(format!("orbit = {kind}"));
            lines.push(match s.relaxation() {
                Some(e) => format!("relaxation = {e}"),
                None => "relaxation = resonant".into(),
            });
        }
    }
    Ok(lines)
}

fn evolve(cfg: &RunConfig, common: &CommonArgs, out: Out<'_>, err: Out<'_>) -> Result<i32, CliError> {
    let run = build_run(cfg, DEFAULT_FIT_TOLERANCE)?;
    let samples = output_samples(common)?;
    let cm_limit = common.tol.unwrap_or(DEFAULT_CM_TOLERANCE) * cfg.psi_inf.as_f64().abs().max(1.0);

    let initial = run.state(0.0);
    let min_radius = initial.min_principal_radius(CM_SAMPLES);
    if min_radius <= 0.0 {
        say(err, format!("warning: initial data is not convex (min principal radius {min_radius})"))?;
    }
    std::fs::create_dir_all(&cfg.directory).map_err(|e| CliError::Io {
        path: cfg.directory.clone(),
        message: e.to_string(),
    })?;

    let mut lines = header_lines(&run)?;
    for (i, &t) in cfg.times.iter().enumerate() {
        let state = run.state(t);
        let cm = cm_residual(&state);
        if !(cm <= cm_limit) {
            return Err(CliError::Verification(format!(
                "state at t={t} fails the Codazzi-Mainardi check: residual {cm:e} > {cm_limit:e}"
            )));
        }
        let stem = format!("t{i:03}");
        if cfg.formats.csv {
            write_file(&cfg.directory.join(format!("state_{stem}.csv")), &state_csv(&state, samples))?;
            write_file(&cfg.directory.join(format!("profile_{stem}.csv")), &profile_csv(&state, samples))?;
        }
        if cfg.formats.svg {
            write_file(&cfg.directory.join(format!("roc_{stem}.svg")), &roc_svg(&state, samples))?;
            write_file(&cfg.directory.join(format!("profile_{stem}.svg")), &profile_svg(&state, samples))?;
        }
        let slopes = state_slopes(&state)?;
        lines.push(format!(
            "time {i}: t={t} slope.north={} slope.south={} convex={} crosses_horizon={} cm_residual={cm:e}",
            slopes.north,
            slopes.south,
            state.is_convex(CM_SAMPLES),
            roc_diagram(&state, samples).crosses_horizon()
        ));
    }
    if let (Run::Modal { solution, .. }, Some(&first), Some(&last)) = (&run, cfg.times.first(), cfg.times.last()) {
        if last > first {
            let report = convexity_and_umbilic_events(solution, first, last)?;
            lines.extend(report.events.iter().map(event_line));
        }
    }
    let mut summary = lines.join("\n");
    summary.push('\n');
    write_file(&cfg.directory.join("summary.txt"), &summary)?;
    for l in &lines {
        say(out, l)?;
    }
    Ok(EXIT_OK)
}

fn modal_solution(cfg: &RunConfig, common: &CommonArgs, command: &str) -> Result<(FlowSolution, Option<f64>), CliError> {
    match build_run(cfg, common.tol.unwrap_or(DEFAULT_FIT_TOLERANCE))? {
        Run::Modal { solution, fit_residual, .. } => Ok((solution, fit_residual)),
        Run::Soliton(_) => Err(CliError::config(format!(
            "{command} needs coefficient, sample or Hopf initial data, not a soliton"
        ))),
    }
}

/// One-line verdict, e.g. `ConvergesHopf, limit ψ + 2s = ψ∞ (...)`.
pub fn verdict_line(solution: &FlowSolution) -> Result<String, CliError> {
    let fate = classify_solution(solution)?;
    let p = solution.params();
    let psi_inf = format_rational(p.psi_inf());
    let rate = fate
        .witness
        .as_ref()
        .map(|w| format!(", rate {} ({})", format_rational(&w.rate), w.mode))
        .unwrap_or_default();
    Ok(match fate.verdict {
        Verdict::ConvergesHopf => {
            let lambda = format_rational(p.lambda());
            let times = if p.lambda().is_integer() { lambda.clone() } else { format!("({lambda})") };
            let amplitude = solution
                .stationary_s()
                .expanded()
                .map(|s| s.coeff(0))
                .unwrap_or_else(|| rat(0, 1));
            format!(
                "ConvergesHopf, limit ψ + {times}s = ψ∞ (ψ∞ = {psi_inf}, mu = {lambda}, C0 = {}){rate}",
                format_rational(&amplitude)
            )
        }
        Verdict::ConvergesRound => format!("ConvergesRound, radius ψ∞ = {psi_inf}{rate}"),
        Verdict::Diverges => {
            let w = fate.witness.expect("divergence has a witness");
            format!("Diverges, rate {} ({})", format_rational(&w.rate), w.mode)
        }
    })
}

fn classify(cfg: &RunConfig, common: &CommonArgs, out: Out<'_>) -> Result<i32, CliError> {
    let (solution, _) = modal_solution(cfg, common, "classify")?;
    say(out, verdict_line(&solution)?)?;
    Ok(EXIT_OK)
}

fn list(values: &[Rational], exact: bool) -> String {
    let parts: Vec<String> = values
        .iter()
        .map(|v| if exact { format_rational(v) } else { v.as_f64().to_string() })
        .collect();
    parts.join(", ")
}

fn decompose(cfg: &RunConfig, common: &CommonArgs, out: Out<'_>) -> Result<i32, CliError> {
    let (solution, fit_residual) = modal_solution(cfg, common, "decompose")?;
    let c = solution.initial();
    let exact = fit_residual.is_none();
    say(out, format!("n = {}", c.n()))?;
    say(out, format!("a = {}", list(c.trig_a(), exact)))?;
    say(out, format!("b = {}", list(c.trig_b(), exact)))?;
    say(out, format!("c = {}", list(c.legendre_c(), exact)))?;
    if let Some(r) = fit_residual {
        say(out, format!("fit_residual = {r:e}"))?;
    }
    let u = order_and_degeneracy(c, 0.0)?;
    say(out, format!("order = {}", u.order.map_or("round".into(), |k| k.to_string())))?;
    say(out, format!("nondegenerate = {}", u.nondegenerate))?;
    say(out, format!("slope.north = {}", u.slopes.north))?;
    say(out, format!("slope.south = {}", u.slopes.south))?;
    Ok(EXIT_OK)
}

fn render_files(files: &[PathBuf], common: &CommonArgs, out: Out<'_>) -> Result<i32, CliError> {
    for path in files {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.clone(),
            message: e.to_string(),
        })?;
        let (header, cols) = read_csv(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let pick = |a: &str, b: &str| -> Option<Vec<(f64, f64)>> {
            let i = header.iter().position(|h| h == a)?;
            let j = header.iter().position(|h| h == b)?;
            Some(cols[i].iter().copied().zip(cols[j].iter().copied()).collect())
        };
        let svg = if header.join(",") == PROFILE_HEADER {
            svg_polyline(&pick("x1", "x2").expect("header checked"), false, "x1", "x2")
        } else if let Some(points) = pick("psi", "s") {
            svg_polyline(&points, true, "psi", "s")
        } else {
            return Err(CliError::config(format!(
                "{}: expected columns x1,x2 or psi,s",
                path.display()
            )));
        };
        let stem = path.file_stem().map(|s| s.to_os_string()).unwrap_or_else(|| "render".into());
        let dir = common
            .out
            .clone()
            .unwrap_or_else(|| path.parent().map(Path::to_path_buf).unwrap_or_default());
        std::fs::create_dir_all(&dir).map_err(|e| CliError::Io {
            path: dir.clone(),
            message: e.to_string(),
        })?;
        let target = dir.join(stem).with_extension("svg");
        write_file(&target, &svg)?;
        say(out, format!("wrote {}", target.display()))?;
    }
    Ok(EXIT_OK)
}

/// Initial data of the named oracle examples: `(a, b, c0)` with `ψ∞ = 10`.
pub fn oracle_example(name: &str) -> Option<([i64; 2], [i64; 2], i64)> {
    match name {
        "two-mode" => Some(([1, 2], [1, 3], 0)),
        "pop" => Some(([1, 2], [5, 3], 1)),
        _ => None,
    }
}

fn verify(suite: &VerifySuite, common: &CommonArgs, out: Out<'_>) -> Result<i32, CliError> {
    match suite {
        VerifySuite::Lemmas { max } => {
            let sweep = sweep_lemmas(*max);
            for &(which, l, m) in &sweep.failures {
                let (got, want) = if which == 1 {
                    (first_sum(l, m), first_expected(l, m))
                } else {
                    (second_sum(l, m), second_expected(l, m))
                };
                let show = |r: Result<Rational, BasisError>| r.map(|q| format_rational(&q)).unwrap_or_else(|e| e.to_string());
                say(out, format!("FAIL identity {which} at l={l}, m={m}: observed {}, expected {}", show(got), show(want)))?;
            }
            say(
                out,
                format!(
                    "lemmas: {} identities checked for 0 <= l, m <= {max}, {} out-of-domain pairs rejected, {} failures",
                    sweep.verified,
                    sweep.rejected,
                    sweep.failures.len()
                ),
            )?;
            Ok(if sweep.passed() { EXIT_OK } else { EXIT_VERIFY })
        }
        VerifySuite::Oracle { n, example } => {
            let (a, b, c0) = oracle_example(example).ok_or_else(|| {
                CliError::config(format!("unknown oracle example '{example}' (expected two-mode or pop)"))
            })?;
            let q = |v: &i64| rat(*v, 1);
            let coeffs = AstigmatismCoefficients::from_trig(*n, &a.iter().map(q).collect::<Vec<_>>(), &b.iter().map(q).collect::<Vec<_>>());
            let params = FlowParams::new(*n, rat(10, 1))?;
            let support = InitialSupport::Offsets { c0: rat(c0, 1), c1: rat(0, 1) };
            let solution = FlowSolution::new(params, &coeffs, support)?;
            let intervals = common.grid.unwrap_or(DEFAULT_INTERVALS);
            let dt = common.dt.unwrap_or(DEFAULT_DT);
            let tol = common.tol.unwrap_or(DEFAULT_ORACLE_TOLERANCE);
            let grid = Grid::new(intervals, dt).map_err(|e| CliError::config(e.to_string()))?;
            let gap = closed_form_discrepancy(&solution, &grid, 1.0)?;
            let pass = gap < tol;
            say(
                out,
                format!(
                    "{} oracle n={n} example={example}: sup-norm gap {gap:e} at T=1 (N={intervals}, dt={dt}), expected < {tol:e}",
                    if pass { "PASS" } else { "FAIL" }
                ),
            )?;
            Ok(if pass { EXIT_OK } else { EXIT_VERIFY })
        }
        VerifySuite::Roundtrip => {
            let sweep = roundtrip_sweep(8, 3, 10);
            for mode in &sweep.failures {
                say(out, format!("FAIL roundtrip {mode:?}: s -> r -> s not exact or Codazzi-Mainardi defect nonzero"))?;
            }
            say(out, format!("roundtrip: {} modes checked exactly, {} failures", sweep.checked, sweep.failures.len()))?;
            Ok(if sweep.failures.is_empty() { EXIT_OK } else { EXIT_VERIFY })
        }
    }
}
