//! Run configuration: a flat `key = value` text file with dotted section keys.
//!
//! ```text
//! # comment
//! flow.n = 0
//! flow.psi_inf = 10
//! initial.coefficients.a = 1, 2
//! initial.coefficients.b = 1, 3
//! initial.c0 = 1
//! times = 0, 0.5, 1, 2
//! output.directory = out
//! output.formats = csv, svg
//! ```
//!
//! Parsing collects every fault instead of stopping at the first one.

use crate::scalar::{parse_rational, Rational, Scalar};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub svg: bool,
}

impl Formats {
    pub const CSV: Formats = Formats { csv: true, svg: false };
    pub const SVG: Formats = Formats { csv: false, svg: true };
    pub const BOTH: Formats = Formats { csv: true, svg: true };
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialSource {
    /// Full trig series `Σ (a_l + b_l cosθ) sin^{2l+2}θ` plus Legendre coefficients
    /// `c_l` of `sin^{2+n}θ P^n_l`, listed from `l = n`.
    Coefficients {
        a: Vec<Rational>,
        b: Vec<Rational>,
        c: Vec<Rational>,
    },
    /// File of `(θ, s)` samples.
    Samples(PathBuf),
    Hopf { mu: f64, c0: f64 },
    Soliton { lambda: f64, psi0: f64, s_half: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub psi_inf: Rational,
    pub initial: InitialSource,
    /// `ψ(north pole, 0) − ψ∞`.
    pub c0: Rational,
    /// Axial translation.
    pub c1: Rational,
    pub times: Vec<f64>,
    pub directory: PathBuf,
    pub formats: Formats,
}

const KEYS: &[&str] = &[
    "flow.n",
    "flow.psi_inf",
    "initial.coefficients.a",
    "initial.coefficients.b",
    "initial.coefficients.c",
    "initial.samples",
    "initial.hopf.mu",
    "initial.hopf.C0",
    "initial.soliton.lambda",
    "initial.soliton.psi_0",
    "initial.soliton.s_half",
    "initial.c0",
    "initial.c1",
    "times",
    "output.directory",
    "output.formats",
];

/// Splits a list value on commas and whitespace.
fn items(value: &str) -> impl Iterator<Item = &str> {
    value.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty())
}

pub fn parse_formats(value: &str) -> Result<Formats, String> {
    let mut f = Formats::default();
    for item in items(value) {
        match item {
            "csv" => f.csv = true,
            "svg" => f.svg = true,
            "both" => f = Formats::BOTH,
            other => return Err(format!("unknown output format '{other}' (expected csv or svg)")),
        }
    }
    if f == Formats::default() {
        return Err("no output format given".into());
    }
    Ok(f)
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
    faults: Vec<String>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn rational(&mut self, key: &str) -> Option<Rational> {
        let (line, v) = self.take(key)?;
        let parsed = parse_rational(&v);
        if parsed.is_none() {
            self.faults.push(format!("line {line}: {key}: '{v}' is not a number"));
        }
        parsed
    }

    fn real(&mut self, key: &str) -> Option<f64> {
        self.rational(key).map(|q| q.as_f64())
    }

    fn rational_list(&mut self, key: &str) -> Option<Vec<Rational>> {
        let (line, v) = self.take(key)?;
        let mut out = Vec::new();
        for item in items(&v) {
            match parse_rational(item) {
                Some(q) => out.push(q),
                None => {
                    self.faults.push(format!("line {line}: {key}: '{item}' is not a number"));
                    return None;
                }
            }
        }
        Some(out)
    }

    fn require<T>(&mut self, key: &str, value: Option<T>, present: bool) -> Option<T> {
        if value.is_none() && !present {
            self.faults.push(format!("missing required key {key}"));
        }
        value
    }
}

impl RunConfig {
    /// Parses config text. Relative sample paths are taken relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<RunConfig, Vec<String>> {
        let mut e = Entries {
            map: BTreeMap::new(),
            faults: Vec::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                e.faults.push(format!("line {line}: expected 'key = value'"));
                continue;
            };
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                e.faults.push(format!("line {line}: unknown key '{key}'"));
            } else if let Some((first, _)) = e.map.get(key) {
                e.faults.push(format!("line {line}: duplicate key '{key}' (first set on line {first})"));
            } else {
                e.map.insert(key.to_string(), (line, value.to_string()));
            }
        }

        let has = |e: &Entries, k: &str| e.map.contains_key(k);
        let n_present = has(&e, "flow.n");
        let n = e.take("flow.n").and_then(|(line, v)| match v.parse::<usize>() {
            Ok(n) => Some(n),
            Err(_) => {
                e.faults.push(format!("line {line}: flow.n: '{v}' is not a non-negative integer"));
                None
            }
        });
        let n = e.require("flow.n", n, n_present);
        let psi_present = has(&e, "flow.psi_inf");
        let psi_inf = e.rational("flow.psi_inf");
        let psi_inf = e.require("flow.psi_inf", psi_inf, psi_present);
        if let Some(p) = &psi_inf {
            if !(p > &Rational::zero()) {
                e.faults.push(format!("flow.psi_inf must be positive, got {}", p.as_f64()));
            }
        }

        let groups = [
            ("coefficients", has(&e, "initial.coefficients.a") || has(&e, "initial.coefficients.b") || has(&e, "initial.coefficients.c")),
            ("samples", has(&e, "initial.samples")),
            ("hopf", has(&e, "initial.hopf.mu") || has(&e, "initial.hopf.C0")),
            ("soliton", has(&e, "initial.soliton.lambda") || has(&e, "initial.soliton.psi_0") || has(&e, "initial.soliton.s_half")),
        ];
        let chosen: Vec<&str> = groups.iter().filter(|g| g.1).map(|g| g.0).collect();
        let initial = match chosen.as_slice() {
            [] => {
                e.faults.push("no initial data: set one of initial.coefficients, initial.samples, initial.hopf or initial.soliton".into());
                None
            }
            ["coefficients"] => {
                let a = e.rational_list("initial.coefficients.a");
                let b = e.rational_list("initial.coefficients.b");
                let c = e.rational_list("initial.coefficients.c");
                Some(InitialSource::Coefficients {
                    a: a.unwrap_or_default(),
                    b: b.unwrap_or_default(),
                    c: c.unwrap_or_default(),
                })
            }
            ["samples"] => e.take("initial.samples").map(|(_, v)| InitialSource::Samples(base.join(v))),
            ["hopf"] => {
                let (pm, pc) = (has(&e, "initial.hopf.mu"), has(&e, "initial.hopf.C0"));
                let mu = e.real("initial.hopf.mu");
                let mu = e.require("initial.hopf.mu", mu, pm);
                let c0 = e.real("initial.hopf.C0");
                let c0 = e.require("initial.hopf.C0", c0, pc);
                match (mu, c0) {
                    (Some(mu), Some(c0)) => {
                        if mu <= 1.0 {
                            e.faults.push(format!("initial.hopf.mu must exceed 1, got {mu}"));
                        }
                        Some(InitialSource::Hopf { mu, c0 })
                    }
                    _ => None,
                }
            }
            ["soliton"] => {
                let keys = ["initial.soliton.lambda", "initial.soliton.psi_0", "initial.soliton.s_half"];
                let present: Vec<bool> = keys.iter().map(|k| has(&e, k)).collect();
                let vals: Vec<Option<f64>> = keys
                    .iter()
                    .zip(&present)
                    .map(|(k, &p)| {
                        let v = e.real(k);
                        e.require(k, v, p)
                    })
                    .collect();
                match vals.as_slice() {
                    [Some(lambda), Some(psi0), Some(s_half)] => {
                        if *lambda <= 1.0 {
                            e.faults.push(format!("initial.soliton.lambda must exceed 1, got {lambda}"));
                        }
                        Some(InitialSource::Soliton {
                            lambda: *lambda,
                            psi0: *psi0,
                            s_half: *s_half,
                        })
                    }
                    _ => None,
                }
            }
            many => {
                e.faults.push(format!("exactly one initial data source allowed, found: {}", many.join(", ")));
                None
            }
        };
        let c0 = e.rational("initial.c0").unwrap_or_else(Rational::zero);
        let c1 = e.rational("initial.c1").unwrap_or_else(Rational::zero);

        let times = match e.take("times") {
            None => {
                e.faults.push("missing required key times".into());
                None
            }
            Some((line, v)) => {
                let parsed: Result<Vec<f64>, String> = items(&v)
                    .map(|t| {
                        parse_rational(t)
                            .map(|q| q.as_f64())
                            .ok_or_else(|| format!("line {line}: times: '{t}' is not a number"))
                    })
                    .collect();
                match parsed {
                    Err(msg) => {
                        e.faults.push(msg);
                        None
                    }
                    Ok(ts) if ts.is_empty() => {
                        e.faults.push(format!("line {line}: times: list is empty"));
                        None
                    }
                    Ok(ts) => {
                        if ts.iter().any(|&t| t < 0.0) {
                            e.faults.push(format!("line {line}: times: negative time"));
                        }
                        if ts.windows(2).any(|w| w[1] < w[0]) {
                            e.faults.push(format!("line {line}: times: not sorted"));
                        }
                        Some(ts)
                    }
                }
            }
        };

        let directory = e
            .take("output.directory")
            .map(|(_, v)| base.join(v))
            .unwrap_or_else(|| base.join("out"));
        let formats = match e.take("output.formats") {
            None => Formats::CSV,
            Some((line, v)) => parse_formats(&v).unwrap_or_else(|msg| {
                e.faults.push(format!("line {line}: output.formats: {msg}"));
                Formats::CSV
            }),
        };
        // Keys of a source other than the chosen one were reported above.
        if !e.faults.is_empty() {
            return Err(e.faults);
        }
        Ok(RunConfig {
            n: n.expect("checked"),
            psi_inf: psi_inf.expect("checked"),
            initial: initial.expect("checked"),
            c0,
            c1,
            times: times.expect("checked"),
            directory,
            formats,
        })
    }

    pub fn load(path: &Path) -> Result<RunConfig, Vec<String>> {
        let text = std::fs::read_to_string(path).map_err(|e| vec![format!("cannot read config {}: {e}", path.display())])?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn parse(text: &str) -> Result<RunConfig, Vec<String>> {
        RunConfig::parse(text, Path::new("/base"))
    }

    #[test]
    fn full_config() {
        let cfg = parse(
            "# two modes\nflow.n = 0\nflow.psi_inf = 10\ninitial.coefficients.a = 1, 2\n\
             initial.coefficients.b = 1 3\ninitial.c0 = 1/2\ntimes = 0, 0.5, 1\n\
             output.directory = runs\noutput.formats = csv, svg\n",
        )
        .unwrap();
        assert_eq!(cfg.n, 0);
        assert_eq!(cfg.psi_inf, rat(10, 1));
        assert_eq!(
            cfg.initial,
            InitialSource::Coefficients {
                a: vec![rat(1, 1), rat(2, 1)],
                b: vec![rat(1, 1), rat(3, 1)],
                c: vec![]
            }
        );
        assert_eq!(cfg.c0, rat(1, 2));
        assert_eq!(cfg.times, vec![0.0, 0.5, 1.0]);
        assert_eq!(cfg.directory, PathBuf::from("/base/runs"));
        assert_eq!(cfg.formats, Formats::BOTH);
    }

    #[test]
    fn faults_are_collected() {
        let faults = parse("flow.n = -1\nbogus = 3\ntimes =\ninitial.hopf.mu = 2\ninitial.samples = x.csv\nnot a pair\n").unwrap_err();
        assert!(faults.iter().any(|f| f.contains("flow.n")));
        assert!(faults.iter().any(|f| f.contains("unknown key 'bogus'")));
        assert!(faults.iter().any(|f| f.contains("times: list is empty")));
        assert!(faults.iter().any(|f| f.contains("exactly one initial data source")));
        assert!(faults.iter().any(|f| f.contains("expected 'key = value'")));
        assert!(faults.iter().any(|f| f.contains("missing required key flow.psi_inf")));
        assert!(faults.len() >= 6);
    }

    #[test]
    fn times_must_be_sorted_and_non_negative() {
        let base = "flow.n = 1\nflow.psi_inf = 10\ninitial.hopf.mu = 2\ninitial.hopf.C0 = 1\n";
        let f = parse(&format!("{base}times = 1, 0.5\n")).unwrap_err();
        assert_eq!(f, vec!["line 5: times: not sorted".to_string()]);
        let f = parse(&format!("{base}times = -1\n")).unwrap_err();
        assert_eq!(f, vec!["line 5: times: negative time".to_string()]);
        assert!(parse(&format!("{base}times = 0 0 2\n")).is_ok());
    }

    #[test]
    fn partial_sources_report_missing_keys() {
        let f = parse("flow.n = 1\nflow.psi_inf = 10\ninitial.soliton.lambda = 4\ntimes = 0\n").unwrap_err();
        assert!(f.contains(&"missing required key initial.soliton.psi_0".to_string()));
        assert!(f.contains(&"missing required key initial.soliton.s_half".to_string()));
    }

    #[test]
    fn formats_parse() {
        assert_eq!(parse_formats("both"), Ok(Formats::BOTH));
        assert_eq!(parse_formats("svg"), Ok(Formats::SVG));
        assert!(parse_formats("png").is_err());
    }
}
