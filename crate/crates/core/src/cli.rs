//! Command-line front end: scenario files, single cases and the self-check.
//!
//! Everything here produces strings and an exit code instead of printing,
//! so the binary is a thin wrapper and the output is testable byte for byte.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, LinearMap};
use crate::batch;
use crate::error::Error;
use crate::kgit::{exponent_labels, full_report, IcVerdict, WallModel, WallReport};
use crate::selfcheck::run_self_check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "wallcross",
    version,
    about = "K-theoretic spherical pairs and IC criteria for torus wall crossings"
)]
#[command(group(ArgGroup::new("mode").required(true).args(["scenario", "weights", "trials"])))]
pub struct Cli {
    /// Scenario file: a JSON list of {name, weights, window_base}
    #[arg(long, value_name = "PATH")]
    pub scenario: Option<PathBuf>,
    /// Comma-separated weights of a single case, e.g. 1,1,-2
    #[arg(long, value_name = "CSV", allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// Window base k0 for --weights
    #[arg(
        long,
        value_name = "INT",
        allow_hyphen_values = true,
        requires = "weights"
    )]
    pub base: Option<i64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Run the randomised invariant suites with this many random walls
    #[arg(long, value_name = "INT")]
    pub trials: Option<usize>,
    /// Seed for --trials
    #[arg(long, value_name = "INT", requires = "trials")]
    pub seed: Option<u64>,
}

/// What the binary should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn invalid(msg: impl Into<String>) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {}\n", msg.into()),
            code: EXIT_INVALID,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioCase {
    pub name: String,
    pub weights: Vec<i64>,
    #[serde(default)]
    pub window_base: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
enum ScenarioFile {
    List(Vec<ScenarioCase>),
    Wrapped { cases: Vec<ScenarioCase> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub cases: Vec<ScenarioCase>,
}

impl Scenario {
    /// Accepts a bare JSON list of cases or `{"cases": [...]}`. Case names
    /// must be unique.
    pub fn parse(text: &str) -> Result<Self, String> {
        let file: ScenarioFile =
            serde_json::from_str(text).map_err(|e| format!("malformed scenario: {e}"))?;
        let cases = match file {
            ScenarioFile::List(c) | ScenarioFile::Wrapped { cases: c } => c,
        };
        let mut seen = std::collections::HashSet::new();
        for c in &cases {
            if !seen.insert(c.name.as_str()) {
                return Err(format!(
                    "malformed scenario: duplicate case name {:?}",
                    c.name
                ));
            }
        }
        Ok(Self { cases })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOutput {
    pub name: String,
    pub result: Result<WallReport, Error>,
}

pub fn evaluate_case(case: &ScenarioCase) -> CaseOutput {
    let result =
        WallModel::new(case.weights.clone(), case.window_base).and_then(|m| full_report(&m));
    CaseOutput {
        name: case.name.clone(),
        result,
    }
}

/// Evaluates all cases (concurrently when enabled); output is in input order.
pub fn evaluate_scenario(s: &Scenario) -> Vec<CaseOutput> {
    batch::map(&s.cases, evaluate_case)
}

fn verdict_line(label: &str, v: &IcVerdict) -> String {
    if v.saturated {
        format!("{label}: saturated ({} = {})", v.rank, v.bound)
    } else {
        format!("{label}: not saturated ({} < {})", v.rank, v.bound)
    }
}

fn write_matrix(out: &mut String, title: &str, m: &LinearMap) {
    let _ = writeln!(out, "{title}:");
    for line in m.to_string().lines() {
        let _ = writeln!(out, "  {line}");
    }
}

fn render_report(out: &mut String, r: &WallReport) {
    let _ = writeln!(
        out,
        "weights: {:?}  window base: {}",
        r.weights, r.window_base
    );
    let _ = writeln!(out, "eta: {}  codim Z: {}", r.eta, r.codim_z);
    let _ = writeln!(
        out,
        "K(C) basis: {}",
        exponent_labels(&r.bases.c_basis).join(" ")
    );
    let _ = writeln!(
        out,
        "K(X//-) basis: {}",
        exponent_labels(&r.bases.g_minus_basis).join(" ")
    );
    let _ = writeln!(
        out,
        "K(X//+) basis: {}",
        exponent_labels(&r.bases.g_plus_basis).join(" ")
    );
    let m = &r.matrices;
    for (title, map) in [
        ("res-", &m.res_minus),
        ("res+", &m.res_plus),
        ("res-*", &m.res_minus_star),
        ("res+*", &m.res_plus_star),
        ("*res-", &m.star_res_minus),
        ("*res+", &m.star_res_plus),
        ("iota-", &m.iota_minus),
        ("iota+", &m.iota_plus),
        ("*iota-", &m.star_iota_minus),
        ("iota-*", &m.iota_minus_star),
        ("*iota+", &m.star_iota_plus),
        ("iota+*", &m.iota_plus_star),
        ("K(S)", &m.k_s),
        ("K(S*)", &m.k_s_star),
        ("m+ (twist on K(X//+))", &r.m_plus),
    ] {
        write_matrix(out, title, map);
    }
    let _ = writeln!(out, "m' (cotwist on K(D)): {}", format_rational(&r.m_prime));
    let tag = if r.defect == 0 { "IC" } else { "not IC" };
    let _ = writeln!(out, "defect: {} skyscraper factor(s) ({tag})", r.defect);
    let _ = writeln!(out, "{}", verdict_line("IC", &r.ic_primary));
    let _ = writeln!(out, "{}", verdict_line("dual IC", &r.ic_dual));
    let p = &r.parity;
    let _ = writeln!(
        out,
        "parity: codim {} {}, det N_Z trivial: {} -> {}",
        r.codim_z,
        if p.codim_odd { "odd" } else { "even" },
        p.lemma_conditions,
        if p.prediction {
            "predicts saturated"
        } else {
            "no prediction"
        }
    );
}

pub fn render_text(outputs: &[CaseOutput]) -> String {
    let mut out = String::new();
    for (i, c) in outputs.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "== {} ==", c.name);
        match &c.result {
            Ok(r) => render_report(&mut out, r),
            Err(e) => {
                let _ = writeln!(out, "rejected: {} ({})", e, e.kind());
            }
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonError {
    kind: String,
    message: String,
}

#[derive(Serialize, Deserialize)]
struct JsonCase {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<WallReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<JsonError>,
}

pub fn render_json(outputs: &[CaseOutput]) -> String {
    let cases: Vec<JsonCase> = outputs
        .iter()
        .map(|c| match &c.result {
            Ok(r) => JsonCase {
                name: c.name.clone(),
                report: Some(r.clone()),
                error: None,
            },
            Err(e) => JsonCase {
                name: c.name.clone(),
                report: None,
                error: Some(JsonError {
                    kind: e.kind().to_string(),
                    message: e.to_string(),
                }),
            },
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&cases).expect("report serializes");
    s.push('\n');
    s
}

/// Reads back the output of [`render_json`] as `(name, report or error kind)`.
pub fn parse_json_output(
    text: &str,
) -> serde_json::Result<Vec<(String, Result<WallReport, String>)>> {
    let cases: Vec<JsonCase> = serde_json::from_str(text)?;
    Ok(cases
        .into_iter()
        .map(|c| {
            let r = match (c.report, c.error) {
                (Some(r), _) => Ok(r),
                (None, Some(e)) => Err(e.kind),
                (None, None) => Err("missing".to_string()),
            };
            (c.name, r)
        })
        .collect())
}

fn exit_code(outputs: &[CaseOutput]) -> i32 {
    let mut code = EXIT_OK;
    for c in outputs {
        if let Err(e) = &c.result {
            if e.is_internal() {
                return EXIT_INTERNAL;
            }
            code = EXIT_INVALID;
        }
    }
    code
}

fn diagnostics(outputs: &[CaseOutput]) -> String {
    let mut s = String::new();
    for c in outputs {
        if let Err(e) = &c.result {
            let _ = writeln!(s, "case {:?}: {} ({})", c.name, e, e.kind());
        }
    }
    s
}

pub fn run_scenario_text(text: &str, format: Format) -> Outcome {
    let scenario = match Scenario::parse(text) {
        Ok(s) => s,
        Err(msg) => return Outcome::invalid(msg),
    };
    let outputs = evaluate_scenario(&scenario);
    let stdout = match format {
        Format::Text => render_text(&outputs),
        Format::Json => render_json(&outputs),
    };
    Outcome {
        stdout,
        stderr: diagnostics(&outputs),
        code: exit_code(&outputs),
    }
}

pub fn run_scenario(path: &std::path::Path, format: Format) -> Outcome {
    match std::fs::read_to_string(path) {
        Ok(text) => run_scenario_text(&text, format),
        Err(e) => Outcome::invalid(format!("cannot read {}: {e}", path.display())),
    }
}

pub fn parse_weights(csv: &str) -> Result<Vec<i64>, String> {
    csv.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<i64>()
                .map_err(|_| format!("bad weight {s:?} in {csv:?}"))
        })
        .collect()
}

pub fn run_case(weights_csv: &str, base: i64, format: Format) -> Outcome {
    let weights = match parse_weights(weights_csv) {
        Ok(w) => w,
        Err(msg) => return Outcome::invalid(msg),
    };
    let case = ScenarioCase {
        name: format!("weights {weights_csv}"),
        weights,
        window_base: base,
    };
    let outputs = vec![evaluate_case(&case)];
    let stdout = match format {
        Format::Text => render_text(&outputs),
        Format::Json => render_json(&outputs),
    };
    Outcome {
        stdout,
        stderr: diagnostics(&outputs),
        code: exit_code(&outputs),
    }
}

pub fn self_check(trials: usize, seed: u64, format: Format) -> Outcome {
    if trials == 0 {
        return Outcome::invalid("--trials must be at least 1");
    }
    let report = run_self_check(trials, seed);
    let stdout = match format {
        Format::Text => report.render_text(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    };
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    };
    Outcome {
        stdout,
        stderr: String::new(),
        code,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    if let Some(path) = &cli.scenario {
        run_scenario(path, cli.format)
    } else if let Some(w) = &cli.weights {
        run_case(w, cli.base.unwrap_or(0), cli.format)
    } else if let Some(trials) = cli.trials {
        self_check(trials, cli.seed.unwrap_or(0), cli.format)
    } else {
        Outcome::invalid("one of --scenario, --weights or --trials is required")
    }
}
