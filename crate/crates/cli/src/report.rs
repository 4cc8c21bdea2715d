//! Report payloads and their JSON / CSV renderings.
//!
//! Every JSON report carries `schema_version` and `command`; the schemas
//! live in `schemas/` next to this crate.

use perm_moments::oracle::{Generator, ValidationReport};
use serde::Serialize;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

pub trait Render: Serialize {
    fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
        s.push('\n');
        Ok(s)
    }

    fn to_csv(&self) -> Result<String, CliError>;
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentRow {
    pub k: usize,
    pub value: f64,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    /// Exact rational value, for even orders in exact mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<String>,
}

impl MomentRow {
    pub fn plain(k: usize, value: f64, method: &'static str) -> Self {
        Self {
            k,
            value,
            method,
            std_error: None,
            exact_value: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentsReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub n: usize,
    pub k_max: usize,
    pub method: &'static str,
    pub precision: &'static str,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub elapsed_seconds: f64,
    pub moments: Vec<MomentRow>,
}

impl Render for MomentsReport {
    fn to_csv(&self) -> Result<String, CliError> {
        csv_table(
            &["k", "value", "method", "std_error", "exact_value"],
            self.moments
                .iter()
                .map(|m| {
                    vec![
                        m.k.to_string(),
                        m.value.to_string(),
                        m.method.to_string(),
                        opt(m.std_error),
                        m.exact_value.clone().unwrap_or_default(),
                    ]
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateCell {
    pub n: usize,
    pub k: usize,
    pub mse: f64,
    pub max_abs_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidateReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub trials: usize,
    pub seed: u64,
    pub k_max: usize,
    pub generator: Generator,
    pub bound: f64,
    pub passed: bool,
    pub elapsed_seconds: f64,
    pub cells: Vec<ValidateCell>,
}

impl ValidateReport {
    pub fn new(report: &ValidationReport, bound: f64, elapsed_seconds: f64) -> Self {
        let cells: Vec<ValidateCell> = report
            .cells
            .iter()
            .map(|c| ValidateCell {
                n: c.n,
                k: c.k,
                mse: c.mse,
                max_abs_error: c.max_abs_error,
                pass: c.mse <= bound,
            })
            .collect();
        Self {
            schema_version: SCHEMA_VERSION,
            command: "validate",
            trials: report.trials,
            seed: report.seed,
            k_max: report.k_max,
            generator: report.generator,
            bound,
            passed: cells.iter().all(|c| c.pass),
            elapsed_seconds,
            cells,
        }
    }
}

impl Render for ValidateReport {
    fn to_csv(&self) -> Result<String, CliError> {
        csv_table(
            &["n", "k", "mse", "max_abs_error", "pass"],
            self.cells
                .iter()
                .map(|c| {
                    vec![
                        c.n.to_string(),
                        c.k.to_string(),
                        format!("{:e}", c.mse),
                        format!("{:e}", c.max_abs_error),
                        c.pass.to_string(),
                    ]
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodValue {
    pub method: &'static str,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

impl MethodValue {
    pub fn analytic(method: &'static str, value: f64) -> Self {
        Self {
            method,
            value,
            std_error: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub method: &'static str,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairDiff {
    pub a: &'static str,
    pub b: &'static str,
    pub abs_diff: f64,
    pub limit: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub k: usize,
    pub values: Vec<MethodValue>,
    pub skipped: Vec<Skipped>,
    pub diffs: Vec<PairDiff>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub n: usize,
    pub k_max: usize,
    pub tolerance: f64,
    pub samples: usize,
    pub seed: u64,
    pub agree: bool,
    pub elapsed_seconds: f64,
    pub rows: Vec<CompareRow>,
}

impl Render for CompareReport {
    fn to_csv(&self) -> Result<String, CliError> {
        let methods = ["induction", "closed-form", "brute-force", "monte-carlo"];
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut row = vec![r.k.to_string()];
                for m in methods {
                    row.push(opt(r
                        .values
                        .iter()
                        .find(|v| v.method == m)
                        .map(|v| v.value)));
                }
                row.push(opt(r
                    .values
                    .iter()
                    .find(|v| v.method == "monte-carlo")
                    .and_then(|v| v.std_error)));
                let worst = r.diffs.iter().map(|d| d.abs_diff).fold(0.0, f64::max);
                row.push(format!("{worst:e}"));
                row.push(r.diffs.iter().all(|d| d.ok).to_string());
                row
            })
            .collect();
        csv_table(
            &[
                "k",
                "induction",
                "closed_form",
                "brute_force",
                "monte_carlo",
                "monte_carlo_se",
                "max_abs_diff",
                "agree",
            ],
            rows,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PValueReport {
    pub schema_version: u32,
    pub command: &'static str,
    pub n: usize,
    pub r_observed: f64,
    pub p: f64,
    pub backend: &'static str,
    pub count: u64,
    pub extreme: u64,
    pub seed: u64,
    pub elapsed_seconds: f64,
}

impl Render for PValueReport {
    fn to_csv(&self) -> Result<String, CliError> {
        csv_table(
            &["n", "r_observed", "p", "backend", "count", "extreme"],
            vec![vec![
                self.n.to_string(),
                self.r_observed.to_string(),
                self.p.to_string(),
                self.backend.to_string(),
                self.count.to_string(),
                self.extreme.to_string(),
            ]],
        )
    }
}
