//! The four subcommands. Each returns its rendered report and exit status.

use std::fs::File;
use std::io::Read;
use std::time::Instant;

use perm_moments::closedform::{moment_closed_form, ClosedFormInputs};
use perm_moments::exact::{brute_force_exact, moments_exact, ExactMoment};
use perm_moments::oracle::{
    brute_force_moments_with, monte_carlo_moments_with, permutation_pvalue_with, run_validation,
    OracleConfig, PValueBackend, PermutationStats, ValidationConfig, DEFAULT_MSE_BOUND,
    DEFAULT_N_CAP,
};
use perm_moments::{center, Dataset, Error as CoreError, InductionConfig, MomentSession};

use crate::config::{CommandKind, MethodSelector, OutputFormat, Precision, RunConfig};
use crate::error::CliError;
use crate::input::read_dataset;
use crate::report::{
    CompareReport, CompareRow, MethodValue, MomentRow, MomentsReport, PValueReport, PairDiff,
    Render, ValidateReport,
};

/// Default agreement tolerance between analytic methods in `compare`.
pub const ANALYTIC_TOLERANCE: f64 = 1e-12;
/// Sampled estimates must land within this many standard errors.
pub const SAMPLED_SIGMAS: f64 = 5.0;

/// A finished command: what to print on stdout and the process status.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub body: String,
    pub status: u8,
    /// Extra lines for stderr.
    pub notes: Vec<String>,
}

pub fn run(command: CommandKind, config: &RunConfig) -> Result<CommandOutput, CliError> {
    if config.precision == Precision::Exact && command != CommandKind::Moments {
        return Err(CliError::Usage(
            "--exact-arith is only supported by the moments command".into(),
        ));
    }
    match command {
        CommandKind::Moments => cmd_moments(config),
        CommandKind::Validate => cmd_validate(config),
        CommandKind::Compare => cmd_compare(config),
        CommandKind::Pvalue => cmd_pvalue(config),
    }
}

fn render<R: Render>(report: &R, format: OutputFormat) -> Result<String, CliError> {
    match format {
        OutputFormat::Json => report.to_json(),
        OutputFormat::Csv => report.to_csv(),
    }
}

pub fn load_dataset(config: &RunConfig) -> Result<Dataset, CliError> {
    match &config.input {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| CliError::Input(format!("cannot open {}: {e}", path.display())))?;
            read_dataset(file, &config.csv)
        }
        None => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf)?;
            read_dataset(buf.as_slice(), &config.csv)
        }
    }
}

fn oracle_config(config: &RunConfig) -> OracleConfig {
    OracleConfig {
        n_cap: DEFAULT_N_CAP,
        threads: config.threads,
    }
}

fn exact_row(m: &ExactMoment, method: &'static str) -> MomentRow {
    MomentRow {
        k: m.k,
        value: m.to_f64(),
        method,
        std_error: None,
        exact_value: m.rational_value().map(|q| q.to_string()),
    }
}

fn stats_rows(stats: &PermutationStats, method: &'static str) -> Vec<MomentRow> {
    (1..=stats.k_max)
        .map(|k| MomentRow {
            k,
            value: stats.moment(k),
            method,
            std_error: stats.std_error(k),
            exact_value: None,
        })
        .collect()
}

pub fn cmd_moments(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let start = Instant::now();
    let d = load_dataset(config)?;
    // Zero variance is reported the same way whatever the method.
    center(&d, true)?;
    let raw = center(&d, false)?;
    let k_max = config.k_max;
    let rows: Vec<MomentRow> = match (config.precision, config.method) {
        (Precision::Exact, MethodSelector::Auto | MethodSelector::Induction) => {
            moments_exact(&d, k_max)?
                .iter()
                .map(|m| exact_row(m, "induction"))
                .collect()
        }
        (Precision::Exact, MethodSelector::BruteForce) => brute_force_exact(&d, k_max)?
            .iter()
            .map(|m| exact_row(m, "brute-force"))
            .collect(),
        (Precision::Exact, other) => {
            return Err(CliError::Usage(format!(
                "--exact-arith supports the induction and brute-force methods, not {other:?}"
            )))
        }
        (Precision::Float, MethodSelector::Auto) => {
            let inputs = ClosedFormInputs::from_centered(&raw)?;
            let mut session = MomentSession::new(&d, k_max, InductionConfig::default())?;
            (1..=k_max)
                .map(|k| -> Result<MomentRow, CliError> {
                    let (value, method) = if k <= 5 {
                        (moment_closed_form(&inputs, k)?, "closed-form")
                    } else {
                        (session.moment(k)?.value, "induction")
                    };
                    Ok(MomentRow::plain(k, value, method))
                })
                .collect::<Result<_, _>>()?
        }
        (Precision::Float, MethodSelector::Induction) => {
            MomentSession::new(&d, k_max, InductionConfig::default())?
                .moments(k_max)?
                .iter()
                .map(|m| MomentRow::plain(m.k, m.value, "induction"))
                .collect()
        }
        (Precision::Float, MethodSelector::ClosedForm) => {
            let inputs = ClosedFormInputs::from_centered(&raw)?;
            (1..=k_max)
                .map(|k| {
                    Ok(MomentRow::plain(
                        k,
                        moment_closed_form(&inputs, k)?,
                        "closed-form",
                    ))
                })
                .collect::<Result<_, CliError>>()?
        }
        (Precision::Float, MethodSelector::BruteForce) => stats_rows(
            &brute_force_moments_with(&d, k_max, &oracle_config(config))?,
            "brute-force",
        ),
        (Precision::Float, MethodSelector::MonteCarlo) => stats_rows(
            &monte_carlo_moments_with(
                &d,
                k_max,
                config.samples,
                config.seed,
                &oracle_config(config),
            )?,
            "monte-carlo",
        ),
    };
    let report = MomentsReport {
        schema_version: crate::report::SCHEMA_VERSION,
        command: "moments",
        n: d.len(),
        k_max,
        method: method_name(config.method),
        precision: match config.precision {
            Precision::Float => "float",
            Precision::Exact => "exact",
        },
        sigma_x: raw.sigma_x,
        sigma_y: raw.sigma_y,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        moments: rows,
    };
    Ok(CommandOutput {
        body: render(&report, config.format)?,
        status: 0,
        notes: Vec::new(),
    })
}

fn method_name(m: MethodSelector) -> &'static str {
    match m {
        MethodSelector::Auto => "auto",
        MethodSelector::Induction => "induction",
        MethodSelector::ClosedForm => "closed-form",
        MethodSelector::BruteForce => "brute-force",
        MethodSelector::MonteCarlo => "monte-carlo",
    }
}

pub fn cmd_validate(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let start = Instant::now();
    let bound = config.tolerance.unwrap_or(DEFAULT_MSE_BOUND);
    let validation = ValidationConfig {
        trials: config.trials,
        n_set: config.n_set.clone(),
        k_max: config.k_max,
        seed: config.seed,
        generator: config.generator,
        threads: config.threads,
    };
    let report = run_validation(&validation)?;
    let failing: Vec<String> = report
        .failing(bound)
        .iter()
        .map(|c| format!("n={} k={}: MSE {:e} exceeds {:e}", c.n, c.k, c.mse, bound))
        .collect();
    let passed = failing.is_empty();
    let out = ValidateReport::new(&report, bound, start.elapsed().as_secs_f64());
    Ok(CommandOutput {
        body: render(&out, config.format)?,
        status: if passed { 0 } else { 1 },
        notes: failing,
    })
}

pub fn cmd_compare(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let start = Instant::now();
    if config.samples < 2 {
        return Err(CliError::Usage(
            "compare needs --samples >= 2 to estimate standard errors".into(),
        ));
    }
    let d = load_dataset(config)?;
    center(&d, true)?;
    let raw = center(&d, false)?;
    let k_max = config.k_max;
    let tol = config.tolerance.unwrap_or(ANALYTIC_TOLERANCE);
    let oracle = oracle_config(config);

    let induction = MomentSession::new(&d, k_max, InductionConfig::default())?.moments(k_max)?;
    let inputs = ClosedFormInputs::from_centered(&raw)?;
    let brute = match brute_force_moments_with(&d, k_max, &oracle) {
        Ok(s) => Some(s),
        Err(CoreError::NTooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let sampled = monte_carlo_moments_with(&d, k_max, config.samples, config.seed, &oracle)?;

    let mut rows = Vec::with_capacity(k_max);
    let mut agree = true;
    for k in 1..=k_max {
        let mut values = vec![MethodValue::analytic("induction", induction[k - 1].value)];
        let mut skipped = Vec::new();
        if k <= 5 {
            values.push(MethodValue::analytic(
                "closed-form",
                moment_closed_form(&inputs, k)?,
            ));
        } else {
            skipped.push(("closed-form", "no closed form above k = 5".to_string()));
        }
        match &brute {
            Some(s) => values.push(MethodValue::analytic("brute-force", s.moment(k))),
            None => skipped.push((
                "brute-force",
                format!(
                    "n = {} exceeds the enumeration cap {DEFAULT_N_CAP}",
                    d.len()
                ),
            )),
        }
        values.push(MethodValue {
            method: "monte-carlo",
            value: sampled.moment(k),
            std_error: sampled.std_error(k),
        });

        let mut diffs = Vec::new();
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                let (a, b) = (&values[i], &values[j]);
                let se = a.std_error.or(b.std_error);
                let limit = match se {
                    Some(se) => SAMPLED_SIGMAS * se,
                    None => tol,
                };
                let abs_diff = (a.value - b.value).abs();
                let ok = abs_diff <= limit;
                agree &= ok;
                diffs.push(PairDiff {
                    a: a.method,
                    b: b.method,
                    abs_diff,
                    limit,
                    ok,
                });
            }
        }
        rows.push(CompareRow {
            k,
            values,
            skipped: skipped
                .into_iter()
                .map(|(m, reason)| crate::report::Skipped { method: m, reason })
                .collect(),
            diffs,
        });
    }
    let notes = rows
        .iter()
        .flat_map(|r| {
            r.diffs.iter().filter(|d| !d.ok).map(move |d| {
                format!(
                    "k={}: {} vs {} differ by {:e} (limit {:e})",
                    r.k, d.a, d.b, d.abs_diff, d.limit
                )
            })
        })
        .collect();
    let report = CompareReport {
        schema_version: crate::report::SCHEMA_VERSION,
        command: "compare",
        n: d.len(),
        k_max,
        tolerance: tol,
        samples: config.samples,
        seed: config.seed,
        agree,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        rows,
    };
    Ok(CommandOutput {
        body: render(&report, config.format)?,
        status: if agree { 0 } else { 1 },
        notes,
    })
}

pub fn cmd_pvalue(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let start = Instant::now();
    let d = load_dataset(config)?;
    let backend = match config.method {
        MethodSelector::BruteForce => PValueBackend::Exact,
        MethodSelector::MonteCarlo => PValueBackend::Sampled {
            samples: config.samples,
        },
        MethodSelector::Auto if d.len() <= DEFAULT_N_CAP => PValueBackend::Exact,
        MethodSelector::Auto => PValueBackend::Sampled {
            samples: config.samples,
        },
        other => {
            return Err(CliError::Usage(format!(
                "pvalue supports --method auto, brute-force or monte-carlo, not {}",
                method_name(other)
            )))
        }
    };
    let p = permutation_pvalue_with(&d, backend, config.seed, &oracle_config(config))?;
    let report = PValueReport {
        schema_version: crate::report::SCHEMA_VERSION,
        command: "pvalue",
        n: d.len(),
        r_observed: p.r_observed,
        p: p.p,
        backend: match p.backend {
            PValueBackend::Exact => "exact",
            PValueBackend::Sampled { .. } => "sampled",
        },
        count: p.count,
        extreme: p.extreme,
        seed: config.seed,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(CommandOutput {
        body: render(&report, config.format)?,
        status: 0,
        notes: Vec::new(),
    })
}
