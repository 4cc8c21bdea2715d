//! Command-line flags and the resolved run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use perm_moments::oracle::Generator;

use crate::error::CliError;
use crate::input::CsvOptions;

/// Highest order with a hand-checked closed form; going past it needs
/// `--allow-high-order`.
pub const CLOSED_FORM_K_MAX: usize = 5;

#[derive(Debug, Parser)]
#[command(
    name = "perm-moments",
    version,
    about = "Moments of Pearson's r over all permutations of a paired sample"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    /// Moments <r^k>, k = 1..=k-max, of the permutation distribution.
    Moments,
    /// Check the recursion against exhaustive enumeration on random data.
    Validate,
    /// Run every applicable method on one dataset and diff the results.
    Compare,
    /// Two-sided permutation p-value of the observed correlation.
    Pvalue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodSelector {
    /// Closed forms up to k = 5, the recursion above.
    Auto,
    Induction,
    ClosedForm,
    BruteForce,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorKind {
    Normal,
    Uniform,
    StudentT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Float,
    Exact,
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Input CSV; standard input when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Highest moment order.
    #[arg(long, global = true, default_value_t = 5)]
    pub k_max: usize,
    /// Orders above 5 are computed by the recursion only; pass this to allow them.
    #[arg(long, global = true)]
    pub allow_high_order: bool,
    #[arg(long, global = true, value_enum, default_value_t = MethodSelector::Auto)]
    pub method: MethodSelector,
    /// Random permutations drawn by the sampler.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, env = "PERM_MOMENTS_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Single-byte field delimiter.
    #[arg(long, global = true, default_value = ",")]
    pub delimiter: String,
    /// The first row is data, not column names.
    #[arg(long, global = true)]
    pub no_header: bool,
    /// x column: header name or 0-based index.
    #[arg(long, global = true, default_value = "0")]
    pub x_col: String,
    /// y column: header name or 0-based index.
    #[arg(long, global = true, default_value = "1")]
    pub y_col: String,
    /// Agreement tolerance for `compare` (default 1e-12) or the per-cell MSE
    /// bound for `validate` (default 1e-24).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Rational arithmetic end to end (moments only).
    #[arg(long, global = true)]
    pub exact_arith: bool,
    /// Random datasets per sample size (validate).
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
    /// Smallest sample size (validate).
    #[arg(long, global = true, default_value_t = 3)]
    pub n_min: usize,
    /// Largest sample size (validate).
    #[arg(long, global = true, default_value_t = 8)]
    pub n_max: usize,
    /// Distribution of the validation datasets.
    #[arg(long, global = true, value_enum, default_value_t = GeneratorKind::Normal)]
    pub generator: GeneratorKind,
    /// Degrees of freedom for `--generator student-t`.
    #[arg(long, global = true, default_value_t = 3.0)]
    pub dof: f64,
}

/// Everything a command needs, validated.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub k_max: usize,
    pub method: MethodSelector,
    pub samples: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub precision: Precision,
    pub format: OutputFormat,
    pub csv: CsvOptions,
    pub tolerance: Option<f64>,
    pub trials: usize,
    pub n_set: Vec<usize>,
    pub generator: Generator,
}

impl RunConfig {
    pub fn from_opts(opts: &Opts) -> Result<Self, CliError> {
        if opts.k_max == 0 {
            return Err(CliError::Usage("--k-max must be at least 1".into()));
        }
        if opts.k_max > CLOSED_FORM_K_MAX && !opts.allow_high_order {
            return Err(CliError::Usage(format!(
                "--k-max {} is above {CLOSED_FORM_K_MAX}; these orders have no closed-form \
                 cross-check, pass --allow-high-order to compute them anyway",
                opts.k_max
            )));
        }
        if opts.samples == 0 {
            return Err(CliError::Usage("--samples must be at least 1".into()));
        }
        let delimiter = match opts.delimiter.as_bytes() {
            [b] => *b,
            b"\\t" => b'\t',
            _ => {
                return Err(CliError::Usage(format!(
                    "--delimiter must be a single byte, got {:?}",
                    opts.delimiter
                )))
            }
        };
        if let Some(t) = opts.tolerance {
            if !(t >= 0.0) {
                return Err(CliError::Usage("--tolerance must be non-negative".into()));
            }
        }
        if opts.n_min > opts.n_max {
            return Err(CliError::Usage("--n-min exceeds --n-max".into()));
        }
        let generator = match opts.generator {
            GeneratorKind::Normal => Generator::Normal,
            GeneratorKind::Uniform => Generator::Uniform,
            GeneratorKind::StudentT => Generator::StudentT { dof: opts.dof },
        };
        Ok(Self {
            input: opts.input.clone(),
            k_max: opts.k_max,
            method: opts.method,
            samples: opts.samples,
            seed: opts.seed,
            threads: opts.threads.filter(|&t| t > 0),
            precision: if opts.exact_arith {
                Precision::Exact
            } else {
                Precision::Float
            },
            format: opts.format,
            csv: CsvOptions {
                delimiter,
                has_header: !opts.no_header,
                x_col: opts.x_col.clone(),
                y_col: opts.y_col.clone(),
            },
            tolerance: opts.tolerance,
            trials: opts.trials,
            n_set: (opts.n_min..=opts.n_max).collect(),
            generator,
        })
    }
}
