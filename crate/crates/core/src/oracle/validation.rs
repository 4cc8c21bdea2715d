use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT, Uniform};
use serde::Serialize;

use super::sampler::block_rng;
use super::{brute_force_moments_with, in_pool, OracleConfig};
use crate::error::{Error, Result};
use crate::induction::{InductionConfig, MomentSession};
use crate::stats::Dataset;

/// Per-cell MSE bound used by the validation command unless overridden.
pub const DEFAULT_MSE_BOUND: f64 = 1e-24;

/// Distribution the random validation datasets are drawn from, per coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Generator {
    /// Standard normal.
    Normal,
    /// Uniform on `[0, 1)`.
    Uniform,
    /// Student's t, heavy tailed for small `dof`.
    StudentT { dof: f64 },
}

impl Default for Generator {
    fn default() -> Self {
        Generator::Normal
    }
}

impl Generator {
    fn draw(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            Generator::Normal => StandardNormal.sample(rng),
            Generator::Uniform => Uniform::new(0.0, 1.0).sample(rng),
            Generator::StudentT { dof } => StudentT::new(dof)
                .expect("dof validated before sampling")
                .sample(rng),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Generator::StudentT { dof } if !(dof > 0.0 && dof.is_finite()) => {
                Err(Error::InvalidArgument(format!(
                    "Student-t degrees of freedom must be positive, got {dof}"
                )))
            }
            _ => Ok(()),
        }
    }
}

/// A dataset of `n` rows with both coordinates drawn from `generator`.
pub fn random_dataset(rng: &mut impl Rng, n: usize, generator: Generator) -> Result<Dataset> {
    generator.validate()?;
    let xs = (0..n).map(|_| generator.draw(rng)).collect();
    let ys = (0..n).map(|_| generator.draw(rng)).collect();
    Dataset::new(xs, ys)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationConfig {
    pub trials: usize,
    pub n_set: Vec<usize>,
    pub k_max: usize,
    pub seed: u64,
    pub generator: Generator,
    pub threads: Option<usize>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            n_set: (3..=8).collect(),
            k_max: 5,
            seed: 0,
            generator: Generator::Normal,
            threads: None,
        }
    }
}

/// Error statistics for one `(n, k)` pair across all trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationCell {
    pub n: usize,
    pub k: usize,
    /// Mean squared difference between analytic and enumerated moments.
    pub mse: f64,
    pub max_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub trials: usize,
    pub seed: u64,
    pub k_max: usize,
    pub generator: Generator,
    /// Ordered by `n`, then `k`.
    pub cells: Vec<ValidationCell>,
}

impl ValidationReport {
    pub fn cell(&self, n: usize, k: usize) -> Option<&ValidationCell> {
        self.cells.iter().find(|c| c.n == n && c.k == k)
    }

    /// Cells whose MSE exceeds `bound`.
    pub fn failing(&self, bound: f64) -> Vec<&ValidationCell> {
        self.cells.iter().filter(|c| !(c.mse <= bound)).collect()
    }

    pub fn passes(&self, bound: f64) -> bool {
        self.failing(bound).is_empty()
    }
}

fn trials_for_n(
    config: &ValidationConfig,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<ValidationCell>> {
    let oracle = OracleConfig {
        n_cap: usize::MAX,
        threads: None,
    };
    let orders: Vec<usize> = (2..=config.k_max).collect();
    let mut sq = vec![0.0; orders.len()];
    let mut max_abs = vec![0.0f64; orders.len()];
    for _ in 0..config.trials {
        let d = random_dataset(rng, n, config.generator)?;
        let mut session = MomentSession::new(&d, config.k_max, InductionConfig::default())?;
        let brute = brute_force_moments_with(&d, config.k_max, &oracle)?;
        for (slot, &k) in orders.iter().enumerate() {
            let err = session.moment(k)?.value - brute.moment(k);
            sq[slot] += err * err;
            max_abs[slot] = max_abs[slot].max(err.abs());
        }
    }
    Ok(orders
        .iter()
        .enumerate()
        .map(|(slot, &k)| ValidationCell {
            n,
            k,
            mse: sq[slot] / config.trials as f64,
            max_abs_error: max_abs[slot],
        })
        .collect())
}

/// Compares the recursion against exhaustive enumeration on random datasets.
///
/// Trials for each `n` draw from their own stream of `seed`, so the report is a
/// pure function of the configuration.
pub fn run_validation(config: &ValidationConfig) -> Result<ValidationReport> {
    if config.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if config.k_max < 2 {
        return Err(Error::InvalidArgument("validation needs k_max >= 2".into()));
    }
    config.generator.validate()?;
    if let Some(&n) = config
        .n_set
        .iter()
        .find(|&&n| n > super::DEFAULT_N_CAP || n < 2)
    {
        return Err(if n < 2 {
            Error::TooFewObservations(n)
        } else {
            Error::NTooLarge {
                n,
                cap: super::DEFAULT_N_CAP,
            }
        });
    }
    let mut n_set = config.n_set.clone();
    n_set.sort_unstable();
    n_set.dedup();
    let cells = in_pool(config.threads, || -> Result<Vec<ValidationCell>> {
        let mut cells = Vec::new();
        for &n in &n_set {
            let mut rng = block_rng(config.seed, n);
            cells.extend(trials_for_n(config, n, &mut rng)?);
        }
        Ok(cells)
    })??;
    Ok(ValidationReport {
        trials: config.trials,
        seed: config.seed,
        k_max: config.k_max,
        generator: config.generator,
        cells,
    })
}
