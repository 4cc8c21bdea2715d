//! Ground truth for the analytic paths: exhaustive enumeration of the
//! permutation group, a seeded permutation sampler, permutation p-values and
//! the randomized validation harness.

pub mod perm;

mod brute;
mod pvalue;
mod sampler;
mod validation;

use serde::Serialize;

pub use brute::{brute_force_moments, brute_force_moments_with};
pub use pvalue::{
    permutation_pvalue, permutation_pvalue_with, PValue, PValueBackend, TIE_TOLERANCE,
};
pub use sampler::{monte_carlo_moments, monte_carlo_moments_with, SAMPLER_BLOCK};
pub use validation::{
    random_dataset, run_validation, Generator, ValidationCell, ValidationConfig, ValidationReport,
    DEFAULT_MSE_BOUND,
};

use crate::error::{Error, Result};
use crate::stats::{center, Dataset};

/// Default cap on `n` for exhaustive enumeration (10! = 3,628,800).
pub const DEFAULT_N_CAP: usize = 10;

/// Shared oracle settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest `n` enumerated exhaustively.
    pub n_cap: usize,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_cap: DEFAULT_N_CAP,
            threads: None,
        }
    }
}

/// Empirical moments of `r` over a set of permutations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationStats {
    pub k_max: usize,
    /// `moments[k - 1]` is the mean of `r^k`.
    pub moments: Vec<f64>,
    /// Standard errors of the means; only for sampled stats.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_errors: Option<Vec<f64>>,
    pub count: u64,
    /// True iff all `n!` permutations were enumerated.
    pub exact: bool,
}

impl PermutationStats {
    /// Mean of `r^k`; `k = 0` gives 1.
    pub fn moment(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.moments[k - 1]
        }
    }

    pub fn std_error(&self, k: usize) -> Option<f64> {
        self.std_errors.as_ref().map(|s| s[k - 1])
    }
}

/// Hoisted per-dataset quantities for the permutation inner loop.
#[derive(Debug, Clone)]
pub(crate) struct CorrelationKernel {
    x_hat: Vec<f64>,
    y_hat: Vec<f64>,
    inv_scale: f64,
}

impl CorrelationKernel {
    pub(crate) fn new(d: &Dataset) -> Result<Self> {
        let c = center(d, true)?;
        let sxx: f64 = crate::sum::pairwise_sum_by(c.len(), |i| c.x_hat[i] * c.x_hat[i]);
        let syy: f64 = crate::sum::pairwise_sum_by(c.len(), |i| c.y_hat[i] * c.y_hat[i]);
        Ok(Self {
            inv_scale: 1.0 / (sxx * syy).sqrt(),
            x_hat: c.x_hat,
            y_hat: c.y_hat,
        })
    }

    pub(crate) fn n(&self) -> usize {
        self.x_hat.len()
    }

    /// `r` with the y column permuted: row `i` pairs `x_i` with `y_{perm[i]}`.
    #[inline]
    pub(crate) fn r(&self, perm: &[usize]) -> f64 {
        let mut cross = 0.0;
        for (x, &j) in self.x_hat.iter().zip(perm) {
            cross += x * self.y_hat[j];
        }
        (cross * self.inv_scale).clamp(-1.0, 1.0)
    }
}

pub(crate) fn in_pool<T: Send, F: FnOnce() -> T + Send>(threads: Option<usize>, f: F) -> Result<T> {
    match threads {
        None | Some(0) => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

pub(crate) fn factorial_u64(n: usize) -> u64 {
    (1..=n as u64).product()
}
