use rayon::prelude::*;
use serde::Serialize;

use super::perm::{for_each_with_prefix, prefix_chunks};
use super::sampler::for_each_sampled_block;
use super::{factorial_u64, in_pool, CorrelationKernel, OracleConfig};
use crate::error::{Error, Result};
use crate::stats::Dataset;

/// Slack when comparing `|r_pi|` against `|r_observed|`, so permutations
/// that tie the observed statistic are not lost to rounding.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Where the null distribution comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum PValueBackend {
    /// All `n!` permutations.
    Exact,
    /// `samples` random permutations.
    Sampled { samples: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PValue {
    pub p: f64,
    pub r_observed: f64,
    pub backend: PValueBackend,
    /// Permutations examined.
    pub count: u64,
    /// How many of them were at least as extreme as the observed `r`.
    pub extreme: u64,
}

/// Two-sided permutation p-value of the sample correlation.
pub fn permutation_pvalue(d: &Dataset, backend: PValueBackend, seed: u64) -> Result<PValue> {
    permutation_pvalue_with(d, backend, seed, &OracleConfig::default())
}

/// Exact: `#{|r_pi| >= |r_obs|} / n!` (the identity is among the `n!`).
/// Sampled: `(1 + #{|r_pi| >= |r_obs|}) / (1 + samples)`.
pub fn permutation_pvalue_with(
    d: &Dataset,
    backend: PValueBackend,
    seed: u64,
    config: &OracleConfig,
) -> Result<PValue> {
    let kernel = CorrelationKernel::new(d)?;
    let n = kernel.n();
    let identity: Vec<usize> = (0..n).collect();
    let r_observed = kernel.r(&identity);
    let threshold = r_observed.abs() - TIE_TOLERANCE;
    let (count, extreme, p) = match backend {
        PValueBackend::Exact => {
            if n > config.n_cap {
                return Err(Error::NTooLarge {
                    n,
                    cap: config.n_cap,
                });
            }
            let chunks = prefix_chunks(n);
            let hits: u64 = in_pool(config.threads, || {
                chunks
                    .par_iter()
                    .map(|prefix| {
                        let mut hits = 0u64;
                        for_each_with_prefix(n, prefix, |perm| {
                            if kernel.r(perm).abs() >= threshold {
                                hits += 1;
                            }
                        });
                        hits
                    })
                    .sum()
            })?;
            let count = factorial_u64(n);
            (count, hits, hits as f64 / count as f64)
        }
        PValueBackend::Sampled { samples } => {
            if samples == 0 {
                return Err(Error::InvalidArgument("samples must be at least 1".into()));
            }
            let blocks = for_each_sampled_block(
                n,
                samples,
                seed,
                config.threads,
                || 0u64,
                |hits, perm| {
                    if kernel.r(perm).abs() >= threshold {
                        *hits += 1;
                    }
                },
            )?;
            let hits: u64 = blocks.iter().sum();
            (
                samples as u64,
                hits,
                (1 + hits) as f64 / (1 + samples) as f64,
            )
        }
    };
    Ok(PValue {
        p,
        r_observed,
        backend,
        count,
        extreme,
    })
}
