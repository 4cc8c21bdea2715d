use rayon::prelude::*;

use super::perm::{for_each_with_prefix, prefix_chunks};
use super::{factorial_u64, in_pool, CorrelationKernel, OracleConfig, PermutationStats};
use crate::error::{Error, Result};
use crate::stats::Dataset;
use crate::sum::NeumaierSum;

/// Exact means of `r^1..r^k_max` over all `n!` permutations of the y column.
pub fn brute_force_moments(d: &Dataset, k_max: usize) -> Result<PermutationStats> {
    brute_force_moments_with(d, k_max, &OracleConfig::default())
}

/// Like [`brute_force_moments`], with an explicit cap and thread count.
///
/// Chunks are reduced in a fixed order, so the result does not depend on the
/// number of threads.
pub fn brute_force_moments_with(
    d: &Dataset,
    k_max: usize,
    config: &OracleConfig,
) -> Result<PermutationStats> {
    let n = d.len();
    if n > config.n_cap {
        return Err(Error::NTooLarge {
            n,
            cap: config.n_cap,
        });
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let kernel = CorrelationKernel::new(d)?;
    let chunks = prefix_chunks(n);
    let partials: Vec<Vec<NeumaierSum>> = in_pool(config.threads, || {
        chunks
            .par_iter()
            .map(|prefix| {
                let mut acc = vec![NeumaierSum::new(); k_max];
                for_each_with_prefix(kernel.n(), prefix, |perm| {
                    let r = kernel.r(perm);
                    let mut power = 1.0;
                    for a in acc.iter_mut() {
                        power *= r;
                        a.add(power);
                    }
                });
                acc
            })
            .collect()
    })?;
    let mut totals = vec![NeumaierSum::new(); k_max];
    for chunk in &partials {
        for (t, c) in totals.iter_mut().zip(chunk) {
            t.merge(c);
        }
    }
    let count = factorial_u64(n);
    Ok(PermutationStats {
        k_max,
        moments: totals.iter().map(|t| t.value() / count as f64).collect(),
        std_errors: None,
        count,
        exact: true,
    })
}
