use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{in_pool, CorrelationKernel, OracleConfig, PermutationStats};
use crate::error::{Error, Result};
use crate::stats::Dataset;
use crate::sum::NeumaierSum;

/// Samples per RNG stream. Stream `b` covers samples `b * SAMPLER_BLOCK ..`
/// and is seeded from `(seed, b)`, so output is independent of thread count.
pub const SAMPLER_BLOCK: usize = 4096;

pub(crate) fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

/// Calls `visit` with `samples` uniform random permutations of `0..n`, drawn
/// block by block. Each draw shuffles a fresh identity with Fisher–Yates.
pub(crate) fn for_each_sampled_block<T, F>(
    n: usize,
    samples: usize,
    seed: u64,
    threads: Option<usize>,
    init: impl Fn() -> T + Sync + Send,
    visit: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut T, &[usize]) + Sync + Send,
{
    let blocks = samples.div_ceil(SAMPLER_BLOCK);
    in_pool(threads, || {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = block_rng(seed, b);
                let mut state = init();
                let mut perm: Vec<usize> = (0..n).collect();
                let len = SAMPLER_BLOCK.min(samples - b * SAMPLER_BLOCK);
                for _ in 0..len {
                    for (i, p) in perm.iter_mut().enumerate() {
                        *p = i;
                    }
                    perm.shuffle(&mut rng);
                    visit(&mut state, &perm);
                }
                state
            })
            .collect()
    })
}

/// Means and standard errors of `r^1..r^k_max` over `samples` random
/// permutations of the y column.
pub fn monte_carlo_moments(
    d: &Dataset,
    k_max: usize,
    samples: usize,
    seed: u64,
) -> Result<PermutationStats> {
    monte_carlo_moments_with(d, k_max, samples, seed, &OracleConfig::default())
}

pub fn monte_carlo_moments_with(
    d: &Dataset,
    k_max: usize,
    samples: usize,
    seed: u64,
    config: &OracleConfig,
) -> Result<PermutationStats> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let kernel = CorrelationKernel::new(d)?;
    // Slot j accumulates r^(j+1); slots k_max.. hold the squares for the errors.
    let partials = for_each_sampled_block(
        kernel.n(),
        samples,
        seed,
        config.threads,
        || vec![NeumaierSum::new(); 2 * k_max],
        |acc, perm| {
            let r = kernel.r(perm);
            let mut power = 1.0;
            for j in 0..k_max {
                power *= r;
                acc[j].add(power);
                acc[k_max + j].add(power * power);
            }
        },
    )?;
    let mut totals = vec![NeumaierSum::new(); 2 * k_max];
    for block in &partials {
        for (t, b) in totals.iter_mut().zip(block) {
            t.merge(b);
        }
    }
    let count = samples as f64;
    let moments: Vec<f64> = totals[..k_max].iter().map(|t| t.value() / count).collect();
    let std_errors = (0..k_max)
        .map(|j| {
            if samples < 2 {
                return f64::NAN;
            }
            let mean = moments[j];
            let var = (totals[k_max + j].value() - count * mean * mean) / (count - 1.0);
            (var.max(0.0) / count).sqrt()
        })
        .collect();
    Ok(PermutationStats {
        k_max,
        moments,
        std_errors: Some(std_errors),
        count: samples as u64,
        exact: false,
    })
}
