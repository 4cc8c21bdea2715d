#![allow(dead_code)]

use perm_moments::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal_dataset(rng: &mut impl Rng, n: usize) -> Dataset {
    let xs = (0..n)
        .map(|_| rng.sample(rand_distr::StandardNormal))
        .collect();
    let ys = (0..n)
        .map(|_| rng.sample(rand_distr::StandardNormal))
        .collect();
    Dataset::new(xs, ys).unwrap()
}

/// Sum over pairwise-distinct index tuples of prod z[i_j]^exps[j], by direct
/// enumeration.
pub fn distinct_index_sum(z: &[f64], exps: &[u32]) -> f64 {
    fn go(z: &[f64], exps: &[u32], used: &mut Vec<usize>) -> f64 {
        if used.len() == exps.len() {
            return used
                .iter()
                .zip(exps)
                .map(|(&i, &e)| z[i].powi(e as i32))
                .product();
        }
        let mut total = 0.0;
        for i in 0..z.len() {
            if !used.contains(&i) {
                used.push(i);
                total += go(z, exps, used);
                used.pop();
            }
        }
        total
    }
    go(z, exps, &mut Vec::new())
}

/// Mean of r^k over every permutation of the y column, by Heap's algorithm
/// and plain summation. Kept separate from the library's enumerator.
pub fn heap_permutation_moments(d: &Dataset, k_max: usize) -> Vec<f64> {
    let n = d.len();
    let mx = d.xs().iter().sum::<f64>() / n as f64;
    let my = d.ys().iter().sum::<f64>() / n as f64;
    let xh: Vec<f64> = d.xs().iter().map(|x| x - mx).collect();
    let yh: Vec<f64> = d.ys().iter().map(|y| y - my).collect();
    let sxx: f64 = xh.iter().map(|x| x * x).sum();
    let syy: f64 = yh.iter().map(|y| y * y).sum();
    let scale = (sxx * syy).sqrt();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut totals = vec![0.0; k_max + 1];
    let mut count = 0usize;
    let mut record = |perm: &[usize]| {
        let r: f64 = xh.iter().zip(perm).map(|(x, &j)| x * yh[j]).sum::<f64>() / scale;
        for (k, t) in totals.iter_mut().enumerate() {
            *t += r.powi(k as i32);
        }
        count += 1;
    };
    let mut c = vec![0usize; n];
    record(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            record(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    totals.iter().map(|t| t / count as f64).collect()
}
