//! Integer partitions of the moment order and their combinatorial weights.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Default cap on the moment order. `p(16) = 231` partitions.
pub const DEFAULT_K_CAP: usize = 16;

/// A partition of `k` into `m` positive parts, stored non-increasing.
///
/// One partition indexes one family of terms in the moment expansion: `m` is
/// the number of distinct indices and the parts are their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Canonicalizes `parts` (sorted non-increasing). Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "partition parts must be positive and non-empty, got {parts:?}"
            )));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub(crate) fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts.
    pub fn m(&self) -> usize {
        self.0.len()
    }

    /// Sum of the parts.
    pub fn k(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    /// Sizes of the runs of equal parts.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let run = self.0[i..].iter().take_while(|&&p| p == self.0[i]).count();
            out.push(run);
            i += run;
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Every partition of `k`, lexicographically descending: `(k)` first,
/// `(1, ..., 1)` last.
pub fn enumerate_partitions(k: usize, cap: usize) -> Result<Vec<Partition>> {
    if k == 0 {
        return Err(Error::InvalidArgument("partitions need k >= 1".into()));
    }
    if k > cap {
        return Err(Error::KTooLarge { k, cap });
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    descend(k as u32, k as u32, &mut current, &mut out);
    Ok(out)
}

fn descend(remaining: u32, max_part: u32, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition::from_sorted(current.clone()));
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        current.push(part);
        descend(remaining - part, part, current, out);
        current.pop();
    }
}

/// Partitions of `k` grouped by their number of parts; index `m - 1` holds
/// those with `m` parts.
pub fn partitions_by_length(k: usize, cap: usize) -> Result<Vec<Vec<Partition>>> {
    let mut groups = vec![Vec::new(); k];
    for p in enumerate_partitions(k, cap)? {
        groups[p.m() - 1].push(p);
    }
    Ok(groups)
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Multinomial `k! / (n_1! ... n_m!)` divided by `d_1! ... d_r!`, where the
/// `d_i` count repeated part sizes.
///
/// This is the number of ways to split `k` labelled items into unlabelled
/// blocks of the given sizes, so the division is always exact.
pub fn star_multinomial(p: &Partition) -> BigUint {
    let numerator = factorial(p.k());
    let denominator = p
        .parts()
        .iter()
        .map(|&n| factorial(n as usize))
        .chain(p.multiplicities().into_iter().map(factorial))
        .fold(BigUint::one(), |acc, f| acc * f);
    debug_assert!((&numerator % &denominator) == BigUint::from(0u32));
    numerator / denominator
}

/// 1 when `n >= m`, else 0: terms needing more distinct indices than there
/// are observations vanish.
pub fn h_indicator(n: usize, m: usize) -> u8 {
    u8::from(n >= m)
}

/// `n (n-1) ... (n-m+1)` in exact arithmetic.
pub fn falling_factorial(n: usize, m: usize) -> BigUint {
    (0..m).fold(BigUint::one(), |acc, i| {
        if i >= n {
            BigUint::from(0u32)
        } else {
            acc * BigUint::from(n - i)
        }
    })
}
