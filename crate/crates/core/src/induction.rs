//! Permutation moments of the sample correlation by the branching recursion.
//!
//! For a partition `(n_1, ..., n_m)` of `k`, the Z-term of one column is
//!
//! ```text
//! Z(n_1..n_m) = sum over pairwise-distinct i_1..i_m of z_{i_1}^{n_1} ... z_{i_m}^{n_m}
//! ```
//!
//! and satisfies
//!
//! ```text
//! Z(n_1..n_m) = S_{n_m} Z(n_1..n_{m-1}) - sum_{j<m} Z(n_1, .., n_j + n_m, .., n_{m-1})
//! Z(k)        = S_k
//! ```
//!
//! with `S_j = sum_i z_i^j`. The subtracted branch folds the peeled exponent
//! into each remaining slot in turn, which is what removes the coincident
//! index from the unrestricted sum. Terms are symmetric in their exponents,
//! so memo keys are the sorted partition and the last (smallest) part is
//! always the one peeled.
//!
//! The k-th moment over all `n!` permutations of the y column is
//!
//! ```text
//! <r^k> = sum over partitions of k of star(p) X(p) Y(p) h(n, m) / (n (n-1) .. (n-m+1))
//!         / (Sxx Syy)^(k/2)
//! ```

use std::collections::HashMap;
use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};
use serde::Serialize;

use crate::error::{Column, Error, Result};
use crate::partition::{
    enumerate_partitions, h_indicator, star_multinomial, Partition, DEFAULT_K_CAP,
};
use crate::stats::{center, CenteredData, Dataset};
use crate::sum::pairwise_sum_by;

/// Arithmetic the recursion runs in: `f64` for the default path, exact
/// rationals for verification.
pub trait Scalar: Clone + Debug + Num + FromPrimitive {}

impl<T: Clone + Debug + Num + FromPrimitive> Scalar for T {}

/// How a moment value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Induction,
    ClosedForm,
    BruteForce,
    MonteCarlo,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Induction => "induction",
            Method::ClosedForm => "closed-form",
            Method::BruteForce => "brute-force",
            Method::MonteCarlo => "monte-carlo",
        }
    }
}

/// The structural one-step expansion of a Z-term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    /// The exponent peeled off (the last part).
    pub peeled: u32,
    /// The term multiplied by `S_peeled`; `None` for single-part partitions.
    pub product: Option<Partition>,
    /// Subtracted terms with how many slots canonicalize to each, in the
    /// order first encountered.
    pub branches: Vec<(Partition, usize)>,
}

/// One step of the recursion for `p`, without evaluating anything.
pub fn expansion(p: &Partition) -> Expansion {
    let parts = p.parts();
    let m = parts.len();
    let peeled = parts[m - 1];
    if m == 1 {
        return Expansion {
            peeled,
            product: None,
            branches: Vec::new(),
        };
    }
    let head = &parts[..m - 1];
    let mut branches: Vec<(Partition, usize)> = Vec::new();
    for child in branch_keys(head, peeled) {
        match branches.iter_mut().find(|(q, _)| *q == child) {
            Some((_, count)) => *count += 1,
            None => branches.push((child, 1)),
        }
    }
    Expansion {
        peeled,
        product: Some(Partition::from_sorted(head.to_vec())),
        branches,
    }
}

fn branch_keys(head: &[u32], peeled: u32) -> impl Iterator<Item = Partition> + '_ {
    (0..head.len()).map(move |j| {
        let mut merged = head.to_vec();
        merged[j] += peeled;
        merged.sort_unstable_by(|a, b| b.cmp(a));
        Partition::from_sorted(merged)
    })
}

/// Memoized Z-terms for one dataset.
///
/// Holds the power sums `S_0..=S_{k_max}` of both columns. The cache is tied
/// to that data and is not meant to outlive an evaluation session.
#[derive(Debug, Clone)]
pub struct ZTermCache<T> {
    x_sums: Vec<T>,
    y_sums: Vec<T>,
    memo: HashMap<(Column, Partition), T>,
    trace: Vec<(Column, Partition)>,
}

impl<T: Scalar> ZTermCache<T> {
    /// `x_sums[j]` and `y_sums[j]` are `sum_i z_i^j`; both must cover the
    /// same orders.
    pub fn new(x_sums: Vec<T>, y_sums: Vec<T>) -> Self {
        assert_eq!(
            x_sums.len(),
            y_sums.len(),
            "power sums must cover the same orders"
        );
        Self {
            x_sums,
            y_sums,
            memo: HashMap::new(),
            trace: Vec::new(),
        }
    }

    /// Highest order the stored power sums cover.
    pub fn k_max(&self) -> usize {
        self.x_sums.len().saturating_sub(1)
    }

    pub fn power_sum(&self, side: Column, j: usize) -> &T {
        match side {
            Column::X => &self.x_sums[j],
            Column::Y => &self.y_sums[j],
        }
    }

    /// `Z(p)` for one column.
    ///
    /// # Panics
    /// If `p.k()` exceeds [`k_max`](Self::k_max).
    pub fn z_term(&mut self, side: Column, p: &Partition) -> T {
        assert!(
            p.k() <= self.k_max(),
            "power sums do not reach order {}",
            p.k()
        );
        self.eval(side, p)
    }

    fn eval(&mut self, side: Column, p: &Partition) -> T {
        let key = (side, p.clone());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let exp = expansion(p);
        let sum = self.power_sum(side, exp.peeled as usize).clone();
        let value = match exp.product {
            None => sum,
            Some(head) => {
                let mut v = sum * self.eval(side, &head);
                for (branch, count) in exp.branches {
                    let term = self.eval(side, &branch);
                    v = v - T::from_usize(count).expect("small count") * term;
                }
                v
            }
        };
        self.memo.insert(key.clone(), value.clone());
        self.trace.push(key);
        value
    }

    /// Memoized terms in the order their values were first completed.
    pub fn trace(&self) -> &[(Column, Partition)] {
        &self.trace
    }

    pub fn cached(&self, side: Column, p: &Partition) -> Option<&T> {
        self.memo.get(&(side, p.clone()))
    }
}

/// Evaluates the recursion on `parts` exactly as given: no sorting, no memo,
/// peeling whatever comes last. Exists so tests can check that the result
/// does not depend on exponent order.
#[doc(hidden)]
pub fn z_term_uncanonical<T: Scalar>(sums: &[T], parts: &[u32]) -> T {
    let m = parts.len();
    let last = parts[m - 1] as usize;
    if m == 1 {
        return sums[last].clone();
    }
    let head = &parts[..m - 1];
    let mut v = sums[last].clone() * z_term_uncanonical(sums, head);
    for j in 0..head.len() {
        let mut merged = head.to_vec();
        merged[j] += last as u32;
        v = v - z_term_uncanonical(sums, &merged);
    }
    v
}

/// Contribution of one partition to `<r^k>` before the variance normalization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionTerm<T> {
    pub partition: Partition,
    pub star: T,
    pub x_term: T,
    pub y_term: T,
    /// `h(n, m) / (n (n-1) ... (n-m+1))`.
    pub multiplicity_factor: T,
}

impl<T: Scalar> PartitionTerm<T> {
    pub fn contribution(&self) -> T {
        self.star.clone()
            * self.x_term.clone()
            * self.y_term.clone()
            * self.multiplicity_factor.clone()
    }
}

fn reciprocal_falling<T: Scalar>(n: usize, m: usize) -> T {
    if h_indicator(n, m) == 0 {
        return T::zero();
    }
    (0..m).fold(T::one(), |acc, i| {
        acc / T::from_usize(n - i).expect("n fits the scalar type")
    })
}

/// `(1/n!) sum over permutations of (sum_i x_i y_{pi(i)})^k`, partition by
/// partition.
pub fn permutation_cross_moment<T: Scalar>(
    cache: &mut ZTermCache<T>,
    n: usize,
    k: usize,
    cap: usize,
) -> Result<(T, Vec<PartitionTerm<T>>)> {
    if k == 0 {
        return Ok((T::one(), Vec::new()));
    }
    if k > cache.k_max() {
        return Err(Error::KTooLarge {
            k,
            cap: cache.k_max(),
        });
    }
    let mut total = T::zero();
    let mut terms = Vec::new();
    for p in enumerate_partitions(k, cap)? {
        let m = p.m();
        if h_indicator(n, m) == 0 {
            // Fewer observations than distinct indices: the term is absent.
            continue;
        }
        let star = big_to_scalar::<T>(&star_multinomial(&p));
        let x_term = cache.z_term(Column::X, &p);
        let y_term = cache.z_term(Column::Y, &p);
        let term = PartitionTerm {
            partition: p,
            star,
            x_term,
            y_term,
            multiplicity_factor: reciprocal_falling(n, m),
        };
        total = total + term.contribution();
        terms.push(term);
    }
    Ok((total, terms))
}

fn big_to_scalar<T: Scalar>(v: &num_bigint::BigUint) -> T {
    // Star coefficients are built up digit-wise so exact types stay exact.
    let base = T::from_u64(1 << 32).expect("scalar holds 2^32");
    v.to_u32_digits().iter().rev().fold(T::zero(), |acc, &d| {
        acc * base.clone() + T::from_u32(d).expect("u32")
    })
}

/// Options for [`MomentSession`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InductionConfig {
    /// Largest order accepted.
    pub k_cap: usize,
    /// Populate [`MomentResult::breakdown`].
    pub breakdown: bool,
}

impl Default for InductionConfig {
    fn default() -> Self {
        Self {
            k_cap: DEFAULT_K_CAP,
            breakdown: false,
        }
    }
}

/// Analytic value of `<r^k>` over all permutations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentResult {
    pub k: usize,
    pub value: f64,
    pub method: Method,
    /// Per-partition terms; present only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<Vec<PartitionTerm<f64>>>,
}

/// A single-threaded evaluation session over one dataset: power sums are
/// computed once and Z-terms are shared between orders.
#[derive(Debug, Clone)]
pub struct MomentSession {
    n: usize,
    config: InductionConfig,
    cache: ZTermCache<f64>,
    /// `sqrt(Sxx * Syy)` of the data the power sums came from.
    scale: f64,
}

fn power_sums(values: &[f64], k_max: usize) -> Vec<f64> {
    (0..=k_max)
        .map(|j| {
            let e = j as i32;
            pairwise_sum_by(values.len(), |i| values[i].powi(e))
        })
        .collect()
}

impl MomentSession {
    /// Standardizes `d` and prepares power sums up to `k_max`.
    pub fn new(d: &Dataset, k_max: usize, config: InductionConfig) -> Result<Self> {
        let c = center(d, true)?;
        Self::from_centered(&c, k_max, config)
    }

    /// Uses `c` as given; standardized input keeps every power sum O(n).
    pub fn from_centered(c: &CenteredData, k_max: usize, config: InductionConfig) -> Result<Self> {
        if k_max > config.k_cap {
            return Err(Error::KTooLarge {
                k: k_max,
                cap: config.k_cap,
            });
        }
        let order = k_max.max(2);
        let x_sums = power_sums(&c.x_hat, order);
        let y_sums = power_sums(&c.y_hat, order);
        if x_sums[2] == 0.0 {
            return Err(Error::ZeroVariance(Column::X));
        }
        if y_sums[2] == 0.0 {
            return Err(Error::ZeroVariance(Column::Y));
        }
        let scale = (x_sums[2] * y_sums[2]).sqrt();
        Ok(Self {
            n: c.len(),
            config,
            cache: ZTermCache::new(x_sums, y_sums),
            scale,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cache(&self) -> &ZTermCache<f64> {
        &self.cache
    }

    pub fn moment(&mut self, k: usize) -> Result<MomentResult> {
        if k > self.config.k_cap {
            return Err(Error::KTooLarge {
                k,
                cap: self.config.k_cap,
            });
        }
        let (cross, terms) =
            permutation_cross_moment(&mut self.cache, self.n, k, self.config.k_cap)?;
        let value = cross / self.scale.powi(k as i32);
        let breakdown = self.config.breakdown.then(|| {
            let norm = self.scale.powi(k as i32);
            terms
                .into_iter()
                .map(|mut t| {
                    t.multiplicity_factor /= norm;
                    t
                })
                .collect()
        });
        Ok(MomentResult {
            k,
            value,
            method: Method::Induction,
            breakdown,
        })
    }

    /// Orders `1..=k_max` in one pass over a shared cache.
    pub fn moments(&mut self, k_max: usize) -> Result<Vec<MomentResult>> {
        (1..=k_max).map(|k| self.moment(k)).collect()
    }
}

/// `<r^k>` over all permutations of the y column.
pub fn moment(d: &Dataset, k: usize) -> Result<MomentResult> {
    MomentSession::new(d, k, InductionConfig::default())?.moment(k)
}

/// `<r^1>, ..., <r^k_max>` sharing one session.
pub fn moments(d: &Dataset, k_max: usize) -> Result<Vec<MomentResult>> {
    MomentSession::new(d, k_max, InductionConfig::default())?.moments(k_max)
}

/// Converts any scalar with a float view; used for reporting exact results.
pub fn scalar_to_f64<T: Scalar + ToPrimitive>(v: &T) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}
