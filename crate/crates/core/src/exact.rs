//! Rational-arithmetic versions of the moment computations.
//!
//! Every finite `f64` is a dyadic rational, so a dataset converts without
//! loss. `<r^k>` itself is irrational for odd `k` in general; it is carried
//! as the pair `(T, Sxx*Syy)` with `<r^k> = T / (Sxx*Syy)^(k/2)`, where `T` is
//! the permutation mean of `(sum_i x_i y_pi(i))^k`. Both parts are exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Column, Error, Result};
use crate::induction::{permutation_cross_moment, ZTermCache};
use crate::oracle::perm::LexPermutations;
use crate::partition::DEFAULT_K_CAP;
use crate::stats::Dataset;

pub fn to_rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("dataset values are finite")
}

/// Centered columns in exact arithmetic; their means are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactCentered {
    pub x_hat: Vec<BigRational>,
    pub y_hat: Vec<BigRational>,
}

fn center_exact(values: &[f64]) -> Vec<BigRational> {
    let exact: Vec<BigRational> = values.iter().map(|&v| to_rational(v)).collect();
    let n = BigRational::from_integer(BigInt::from(exact.len()));
    let mean = exact.iter().fold(BigRational::zero(), |a, b| a + b) / n;
    exact.into_iter().map(|v| v - &mean).collect()
}

impl ExactCentered {
    pub fn new(d: &Dataset) -> Self {
        Self {
            x_hat: center_exact(d.xs()),
            y_hat: center_exact(d.ys()),
        }
    }

    pub fn side(&self, column: Column) -> &[BigRational] {
        match column {
            Column::X => &self.x_hat,
            Column::Y => &self.y_hat,
        }
    }

    /// `sum_i z_i^j` for `j = 0..=k_max`.
    pub fn power_sums(&self, column: Column, k_max: usize) -> Vec<BigRational> {
        let values = self.side(column);
        let mut powers: Vec<BigRational> = vec![BigRational::one(); values.len()];
        let mut out = Vec::with_capacity(k_max + 1);
        out.push(BigRational::from_integer(BigInt::from(values.len())));
        for _ in 1..=k_max {
            for (p, v) in powers.iter_mut().zip(values) {
                *p = &*p * v;
            }
            out.push(powers.iter().fold(BigRational::zero(), |a, b| a + b));
        }
        out
    }

    /// `Sxx * Syy`.
    pub fn variance_product(&self) -> BigRational {
        let sq = |v: &[BigRational]| v.iter().fold(BigRational::zero(), |a, b| a + b * b);
        sq(&self.x_hat) * sq(&self.y_hat)
    }
}

/// `<r^k>` as an exact pair; see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMoment {
    pub k: usize,
    /// Permutation mean of `(sum_i x_i y_pi(i))^k` over centered data.
    pub cross: BigRational,
    /// `Sxx * Syy` of the centered data.
    pub variance_product: BigRational,
}

impl ExactMoment {
    /// `<r^k>^2`, always rational.
    pub fn squared(&self) -> BigRational {
        (&self.cross * &self.cross) / pow(&self.variance_product, self.k)
    }

    /// The value itself when it is rational (even `k`).
    pub fn rational_value(&self) -> Option<BigRational> {
        (self.k % 2 == 0).then(|| &self.cross / pow(&self.variance_product, self.k / 2))
    }

    /// Nearest double, from one rounding of the squared value.
    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.rational_value() {
            return v.to_f64().unwrap_or(f64::NAN);
        }
        let magnitude = self.squared().to_f64().unwrap_or(f64::NAN).sqrt();
        if self.cross.is_negative() {
            -magnitude
        } else {
            magnitude
        }
    }
}

fn pow(base: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * base)
}

fn check_variance(c: &ExactCentered) -> Result<()> {
    if c.x_hat.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVariance(Column::X));
    }
    if c.y_hat.iter().all(Zero::is_zero) {
        return Err(Error::ZeroVariance(Column::Y));
    }
    Ok(())
}

/// `<r^k>` for `k = 1..=k_max` by the recursion in rational arithmetic.
pub fn moments_exact(d: &Dataset, k_max: usize) -> Result<Vec<ExactMoment>> {
    if k_max > DEFAULT_K_CAP {
        return Err(Error::KTooLarge {
            k: k_max,
            cap: DEFAULT_K_CAP,
        });
    }
    let c = ExactCentered::new(d);
    check_variance(&c)?;
    let vp = c.variance_product();
    let order = k_max.max(1);
    let mut cache = ZTermCache::new(
        c.power_sums(Column::X, order),
        c.power_sums(Column::Y, order),
    );
    (1..=k_max)
        .map(|k| {
            let (cross, _) = permutation_cross_moment(&mut cache, d.len(), k, DEFAULT_K_CAP)?;
            Ok(ExactMoment {
                k,
                cross,
                variance_product: vp.clone(),
            })
        })
        .collect()
}

/// Largest `n` accepted by [`brute_force_exact`].
pub const EXACT_BRUTE_FORCE_CAP: usize = 8;

/// `<r^k>` for `k = 1..=k_max` by enumerating all `n!` permutations in
/// rational arithmetic.
pub fn brute_force_exact(d: &Dataset, k_max: usize) -> Result<Vec<ExactMoment>> {
    let n = d.len();
    if n > EXACT_BRUTE_FORCE_CAP {
        return Err(Error::NTooLarge {
            n,
            cap: EXACT_BRUTE_FORCE_CAP,
        });
    }
    let c = ExactCentered::new(d);
    check_variance(&c)?;
    let mut totals = vec![BigRational::zero(); k_max + 1];
    let mut count = 0u64;
    for perm in LexPermutations::new((0..n).collect()) {
        let cross = perm
            .iter()
            .enumerate()
            .fold(BigRational::zero(), |acc, (i, &j)| {
                acc + &c.x_hat[i] * &c.y_hat[j]
            });
        let mut power = BigRational::one();
        for total in totals.iter_mut().skip(1) {
            power = &power * &cross;
            *total = &*total + &power;
        }
        count += 1;
    }
    let count = BigRational::from_integer(BigInt::from(count));
    let vp = c.variance_product();
    Ok((1..=k_max)
        .map(|k| ExactMoment {
            k,
            cross: &totals[k] / &count,
            variance_product: vp.clone(),
        })
        .collect())
}
