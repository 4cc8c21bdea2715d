//! Paired samples, centering, central moments and the sample correlation.

use serde::Serialize;

use crate::error::{Column, Error, Result};
use crate::sum::pairwise_sum_by;

/// Overshoot past ±1 that [`pearson_r`] silently clamps, in machine epsilons.
const CLAMP_EPS: f64 = 4.0 * f64::EPSILON;

/// A paired sample `(x_i, y_i)`, `i = 1..n`.
///
/// Construction checks that the columns have equal length, that `n >= 2`,
/// and that every value is finite. The dataset is immutable afterwards.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Dataset {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                x_len: xs.len(),
                y_len: ys.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::TooFewObservations(xs.len()));
        }
        for (column, values) in [(Column::X, &xs), (Column::Y, &ys)] {
            if let Some((row, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(Error::NonFinite { column, row, value });
            }
        }
        Ok(Self { xs, ys })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let (xs, ys) = pairs.iter().copied().unzip();
        Self::new(xs, ys)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false; a dataset holds at least two rows.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn column(&self, column: Column) -> &[f64] {
        match column {
            Column::X => &self.xs,
            Column::Y => &self.ys,
        }
    }

    /// The same rows with the two columns exchanged.
    pub fn swapped(&self) -> Dataset {
        Dataset {
            xs: self.ys.clone(),
            ys: self.xs.clone(),
        }
    }

    /// Rows reordered so that row `i` of the result is row `order[i]` of `self`.
    pub fn reordered(&self, order: &[usize]) -> Result<Dataset> {
        if !is_permutation(order, self.len()) {
            return Err(Error::InvalidArgument(format!(
                "row order must be a permutation of 0..{}",
                self.len()
            )));
        }
        Ok(Dataset {
            xs: order.iter().map(|&i| self.xs[i]).collect(),
            ys: order.iter().map(|&i| self.ys[i]).collect(),
        })
    }

    /// Applies `x -> a*x + b` to the x column.
    pub fn map_x(&self, a: f64, b: f64) -> Result<Dataset> {
        Dataset::new(self.xs.iter().map(|x| a * x + b).collect(), self.ys.clone())
    }
}

pub(crate) fn is_permutation(order: &[usize], n: usize) -> bool {
    if order.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &i in order {
        if i >= n || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

/// Mean-centered copies of both columns with their population (1/n)
/// standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenteredData {
    pub x_hat: Vec<f64>,
    pub y_hat: Vec<f64>,
    /// `sqrt(sum((x - mean)^2) / n)` of the original column.
    pub sigma_x: f64,
    pub sigma_y: f64,
    /// Whether `x_hat`/`y_hat` have been divided by `sigma_x`/`sigma_y`.
    pub standardized: bool,
}

impl CenteredData {
    pub fn len(&self) -> usize {
        self.x_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_hat.is_empty()
    }

    pub fn side(&self, column: Column) -> &[f64] {
        match column {
            Column::X => &self.x_hat,
            Column::Y => &self.y_hat,
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), |i| values[i]) / values.len() as f64
}

/// Subtracts the mean, then the mean of the residuals, so the result sums
/// to zero to within a few ulps of its largest entry.
fn centered(values: &[f64]) -> Vec<f64> {
    let mu = mean(values);
    let mut out: Vec<f64> = values.iter().map(|v| v - mu).collect();
    let correction = mean(&out);
    for v in &mut out {
        *v -= correction;
    }
    out
}

fn population_sigma(centered: &[f64]) -> f64 {
    let n = centered.len() as f64;
    (pairwise_sum_by(centered.len(), |i| centered[i] * centered[i]) / n).sqrt()
}

/// Centers both columns and, if `standardize` is set, scales them to unit
/// population variance.
///
/// Fails with [`Error::ZeroVariance`] when standardization is requested for a
/// constant column.
pub fn center(d: &Dataset, standardize: bool) -> Result<CenteredData> {
    let mut x_hat = centered(d.xs());
    let mut y_hat = centered(d.ys());
    let sigma_x = population_sigma(&x_hat);
    let sigma_y = population_sigma(&y_hat);
    if standardize {
        for (column, sigma, values) in [
            (Column::X, sigma_x, &mut x_hat),
            (Column::Y, sigma_y, &mut y_hat),
        ] {
            if sigma == 0.0 {
                return Err(Error::ZeroVariance(column));
            }
            for v in values.iter_mut() {
                *v /= sigma;
            }
        }
    }
    Ok(CenteredData {
        x_hat,
        y_hat,
        sigma_x,
        sigma_y,
        standardized: standardize,
    })
}

/// Central moments `chi_j = <x_hat^j>` and `nu_j = <y_hat^j>` for `j = 1..=k_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentTable {
    n: usize,
    k_max: usize,
    chi: Vec<f64>,
    nu: Vec<f64>,
}

impl MomentTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// `chi_j`; `chi(0)` is 1.
    pub fn chi(&self, j: usize) -> f64 {
        self.chi[j]
    }

    /// `nu_j`; `nu(0)` is 1.
    pub fn nu(&self, j: usize) -> f64 {
        self.nu[j]
    }

    pub fn side(&self, column: Column) -> &[f64] {
        match column {
            Column::X => &self.chi,
            Column::Y => &self.nu,
        }
    }

    /// Power sums `n * <z^j>` for `j = 0..=k_max` on one side.
    pub fn power_sums(&self, column: Column) -> Vec<f64> {
        let n = self.n as f64;
        self.side(column).iter().map(|m| n * m).collect()
    }
}

fn moments_of(values: &[f64], k_max: usize) -> Vec<f64> {
    let n = values.len() as f64;
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(1.0);
    for j in 1..=k_max {
        let exponent = j as i32;
        out.push(pairwise_sum_by(values.len(), |i| values[i].powi(exponent)) / n);
    }
    out
}

/// Central moments of both centered columns up to order `k_max`.
pub fn central_moments(c: &CenteredData, k_max: usize) -> Result<MomentTable> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    Ok(MomentTable {
        n: c.len(),
        k_max,
        chi: moments_of(&c.x_hat, k_max),
        nu: moments_of(&c.y_hat, k_max),
    })
}

/// Correlation of two already-centered columns. Shared by [`pearson_r`] and
/// the permutation oracles so identical rows give identical results.
pub(crate) fn correlation_of_centered(x_hat: &[f64], y_hat: &[f64]) -> Result<f64> {
    let sxx = pairwise_sum_by(x_hat.len(), |i| x_hat[i] * x_hat[i]);
    let syy = pairwise_sum_by(y_hat.len(), |i| y_hat[i] * y_hat[i]);
    if sxx == 0.0 {
        return Err(Error::ZeroVariance(Column::X));
    }
    if syy == 0.0 {
        return Err(Error::ZeroVariance(Column::Y));
    }
    let sxy = pairwise_sum_by(x_hat.len(), |i| x_hat[i] * y_hat[i]);
    clamp_correlation(sxy / (sxx * syy).sqrt())
}

pub(crate) fn clamp_correlation(r: f64) -> Result<f64> {
    if r.abs() <= 1.0 {
        Ok(r)
    } else if r.abs() - 1.0 <= CLAMP_EPS {
        Ok(r.signum())
    } else {
        Err(Error::CorrelationOutOfRange(r))
    }
}

/// Pearson's sample correlation of the dataset.
pub fn pearson_r(d: &Dataset) -> Result<f64> {
    let c = center(d, false)?;
    correlation_of_centered(&c.x_hat, &c.y_hat)
}
