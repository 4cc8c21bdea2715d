//! Compensated summation.
//!
//! Power sums feed the moment recursion directly, so every reduction over
//! the data goes through [`pairwise_sum`]: fixed-size leaves accumulated
//! with Neumaier's compensation, combined as a balanced tree.

use std::ops::AddAssign;

const LEAF: usize = 64;

/// Kahan–Babuška–Neumaier running sum.
#[derive(Debug, Default, Clone, Copy, PartialEq)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum in, keeping both compensation terms.
    pub fn merge(&mut self, other: &NeumaierSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl AddAssign<f64> for NeumaierSum {
    fn add_assign(&mut self, rhs: f64) {
        self.add(rhs);
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Pairwise sum of `values` with compensated leaves.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    pairwise_sum_by(values.len(), |i| values[i])
}

/// Pairwise sum of `term(0) + ... + term(len - 1)`.
pub fn pairwise_sum_by<F: Fn(usize) -> f64>(len: usize, term: F) -> f64 {
    tree(0, len, &term).value()
}

fn tree<F: Fn(usize) -> f64>(start: usize, end: usize, term: &F) -> NeumaierSum {
    if end - start <= LEAF {
        return (start..end).map(term).collect();
    }
    let mid = start + (end - start) / 2;
    let mut left = tree(start, mid, term);
    left.merge(&tree(mid, end, term));
    left
}
