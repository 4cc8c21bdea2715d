//! Hand-expanded formulas for `<r^k>`, `k = 1..=5`.
//!
//! Each bracket of the expansion is a named term so a mismatch against the
//! recursion can be traced to a single term. Inputs use the unnormalized
//! central moments `chi_j`, `nu_j` and population standard deviations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::h_indicator;
use crate::stats::{center, central_moments, CenteredData, Dataset};

/// Central moments `chi_2..chi_5`, `nu_2..nu_5` plus the sample size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormInputs {
    pub n: usize,
    /// `chi[j]` for `j` in `0..=5`; entries 0 and 1 are unused.
    pub chi: [f64; 6],
    pub nu: [f64; 6],
    pub sigma_x: f64,
    pub sigma_y: f64,
}

impl ClosedFormInputs {
    pub fn from_centered(c: &CenteredData) -> Result<Self> {
        let t = central_moments(c, 5)?;
        let mut chi = [0.0; 6];
        let mut nu = [0.0; 6];
        for j in 0..=5 {
            chi[j] = t.chi(j);
            nu[j] = t.nu(j);
        }
        // On standardized data the stored columns already have unit spread.
        let (sigma_x, sigma_y) = if c.standardized {
            (chi[2].sqrt(), nu[2].sqrt())
        } else {
            (c.sigma_x, c.sigma_y)
        };
        Ok(Self {
            n: c.len(),
            chi,
            nu,
            sigma_x,
            sigma_y,
        })
    }

    /// Inputs from the raw (unstandardized) centered data.
    pub fn from_dataset(d: &Dataset) -> Result<Self> {
        Self::from_centered(&center(d, false)?)
    }
}

/// One printed term of a closed form, already multiplied by its `h` factor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedTerm {
    pub name: &'static str,
    pub value: f64,
}

/// Terms of the closed form for order `k`; their sum is the moment.
pub fn closed_form_terms(inputs: &ClosedFormInputs, k: usize) -> Result<Vec<NamedTerm>> {
    let ClosedFormInputs {
        n,
        chi,
        nu,
        sigma_x,
        sigma_y,
    } = *inputs;
    if n < 2 {
        return Err(Error::TooFewObservations(n));
    }
    if sigma_x == 0.0 {
        return Err(Error::ZeroVariance(crate::error::Column::X));
    }
    if sigma_y == 0.0 {
        return Err(Error::ZeroVariance(crate::error::Column::Y));
    }
    let nf = n as f64;
    let pw: Vec<f64> = (0..=6).map(|e| nf.powi(e)).collect();
    // Falling products (n-1), (n-1)(n-2), ... ; only read when h(n, m) = 1.
    let fall = |m: usize| -> f64 { (1..m).map(|i| nf - i as f64).product() };
    let mut terms = Vec::new();
    let mut push = |name: &'static str, m: usize, value: &dyn Fn() -> f64| {
        let v = if h_indicator(n, m) == 1 { value() } else { 0.0 };
        terms.push(NamedTerm { name, value: v });
    };

    match k {
        1 => push("zero", 1, &|| 0.0),
        2 => push("one_over_n_minus_1", 2, &|| 1.0 / (nf - 1.0)),
        3 => {
            let lead = chi[3] * nu[3] / (sigma_x.powi(3) * sigma_y.powi(3));
            push("mu33/n^2", 1, &|| lead / pw[2]);
            push("3 mu33/(n^2 (n-1))", 2, &|| lead * 3.0 / (pw[2] * fall(2)));
            push("4 mu33/(n^2 (n-1)(n-2))", 3, &|| {
                lead * 4.0 / (pw[2] * fall(3))
            });
        }
        4 => {
            let norm = sigma_x.powi(4) * sigma_y.powi(4);
            let sx4 = sigma_x.powi(4);
            let sy4 = sigma_y.powi(4);
            // [n^2 sigma^4 - n chi_4] and [2 n chi_4 - n^2 sigma^4]
            let pair_x = pw[2] * sx4 - nf * chi[4];
            let pair_y = pw[2] * sy4 - nf * nu[4];
            let triple_x = 2.0 * nf * chi[4] - pw[2] * sx4;
            let triple_y = 2.0 * nf * nu[4] - pw[2] * sy4;
            push("mu44/n^3", 1, &|| chi[4] * nu[4] / pw[3] / norm);
            push("4 chi4 nu4/(n^3 (n-1))", 2, &|| {
                4.0 * chi[4] * nu[4] / (pw[3] * fall(2)) / norm
            });
            push("3 [n^2 s^4 - n chi4][..]/(n^5 (n-1))", 2, &|| {
                3.0 * pair_x * pair_y / (pw[5] * fall(2)) / norm
            });
            push("6 [2n chi4 - n^2 s^4][..]/(n^5 (n-1)(n-2))", 3, &|| {
                6.0 * triple_x * triple_y / (pw[5] * fall(3)) / norm
            });
            push(
                "9 [2n chi4 - n^2 s^4][..]/(n^5 (n-1)(n-2)(n-3))",
                4,
                &|| 9.0 * triple_x * triple_y / (pw[5] * fall(4)) / norm,
            );
        }
        5 => {
            let norm = sigma_x.powi(5) * sigma_y.powi(5);
            let mu55 = chi[5] * nu[5];
            let c32x = chi[3] * chi[2];
            let c32y = nu[3] * nu[2];
            // [n^2 chi3 chi2 - n chi5]
            let b32_x = pw[2] * c32x - nf * chi[5];
            let b32_y = pw[2] * c32y - nf * nu[5];
            // [2n chi5 - n^2 chi3 chi2]
            let b311_x = 2.0 * nf * chi[5] - pw[2] * c32x;
            let b311_y = 2.0 * nf * nu[5] - pw[2] * c32y;
            // [n chi5 - n^2 chi3 chi2]
            let b221_x = nf * chi[5] - pw[2] * c32x;
            let b221_y = nf * nu[5] - pw[2] * c32y;
            // [6n chi5 - 5n^2 chi3 chi2]
            let b2111_x = 6.0 * nf * chi[5] - 5.0 * pw[2] * c32x;
            let b2111_y = 6.0 * nf * nu[5] - 5.0 * pw[2] * c32y;
            push("mu55/n^4", 1, &|| mu55 / pw[4] / norm);
            push("5 mu55/(n^4 (n-1))", 2, &|| {
                5.0 * mu55 / (pw[4] * fall(2)) / norm
            });
            push("10 [n^2 chi3 chi2 - n chi5][..]/(n^6 (n-1))", 2, &|| {
                10.0 * b32_x * b32_y / (pw[6] * fall(2)) / norm
            });
            push(
                "10 [2n chi5 - n^2 chi3 chi2][..]/(n^6 (n-1)(n-2))",
                3,
                &|| 10.0 * b311_x * b311_y / (pw[6] * fall(3)) / norm,
            );
            push(
                "60 [n chi5 - n^2 chi3 chi2][..]/(n^6 (n-1)(n-2))",
                3,
                &|| 60.0 * b221_x * b221_y / (pw[6] * fall(3)) / norm,
            );
            push(
                "10 [6n chi5 - 5n^2 chi3 chi2][..]/(n^6 (n-1)(n-2)(n-3))",
                4,
                &|| 10.0 * b2111_x * b2111_y / (pw[6] * fall(4)) / norm,
            );
            push(
                "16 [6n chi5 - 5n^2 chi3 chi2][..]/(n^6 (n-1)..(n-4))",
                5,
                &|| 16.0 * b2111_x * b2111_y / (pw[6] * fall(5)) / norm,
            );
        }
        _ => return Err(Error::UnsupportedOrder(k)),
    }
    Ok(terms)
}

/// `<r^k>` from the hand-expanded formula.
pub fn moment_closed_form(inputs: &ClosedFormInputs, k: usize) -> Result<f64> {
    let terms = closed_form_terms(inputs, k)?;
    Ok(terms.iter().map(|t| t.value).sum())
}
