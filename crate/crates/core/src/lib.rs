//! Exact moments of Pearson's sample correlation over all permutations of a
//! bivariate sample.
//!
//! The `k`-th moment `<r^k>` averages `r^k` over the `n!` datasets obtained
//! by permuting the y column against a fixed x column. [`induction`]
//! computes it from the central moments of the data through a recursion over
//! integer partitions of `k`; [`closedform`] carries hand-expanded formulas
//! for `k <= 5`; [`oracle`] enumerates or samples permutations directly.
//!
//! ```
//! use perm_moments::{induction, Dataset};
//!
//! let d = Dataset::new(vec![1.0, 2.0, 4.0, 8.0], vec![3.0, 1.0, 4.0, 1.5]).unwrap();
//! let m2 = induction::moment(&d, 2).unwrap();
//! assert!((m2.value - 1.0 / 3.0).abs() < 1e-12);
//! ```

pub mod closedform;
pub mod error;
pub mod exact;
pub mod induction;
pub mod oracle;
pub mod partition;
pub mod stats;
pub mod sum;

pub use error::{Column, Error, Result};
pub use induction::{InductionConfig, Method, MomentResult, MomentSession};
pub use partition::Partition;
pub use stats::{center, central_moments, pearson_r, CenteredData, Dataset, MomentTable};
