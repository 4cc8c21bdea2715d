use thiserror::Error;

/// Which column of a bivariate sample an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Column {
    X,
    Y,
}

impl std::fmt::Display for Column {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Column::X => f.write_str("x"),
            Column::Y => f.write_str("y"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("column lengths differ: x has {x_len} values, y has {y_len}")]
    LengthMismatch { x_len: usize, y_len: usize },

    #[error("at least 2 observations are required, got {0}")]
    TooFewObservations(usize),

    #[error("non-finite value {value} in column {column} at row {row}")]
    NonFinite {
        column: Column,
        row: usize,
        value: f64,
    },

    #[error("column {0} has zero variance")]
    ZeroVariance(Column),

    #[error("moment order {k} exceeds the configured cap of {cap}")]
    KTooLarge { k: usize, cap: usize },

    #[error("exhaustive enumeration needs n <= {cap}, got n = {n}")]
    NTooLarge { n: usize, cap: usize },

    #[error("no closed form is available for order {0} (supported: 1..=5)")]
    UnsupportedOrder(usize),

    #[error("correlation {0} is outside [-1, 1] beyond rounding tolerance")]
    CorrelationOutOfRange(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
