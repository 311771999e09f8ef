use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("point cloud must contain at least one point")]
    EmptyCloud,
    #[error("point {label:?} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        label: String,
        expected: usize,
        found: usize,
    },
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("non-finite coordinate in point {0:?}")]
    NonFinite(String),
    #[error("sparsity undefined for fewer than two points")]
    TooFewPoints,
    #[error("oracle is planar only")]
    NotPlanar,
    #[error("hull enumeration over {0} vertex subsets exceeds the supported size")]
    HullTooLarge(u128),
    #[error("filtration order violated")]
    FiltrationOrder,
    #[error("invalid filtration parameter: {0}")]
    InvalidParameter(String),
    #[error("roster parse error at row {row}, column {column:?}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },
    #[error("league validation failed: {0}")]
    LeagueValidation(String),
    #[error("roster validation failed: {0}")]
    RosterValidation(String),
    #[error("trade rejected: {0}")]
    Trade(String),
    #[error("empty stat selection")]
    EmptySelection,
    #[error("cannot compare summaries: {0}")]
    Mismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
