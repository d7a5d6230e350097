use thiserror::Error;

/// Everything that can go wrong while loading data or running an analysis.
///
/// Callers that drive a process exit code care about three groups: dataset
/// parse/validation problems, references to names that do not exist, and a
/// privacy budget too small to synthesize any mechanism. The rest indicate
/// misuse of an operation or (for `Internal`) a bug in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{0}` is already defined")]
    DuplicateVariable(String),

    #[error("conditioning event {0} is unrealizable")]
    EmptyCondition(String),

    #[error("function is undefined on realized input {0}")]
    UndefinedOnInput(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("inconsistent value shape: {0}")]
    DimensionMismatch(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("query range bounds unavailable: {0}")]
    MissingBounds(String),

    #[error("value {value} lies outside the quantizer domain [{lo}, {hi}]")]
    OutOfDomain {
        value: String,
        lo: String,
        hi: String,
    },

    #[error("privacy budget {gamma} too small: minimum feasible budget is {min_gamma}")]
    BudgetTooSmall { gamma: String, min_gamma: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
