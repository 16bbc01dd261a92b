use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Requested field size is not one of the supported prime powers.
    #[error("unsupported field size q={0} (supported: 2, 3, 4, 5, 7, 8, 9)")]
    UnsupportedField(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular matrix")]
    SingularMatrix,

    /// An enumeration or sweep would exceed the configured budget.
    #[error("budget exceeded: {what} requires {required}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        required: String,
        budget: u64,
    },

    /// An affine fit is too underdetermined to enumerate.
    #[error("solution space too large: {size} candidate solutions exceed fit budget {budget}")]
    SolutionSpaceTooLarge { size: String, budget: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Internal consistency failure; indicates a bug, never bad input.
    #[error("integrality violation: {0}")]
    IntegralityViolation(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// File-format errors for function tables and group elements.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed header at byte offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("table length mismatch: expected {expected} entries, found {found}")]
    TableLength { expected: u64, found: u64 },

    #[error("code out of range at table index {index}: {code} >= {limit}")]
    CodeOutOfRange { index: usize, code: u64, limit: u64 },

    #[error("field {field}: {message}")]
    Field { field: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
