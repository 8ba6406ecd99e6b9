use thiserror::Error;

/// Errors raised while building or transforming matrices.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("entry {value} at row {row}, column {col} is outside the alphabet 0..{alphabet}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: i64,
        alphabet: usize,
    },
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("operation requires a matrix with at least one column")]
    EmptyMatrix,
    #[error("linkage needs two distinct rows, got row {0} twice")]
    SameRow(usize),
    #[error("row {row} does not exist in a matrix with {rows} rows")]
    RowOutOfRange { row: usize, rows: usize },
}

/// Errors raised by the brute-force semantic oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),
    #[error("premise matrix {0} is trivial; the semantic oracle only covers non-trivial premises")]
    TrivialPremise(usize),
    #[error("premise matrix {0} is empty")]
    EmptyPremise(usize),
}

/// Raised when a relation handed to the Hasse reduction is not a partial order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),
}

/// Parse failures for the text and JSON exchange formats.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}: {msg}")]
    Text { line: usize, msg: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error("{0}")]
    Invalid(String),
}
