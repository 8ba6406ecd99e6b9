pub mod cli;
pub mod columns;
pub mod decision;
pub mod error;
pub mod format;
pub mod linkage;
pub mod matrix;
pub mod poset;

pub use columns::ColumnSet;
pub use decision::{
    check_tableau, closure, col, equivalent, expand_once, holds, implies, oracle_functional,
    oracle_implies, verify_tableau, LexTableau, MatrixSet, Verdict,
};
pub use error::{FormatError, MatrixError, OracleError, PosetError};
pub use linkage::{is_trivial, linkage_classes, triviality, TrivialityReport, TrivialityVerdict};
pub use matrix::{CanonicalKey, Matrix};
