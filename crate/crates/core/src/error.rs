//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("symbol contexts differ: [{left}] vs [{right}]")]
    ContextMismatch { left: String, right: String },

    #[error("invalid symbol name `{0}` (expected [a-zA-Z][a-zA-Z0-9_]*)")]
    InvalidSymbolName(String),

    #[error("duplicate symbol `{0}` in context")]
    DuplicateSymbol(String),

    #[error("symbol `{0}` is not declared in this context")]
    UndeclaredSymbol(String),

    #[error("symbol `{0}` has no value in the assignment")]
    UnboundSymbol(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not invertible over the polynomial ring: {0}")]
    NotInvertible(String),

    #[error("operation requires constant rational entries; entry ({row},{col}) is `{entry}`")]
    SymbolicEntries {
        row: usize,
        col: usize,
        entry: String,
    },

    #[error("operation requires instantiated parameters; `{0}` is still symbolic")]
    RequiresInstantiation(String),

    #[error("Jacobi identity fails on basis triple ({i},{j},{k}); defect {defect}")]
    JacobiFailure {
        i: usize,
        j: usize,
        k: usize,
        defect: String,
    },

    #[error("matrix is not a derivation of `{algebra}`: defect on basis pair ({i},{j})")]
    NotDerivation { algebra: String, i: usize, j: usize },

    #[error("map is not a Lie algebra morphism: defect on basis pair ({i},{j})")]
    NotMorphism { i: usize, j: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
