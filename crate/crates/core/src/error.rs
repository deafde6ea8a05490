use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("dangling successor: edge {from} -{label}-> {to} targets an undeclared state")]
    DanglingSuccessor {
        from: String,
        label: String,
        to: String,
    },

    #[error("undeclared state `{0}`")]
    UnknownState(String),

    #[error("undeclared label `{0}`")]
    UnknownLabel(String),

    #[error("undeclared proposition `{0}`")]
    UnknownProp(String),

    #[error("non-square matrix for label `{label}`: {rows}x{cols}, expected {dim}x{dim}")]
    NonSquareMatrix {
        label: String,
        rows: usize,
        cols: usize,
        dim: usize,
    },

    #[error("unknown field tag `{0}` (supported: rational)")]
    UnknownField(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rational literal `{0}`")]
    BadRational(String),

    #[error("malformed model document: {0}")]
    Json(#[from] serde_json::Error),

    #[error("label alphabets differ: {left:?} vs {right:?}")]
    LabelMismatch {
        left: Vec<String>,
        right: Vec<String>,
    },

    #[error("unknown logic `{0}`")]
    UnknownLogic(String),

    #[error("logic `{logic}` has no lifting `{lifting}`")]
    UnknownLifting { logic: String, lifting: String },

    #[error("lifting `{lifting}` takes {expected} argument(s), got {found}")]
    ArityMismatch {
        lifting: String,
        expected: usize,
        found: usize,
    },

    #[error("logic `{logic}` cannot be interpreted on {model}")]
    BaseMismatch { logic: String, model: &'static str },

    #[error("formula `{formula}` is not well-formed in logic `{logic}`")]
    IllFormedFormula { logic: String, formula: String },

    #[error("formula syntax error at byte {pos}: {msg}")]
    FormulaSyntax { pos: usize, msg: String },

    #[error("enumeration bound exceeded: {what} ({size} > {bound})")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("logic `{0}` has liftings that are not join-preserving; generator mode refused")]
    NotJoinPreserving(String),

    #[error("relation shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("state index {index} out of range for {size} states")]
    StateOutOfRange { index: usize, size: usize },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
