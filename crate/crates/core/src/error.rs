use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument name {0:?} (expected ASCII letters, digits or underscore)")]
    InvalidArgumentName(String),

    #[error("unknown argument {0:?}")]
    UnknownArgument(String),

    #[error("labelling does not match the framework: {0}")]
    LabellingMismatch(String),

    #[error("argument {0:?} carries more than one label")]
    LabelOverlap(String),

    #[error("{what} has {size} arguments, above the cap of {cap}")]
    SizeLimit {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("reduction index {0} is out of range (expected 1..=4)")]
    InvalidReduction(u8),

    #[error("preference function does not match the framework: {0}")]
    PreferenceDomain(String),

    #[error("preference function is inconsistent: cycle through {}", .cycle.join(" -> "))]
    Inconsistent { cycle: Vec<String> },

    #[error("weakened preference graph requires f({src},{dst}) = 1 on a unidirectional attack")]
    WpsgConstraint { src: String, dst: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: attack references undeclared argument {name:?}")]
    UndeclaredArgument { line: usize, name: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
