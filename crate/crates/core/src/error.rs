use thiserror::Error;

use crate::space::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("unknown point `{0}`")]
    UnknownPoint(String),

    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),

    #[error("too many {what}: {count} exceeds the limit of {limit}")]
    Capacity {
        what: &'static str,
        count: usize,
        limit: usize,
    },

    #[error("poset relation is not antisymmetric: `{0}` and `{1}` are mutually below each other")]
    PosetCycle(String, String),

    #[error("term does not belong to this context")]
    ContextMismatch,

    #[error("query needs {needed} relevant literals but the valuation bound is {bound}; narrow the query")]
    ValuationBound { needed: usize, bound: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("type mapping validation failed: {0}")]
    Validation(Box<ValidationReport>),

    #[error("space is not strictly typed: {0}")]
    NotStrict(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("population has no variance (n = {n})")]
    NoVariance { n: usize },

    #[error("oracle budget exceeded: {0}")]
    Budget(String),

    #[error("invalid dataset: {0}")]
    Dataset(String),

    #[error("invalid space document: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
