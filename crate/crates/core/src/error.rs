use thiserror::Error;

use crate::matrix::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown connective `{0}`")]
    UnknownConnective(String),

    #[error("connective `{name}` expects {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("{what} exceeds the configured cap ({size} > {cap})")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("formula set is not subformula-closed: `{0}` is missing")]
    NotClosed(String),

    #[error("constraint mentions `{0}`, which is outside the universe")]
    OutsideUniverse(String),

    #[error("signatures do not match")]
    SignatureMismatch,

    #[error("invalid Nmatrix: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidNmatrix(Vec<Violation>),

    #[error("unknown value `{0}`")]
    UnknownValue(String),

    #[error("restriction is not closed: {connective}({args}) = {{{outputs}}} leaves the subset")]
    NotClosedUnder {
        connective: String,
        args: String,
        outputs: String,
    },

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("homomorphism is not strict")]
    NotStrict,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid ultrafilter: {0}")]
    InvalidUltrafilter(String),

    #[error("empty class of Nmatrices")]
    EmptyClass,

    #[error("invalid family parameters: {0}")]
    Family(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}
