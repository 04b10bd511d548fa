use alloc::string::String;
use alloc::vec::Vec;

use crate::rbm::RbmViolation;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("predicate `{0}` declared twice")]
    DuplicatePredicate(String),
    #[error("predicate `{name}` has arity {arity}; only 1 and 2 are supported")]
    BadArity { name: String, arity: u32 },
    #[error("language too large: {unary} unary and {binary} binary predicates")]
    LanguageTooLarge { unary: usize, binary: usize },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("predicate `{name}` expects {expected} argument(s), found {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown variable `{0}`; only x and y are allowed")]
    UnknownVariable(String),
    #[error("constant {constant} out of range for domain size {n}")]
    ConstantOutOfRange { constant: usize, n: usize },
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("enumeration needs {atoms} ground atoms, cap is {cap}")]
    EnumerationCap { atoms: usize, cap: usize },
    #[error("weight must be a finite real, got {0}")]
    NonFiniteWeight(f64),
    #[error("no admissible 1-type: hard clauses are inconsistent")]
    NoAdmissibleType,
    #[error("model assigns zero weight to every world of size {0}")]
    ZeroPartition(usize),
    #[error("model is not projective (log f spread {spread})")]
    NotProjective { spread: f64 },
    #[error("invalid RBM parameters: {}", join(.0))]
    InvalidRbm(Vec<RbmViolation>),
    #[error("structure has no free weight")]
    NoFreeWeight,
    #[error("optimizer did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn join(violations: &[RbmViolation]) -> String {
    violations
        .iter()
        .map(|v| alloc::format!("{v}"))
        .collect::<Vec<_>>()
        .join("; ")
}
