use thiserror::Error;

use crate::diagram::Violation;
use crate::homology::MoveCertificate;
use crate::pairing::WovenViolation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("invalid diagram: {}", join(.0))]
    Invalid(Vec<Violation>),
    #[error("circle {index} out of range (diagram has {count})")]
    CircleOutOfRange { index: usize, count: usize },
    #[error("no arrow labelled `{0}`")]
    UnknownArrow(String),
    #[error("`{0}` is not a self-arrow")]
    NotSelfArrow(String),
    #[error("expected a 1-string, found {0} circles")]
    NotOneString(usize),
    #[error("{kind} not applicable: {reason}")]
    Inapplicable { kind: String, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("{mv} not applicable: {reason}")]
    Inapplicable { mv: String, reason: String },
    #[error("bad assignment: {0}")]
    BadAssignment(String),
    #[error("not a woven based matrix: {}", join(.0))]
    Invalid(Vec<WovenViolation>),
    #[error("matrix is not primitive")]
    NotPrimitive,
    #[error("undetermined: search exceeded {cap} states")]
    Undetermined { cap: usize, partial: Box<MoveCertificate> },
    #[error("matrix format: {0}")]
    Format(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
