use thiserror::Error;

use crate::layout::Variant;
use crate::model::ValueIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("value `{value}` is not in the domain of `{var}`")]
    UnknownValue { var: String, value: String },
    #[error("value index {value} out of range for `{var}`")]
    ValueOutOfRange { var: String, value: ValueIndex },
    #[error("variable index {0} out of range")]
    VariableOutOfRange(usize),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate value `{value}` in the domain of `{var}`")]
    DuplicateValue { var: String, value: String },
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("domain of `{0}` is too large")]
    DomainTooLarge(String),
    #[error("`{0}` is not a valid symbol")]
    InvalidSymbol(String),
    #[error("variable index {0} bound twice")]
    DuplicateBinding(usize),
    #[error("duplicate operator id `{0}`")]
    DuplicateOperator(String),
    #[error("no initial value for `{0}`")]
    MissingInit(String),
    #[error("state has {found} values, expected {expected}")]
    InitArity { expected: usize, found: usize },
    #[error("operator `{operator}` not applicable: requires {binding}")]
    Inapplicable { operator: String, binding: String },
}

/// Error from one of the line-oriented text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("step {index}: unknown operator `{id}`")]
    UnknownOperator { index: usize, id: String },
    #[error("step {index}: operator `{id}` not applicable, requires {binding}")]
    InapplicableStep { index: usize, id: String, binding: String },
}

impl RunError {
    pub fn index(&self) -> usize {
        match self {
            RunError::UnknownOperator { index, .. } | RunError::InapplicableStep { index, .. } => *index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("problem does not have the variable layout of a reduction: {0}")]
    Unrecognised(String),
    #[error("problem has the {found} layout, expected {expected}")]
    VariantMismatch { expected: Variant, found: Variant },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error(transparent)]
    Run(#[from] RunError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    /// The message variable's value sequence breaks `x, m1, x, ..., mn, x` at
    /// position `index` (0-based, in the sequence of values taken).
    #[error("message variable does not alternate x/bit: violation at value {index}")]
    NotAdmissible { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("assignment has {found} bits, formula has {expected} variables")]
    AssignmentArity { expected: usize, found: usize },
    #[error("no applicable operator among {refs:?} for `{var}` (current value {value})")]
    NoOperator { var: String, refs: Vec<String>, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute-force enumeration limited to {max} variables, formula has {n}")]
    TooManyVariables { n: usize, max: usize },
}
