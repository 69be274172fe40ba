use thiserror::Error;

/// Errors raised while building or parsing a model.
#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("variable name must be non-empty")]
    EmptyVariableName,
    #[error("constraint name must be non-empty")]
    EmptyConstraintName,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("duplicate constraint name `{0}`")]
    DuplicateConstraintName(String),
    #[error("constraint `{constraint}`: zero coefficient on variable `{var}`")]
    ZeroCoefficient { constraint: String, var: String },
    #[error("constraint `{constraint}`: variable `{var}` appears twice")]
    DuplicateTermVariable { constraint: String, var: String },
    #[error("constraint `{constraint}`: unknown variable `{var}`")]
    UnknownVariable { constraint: String, var: String },
    #[error("constraint `{constraint}`: coefficient magnitude exceeds 64-bit budget")]
    MagnitudeOverflow { constraint: String },
    #[error("header declares {declared} {kind}s but the file has {actual}")]
    HeaderMismatch {
        kind: &'static str,
        declared: usize,
        actual: usize,
    },
}

impl ModelError {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        ModelError::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Errors raised by the feasibility oracle and the IIS minimizers.
#[derive(Debug, Error)]
pub enum MinimizeError {
    /// The input violated a precondition, e.g. the constraint set to
    /// minimize is feasible.
    #[error("{0}")]
    Precondition(String),
    /// A time limit expired. `partial` holds whatever the method had
    /// accumulated; it is not guaranteed to be infeasible.
    #[error("time limit exceeded ({} names accumulated)", partial.len())]
    Timeout { partial: Vec<String> },
}

/// Errors raised by the scheduling instance generator.
#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("conflict injection impossible: {0}")]
    InjectionImpossible(String),
}
