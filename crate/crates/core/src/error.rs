use thiserror::Error;

use crate::automata::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid symbol or state name {0:?}")]
    InvalidName(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed word literal {literal:?}: {message}")]
    WordLiteral { literal: String, message: String },

    #[error("automaton is invalid: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("automaton is not deterministic")]
    NotDeterministic,

    #[error("letter {0:?} is not in the input alphabet")]
    ForeignLetter(String),

    #[error("acceptance condition {0} cannot be evaluated on infinite words")]
    NotAnOmegaCondition(&'static str),

    #[error("unsupported construction: {0}")]
    Unsupported(String),

    #[error("run exceeded the step ceiling of {0}")]
    StepCeiling(usize),

    #[error("input is not strictly unbounded under the automaton")]
    NotStrictlyUnbounded,

    #[error("chain is invalid: {}", .0.join("; "))]
    InvalidChain(Vec<String>),

    #[error("bound exhausted while solving {word}: {reason}")]
    BoundExhausted { word: String, reason: String },

    #[error("unknown name {0:?}")]
    UnknownName(String),
}

impl Error {
    /// True for errors caused by a resource bound rather than by the input.
    pub fn is_exhaustion(&self) -> bool {
        matches!(self, Error::StepCeiling(_) | Error::BoundExhausted { .. })
    }
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
