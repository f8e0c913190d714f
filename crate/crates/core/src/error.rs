use thiserror::Error;

use crate::model::Violation;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("corpus parse error at {locator}: {message}")]
    CorpusParse { locator: String, message: String },

    #[error("unknown factor token `{0}`")]
    UnknownFactor(String),

    #[error("duplicate case name `{0}`")]
    DuplicateCase(String),

    #[error("unknown case `{0}`")]
    UnknownCase(String),

    #[error("case `{case}` is invalid: {}", display_violations(.violations))]
    InvalidCase {
        case: String,
        violations: Vec<Violation>,
    },

    #[error("ADF parse error on line {line}: {message}")]
    AdfParse { line: usize, message: String },

    #[error("node `{node}` references undeclared child `{atom}`")]
    UndeclaredChild { node: String, atom: String },

    #[error("ADF contains a cycle through node `{0}`")]
    Cycle(String),

    #[error("ADF declares no ROOT")]
    MissingRoot,

    #[error("unknown ADF node `{0}`")]
    UnknownNode(String),

    #[error("node `{0}` is undecidable: no rule fired and it has no default")]
    Undecidable(String),

    #[error("case `{0}` is undecided")]
    UndecidedCase(String),

    #[error("declared reason for `{case}` at `{node}` is not a subset of the winning factors present")]
    InvalidReason { case: String, node: String },

    #[error("no precedent decided for the {side} shares a factor with `{case}`")]
    NoCitablePrecedent { case: String, side: crate::model::Side },

    #[error("dialogue error: {0}")]
    Dialogue(String),

    #[error("value {value} is outside the range of dimension `{dimension}`")]
    OutOfRange { dimension: String, value: f64 },

    #[error("invalid dimension spec `{name}`: {message}")]
    InvalidDimension { name: String, message: String },

    #[error("missing dimensional fact `{0}`")]
    MissingDimension(String),

    #[error("inconsistent precedents: {applies:?} applies but is dominated by {not_applies:?}")]
    InconsistentPrecedents {
        applies: Vec<f64>,
        not_applies: Vec<f64>,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn display_violations(v: &[Violation]) -> String {
    v.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
