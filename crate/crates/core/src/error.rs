use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {0} is not finite")]
    NotFinite(String),
    #[error("denominator vanishes at ε = {0}")]
    PoleAtPoint(String),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("information sets {0} and {1} belong to different players")]
    DifferentPlayers(String, String),
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error("profile is not completely mixed: {0}")]
    NotCompletelyMixed(String),
    #[error("profiles are not infinitesimally close: {0}")]
    NotInfinitesimallyClose(String),
    #[error("invalid tremble: {0}")]
    InvalidTremble(String),
    #[error("information set {infoset} is not owned by player {player}")]
    WrongPlayer { player: usize, infoset: String },
    #[error("bad distribution: {0}")]
    BadDistribution(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("model is not compatible with the tremble: {0}")]
    IncompatibleModel(String),
    #[error("conditioning event has zero probability: {0}")]
    ZeroConditioningEvent(String),
    #[error("{0} is not rationalizable")]
    NotRationalizable(String),

    #[error("direct and epistemic routes disagree: {0}")]
    RouteDisagreement(String),
    #[error("proved bound violated: {0}")]
    BoundViolation(String),
    #[error("search budget exhausted without a certificate")]
    BudgetExhausted,
    #[error("concept {concept} does not apply to {form}-form games")]
    FormMismatch { concept: String, form: &'static str },
}
