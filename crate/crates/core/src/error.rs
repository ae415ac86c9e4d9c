use std::fmt;

use thiserror::Error;

/// Why a move was refused. The `Display` text is shown to players verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleViolation {
    #[error("the game is already over")]
    GameOver,
    #[error("position {0} is not on the board")]
    UnknownPosition(u8),
    #[error("position {0} is already occupied")]
    Occupied(u8),
    #[error("there is no piece of yours on position {0}")]
    NotYourPiece(u8),
    #[error("positions {0} and {1} are not connected")]
    NotConnected(u8, u8),
    #[error("pieces must be placed before any piece can move")]
    MustPlace,
    #[error("all your pieces are already on the board")]
    NoPiecesToPlace,
    #[error("this game has no captures")]
    NoCaptures,
    #[error("it is required to do a capture when possible")]
    CaptureRequired,
    #[error("a capture must jump over an adjacent opponent piece onto an empty position")]
    InvalidJump,
    #[error("multiple captures in a single turn are not allowed in this variant")]
    MultiCaptureNotAllowed,
    #[error("a placement must flank at least one opponent piece")]
    MustFlank,
    #[error("passing is only allowed when no placement is available")]
    PassNotAllowed,
    #[error("this kind of move is not used in this game")]
    WrongMoveKind,
    #[error("move is not legal in this position")]
    Other,
}

impl RuleViolation {
    /// Stable kebab-case name of the rule, for machine consumers.
    pub fn code(&self) -> &'static str {
        match self {
            RuleViolation::GameOver => "game-over",
            RuleViolation::UnknownPosition(_) => "unknown-position",
            RuleViolation::Occupied(_) => "occupied",
            RuleViolation::NotYourPiece(_) => "not-your-piece",
            RuleViolation::NotConnected(..) => "not-connected",
            RuleViolation::MustPlace => "must-place",
            RuleViolation::NoPiecesToPlace => "no-pieces-to-place",
            RuleViolation::NoCaptures => "no-captures",
            RuleViolation::CaptureRequired => "capture-required",
            RuleViolation::InvalidJump => "invalid-jump",
            RuleViolation::MultiCaptureNotAllowed => "multi-capture-not-allowed",
            RuleViolation::MustFlank => "must-flank",
            RuleViolation::PassNotAllowed => "pass-not-allowed",
            RuleViolation::WrongMoveKind => "wrong-move-kind",
            RuleViolation::Other => "illegal",
        }
    }
}

/// Parse failure with a byte offset into the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError { offset, message: message.into() }
    }

    pub(crate) fn shifted(mut self, by: usize) -> Self {
        self.offset += by;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.offset, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("state is terminal")]
    TerminalState,
    #[error("state is not terminal")]
    NotTerminal,
    #[error("illegal move {mv}: {violation}")]
    IllegalMove { mv: String, violation: RuleViolation },
    #[error("invalid search window [{alpha}, {beta}]: need 0 <= alpha <= beta <= 1")]
    InvalidWindow { alpha: f64, beta: f64 },
    #[error("evaluation is empty")]
    EmptyEvaluation,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = EngineError> = std::result::Result<T, E>;
