use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::clock::{Clock, MonotonicClock};
use crate::error::{EngineError, RuleViolation};
use crate::model::{Expansion, ForwardModel};
use crate::moves::Move;
use crate::player::{Outcome, Player};
use crate::rng::derive_seed;
use crate::search::Evaluation;
use crate::state::GameState;

/// Default turn limit; one turn is one move by each player.
pub const DEFAULT_TURN_LIMIT: u32 = 100;

#[derive(Debug, Clone)]
pub struct Decision {
    pub mv: Move,
    /// Values behind the choice, when the agent computed any.
    pub evaluation: Option<Evaluation>,
}

impl Decision {
    pub fn plain(mv: Move) -> Self {
        Decision { mv, evaluation: None }
    }
}

pub trait Agent: Send {
    fn name(&self) -> String;

    /// Resets the agent's random stream.
    fn reseed(&mut self, seed: u64);

    fn decide(&mut self, game: &dyn ForwardModel, state: &GameState) -> Result<Decision, EngineError>;
}

impl<A: Agent + ?Sized> Agent for Box<A> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn reseed(&mut self, seed: u64) {
        (**self).reseed(seed)
    }

    fn decide(&mut self, game: &dyn ForwardModel, state: &GameState) -> Result<Decision, EngineError> {
        (**self).decide(game, state)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveRecord {
    pub digest: String,
    pub mv: Move,
    pub seat: Player,
    pub agent: String,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub outcome: Outcome,
    pub plies: u32,
    /// True when the match was stopped by the turn limit.
    pub cutoff: bool,
    pub log: Vec<MoveRecord>,
}

#[derive(Debug, Clone, Error)]
pub enum MatchError {
    #[error("turn limit must be at least 1")]
    InvalidTurnLimit,
    #[error("{agent} ({seat}) played an illegal move {mv}: {violation}")]
    IllegalMove { seat: Player, agent: String, mv: String, violation: RuleViolation, plies: u32 },
    #[error("{agent} ({seat}) failed: {error}")]
    AgentFailed { seat: Player, agent: String, error: EngineError, plies: u32 },
}

impl MatchError {
    /// The seat responsible for the abort, if any.
    pub fn offender(&self) -> Option<Player> {
        match self {
            MatchError::InvalidTurnLimit => None,
            MatchError::IllegalMove { seat, .. } | MatchError::AgentFailed { seat, .. } => Some(*seat),
        }
    }
}

/// Plays one match from the initial position, `first` moving as P1.
/// Each agent is reseeded from `(seed, seat)`.
pub fn run_match(
    game: &dyn ForwardModel,
    first: &mut dyn Agent,
    second: &mut dyn Agent,
    turn_limit: u32,
    seed: u64,
) -> Result<MatchResult, MatchError> {
    run_match_with_clock(game, first, second, turn_limit, seed, &MonotonicClock::new())
}

pub fn run_match_with_clock(
    game: &dyn ForwardModel,
    first: &mut dyn Agent,
    second: &mut dyn Agent,
    turn_limit: u32,
    seed: u64,
    clock: &dyn Clock,
) -> Result<MatchResult, MatchError> {
    if turn_limit == 0 {
        return Err(MatchError::InvalidTurnLimit);
    }
    first.reseed(derive_seed(seed, &[1]));
    second.reseed(derive_seed(seed, &[2]));
    let max_plies = turn_limit.saturating_mul(2);
    let mut state = game.initial_state();
    let mut log = Vec::new();
    loop {
        let moves = match game.expand(&state) {
            Expansion::Terminal(outcome) => {
                return Ok(MatchResult { outcome, plies: log.len() as u32, cutoff: false, log });
            }
            Expansion::Moves(m) => m,
        };
        if log.len() as u32 >= max_plies {
            return Ok(MatchResult { outcome: Outcome::Draw, plies: log.len() as u32, cutoff: true, log });
        }
        let seat = state.to_move();
        let agent: &mut dyn Agent = if seat == Player::P1 { &mut *first } else { &mut *second };
        let plies = log.len() as u32;
        let started = clock.now();
        let decision = agent
            .decide(game, &state)
            .map_err(|error| MatchError::AgentFailed { seat, agent: agent.name(), error, plies })?;
        let elapsed = clock.now().saturating_sub(started);
        if !moves.contains(&decision.mv) {
            return Err(MatchError::IllegalMove {
                seat,
                agent: agent.name(),
                mv: decision.mv.to_string(),
                violation: game.diagnose(&state, &decision.mv),
                plies,
            });
        }
        let next = game.apply_unchecked(&state, &decision.mv);
        log.push(MoveRecord { digest: state.digest(), mv: decision.mv, seat, agent: agent.name(), elapsed });
        state = next;
    }
}
