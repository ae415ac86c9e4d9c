use crate::error::{EngineError, Result, RuleViolation};
use crate::moves::Move;
use crate::player::{Outcome, Player};
use crate::state::GameState;

/// Either the outcome of a finished position or the (non-empty, canonically
/// ordered) moves available to the player to move.
#[derive(Debug, Clone, PartialEq)]
pub enum Expansion {
    Terminal(Outcome),
    Moves(Vec<Move>),
}

/// A game's forward model. Search code only ever talks to games through
/// this trait.
pub trait ForwardModel: Send + Sync {
    fn name(&self) -> String;

    fn initial_state(&self) -> GameState;

    /// Terminal test and move generation in one pass.
    fn expand(&self, state: &GameState) -> Expansion;

    /// Applies a move taken from [`ForwardModel::expand`] without checking it.
    fn apply_unchecked(&self, state: &GameState, mv: &Move) -> GameState;

    /// Explains why `mv` is not legal in `state`.
    fn diagnose(&self, state: &GameState, mv: &Move) -> RuleViolation;

    fn legal_moves(&self, state: &GameState) -> Result<Vec<Move>> {
        match self.expand(state) {
            Expansion::Moves(moves) => Ok(moves),
            Expansion::Terminal(_) => Err(EngineError::TerminalState),
        }
    }

    fn outcome(&self, state: &GameState) -> Option<Outcome> {
        match self.expand(state) {
            Expansion::Terminal(o) => Some(o),
            Expansion::Moves(_) => None,
        }
    }

    fn is_terminal(&self, state: &GameState) -> bool {
        self.outcome(state).is_some()
    }

    /// 1 for a win, 0 for a loss, 0.5 for a draw, seen from `perspective`.
    fn terminal_value(&self, state: &GameState, perspective: Player) -> Result<f64> {
        self.outcome(state)
            .map(|o| o.value_for(perspective))
            .ok_or(EngineError::NotTerminal)
    }

    fn apply(&self, state: &GameState, mv: &Move) -> Result<GameState> {
        let moves = match self.expand(state) {
            Expansion::Moves(moves) => moves,
            Expansion::Terminal(_) => {
                return Err(EngineError::IllegalMove { mv: mv.to_string(), violation: RuleViolation::GameOver })
            }
        };
        if moves.contains(mv) {
            Ok(self.apply_unchecked(state, mv))
        } else {
            Err(EngineError::IllegalMove { mv: mv.to_string(), violation: self.diagnose(state, mv) })
        }
    }
}
