//! Game-agnostic engine for two-player zero-sum board games.
//!
//! Moves are chosen in two independent stages. An evaluator assigns every
//! legal move a value in `[0, 1]`: either the hybrid search (minimax with
//! alpha-beta whose depth-limited leaves are valued by random playouts,
//! under time-bounded iterative deepening) or a UCT baseline. A selector
//! then picks a move from those values alone, either greedily or by
//! sampling a clipped Gaussian target whose mean and spread set the
//! difficulty.
//!
//! ```
//! use boardmind_core::prelude::*;
//! use std::time::Duration;
//!
//! let game = GameSpec::new(GameId::TicTacToe, RuleVariant::default()).unwrap();
//! let state = game.initial_state();
//! let config = SearchConfig { time_budget: Duration::from_millis(20), ..Default::default() };
//! let evaluation = iterative_deepening_evaluate(&game, &state, &config).unwrap();
//! assert_eq!(evaluation.len(), 9);
//! let mut rng = boardmind_core::rng::seeded(1);
//! let mv = stochastic_select(&evaluation, DifficultyPreset::Medium.params(), &mut rng).unwrap();
//! assert!(game.apply(&state, mv).is_ok());
//! ```

pub mod agents;
pub mod arena;
pub mod board;
pub mod clock;
pub mod difficulty;
pub mod error;
pub mod games;
pub mod matches;
pub mod model;
pub mod moves;
pub mod notation;
pub mod player;
pub mod rng;
pub mod search;
pub mod state;

pub use error::{EngineError, ParseError, Result, RuleViolation};
pub use games::GameSpec;
pub use state::GameState;

pub mod prelude {
    pub use crate::agents::{AgentConfig, AgentKind, Difficulty, HybridAgent, RandomAgent, UctAgent};
    pub use crate::arena::{run_series, SeriesOptions, SeriesResult};
    pub use crate::board::{BoardGraph, Pos};
    pub use crate::difficulty::{
        sample_target, selection_band_probabilities, stochastic_select, DifficultyParams, DifficultyPreset,
    };
    pub use crate::games::{new_game, GameId, GameSpec, RuleVariant};
    pub use crate::matches::{run_match, Agent, Decision, MatchResult};
    pub use crate::model::{Expansion, ForwardModel};
    pub use crate::moves::{Hop, Move};
    pub use crate::player::{Outcome, Player};
    pub use crate::search::{
        iterative_deepening_evaluate, minimax_mcts, random_playout, uct_evaluate, Evaluation, SearchConfig, UctConfig,
    };
    pub use crate::state::{GameState, Phase};
}
