//! Move evaluation: the hybrid minimax/playout search and the UCT baseline.
//! Both produce an [`Evaluation`], a value in `[0, 1]` for every legal move
//! seen from the player to move.

mod hybrid;
mod uct;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{EngineError, Result};
use crate::moves::Move;

pub use hybrid::{
    iterative_deepening_evaluate, iterative_deepening_evaluate_with_clock, minimax_mcts, predict_next_iteration_time,
    random_playout, LeafEvaluator, PlayoutLeaf,
};
pub use uct::{ucb1, uct_evaluate, uct_search, UctConfig, UctResult, UctTree};

/// How the next iteration's duration is estimated from the previous two.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimeEstimate {
    /// Extrapolate the per-iteration duration linearly.
    #[default]
    NextDuration,
    /// Extrapolate the cumulative elapsed time linearly, which predicts the
    /// next iteration to last as long as the previous one.
    TotalElapsed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    /// Playouts averaged at each depth-0 leaf.
    pub playouts_per_leaf: u32,
    pub max_playout_depth: u32,
    #[serde(with = "millis")]
    pub time_budget: Duration,
    /// Fraction of the budget an iteration may overrun before it is
    /// abandoned.
    pub grace: f64,
    pub time_estimate: TimeEstimate,
    /// Optional cap on the iterative-deepening depth.
    pub max_depth: Option<u32>,
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            playouts_per_leaf: 15,
            max_playout_depth: 100,
            time_budget: Duration::from_secs(5),
            grace: 0.5,
            time_estimate: TimeEstimate::NextDuration,
            max_depth: None,
            rng_seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(time_budget: Duration) -> Self {
        SearchConfig { time_budget, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.playouts_per_leaf == 0 {
            return Err(EngineError::Config("playouts per leaf must be at least 1".into()));
        }
        if self.max_playout_depth == 0 {
            return Err(EngineError::Config("max playout depth must be at least 1".into()));
        }
        if !(self.grace >= 0.0 && self.grace.is_finite()) {
            return Err(EngineError::Config("grace must be a non-negative fraction".into()));
        }
        Ok(())
    }
}

pub(crate) mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        u64::deserialize(d).map(Duration::from_millis)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveValue {
    pub mv: Move,
    pub value: f64,
}

/// A value for every legal move, in canonical move order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    entries: Vec<MoveValue>,
    /// Deepest fully completed iteration (0 for non-iterative evaluators).
    pub completed_depth: u32,
    /// Wall time of each completed iteration, depth 0 first.
    pub timings: Vec<Duration>,
}

impl Evaluation {
    pub fn new(entries: Vec<(Move, f64)>) -> Self {
        Evaluation {
            entries: entries.into_iter().map(|(mv, value)| MoveValue { mv, value }).collect(),
            completed_depth: 0,
            timings: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[MoveValue] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, mv: &Move) -> Option<f64> {
        self.entries.iter().find(|e| &e.mv == mv).map(|e| e.value)
    }

    /// Highest-valued move; the first one in move order on ties.
    pub fn best(&self) -> Option<&MoveValue> {
        self.entries.iter().fold(None, |best: Option<&MoveValue>, e| match best {
            Some(b) if b.value >= e.value => Some(b),
            _ => Some(e),
        })
    }
}
