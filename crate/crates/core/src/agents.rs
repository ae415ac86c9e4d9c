use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::clock::{Clock, MonotonicClock};
use crate::difficulty::{stochastic_select, DifficultyParams, DifficultyPreset};
use crate::error::{EngineError, Result};
use crate::matches::{Agent, Decision};
use crate::model::ForwardModel;
use crate::rng::{seeded, EngineRng};
use crate::search::{iterative_deepening_evaluate_with_clock, uct_search, SearchConfig, UctConfig};
use crate::state::GameState;

/// A named preset or explicit Gaussian parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Difficulty {
    Preset(DifficultyPreset),
    Custom(DifficultyParams),
}

impl Difficulty {
    pub fn params(self) -> DifficultyParams {
        match self {
            Difficulty::Preset(p) => p.params(),
            Difficulty::Custom(p) => p,
        }
    }
}

impl fmt::Display for Difficulty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Difficulty::Preset(p) => write!(f, "{p}"),
            Difficulty::Custom(p) => write!(f, "mu={},sigma={}", p.mu, p.sigma),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AgentKind {
    Hybrid(SearchConfig),
    Uct(UctConfig),
    Random,
}

/// Evaluation stage (`kind`) plus selection stage (`difficulty`; argmax
/// when absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    #[serde(flatten)]
    pub kind: AgentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub difficulty: Option<Difficulty>,
}

impl AgentConfig {
    pub fn hybrid(config: SearchConfig) -> Self {
        AgentConfig { kind: AgentKind::Hybrid(config), difficulty: None }
    }

    pub fn uct(config: UctConfig) -> Self {
        AgentConfig { kind: AgentKind::Uct(config), difficulty: None }
    }

    pub fn random() -> Self {
        AgentConfig { kind: AgentKind::Random, difficulty: None }
    }

    pub fn with_difficulty(mut self, difficulty: Difficulty) -> Self {
        self.difficulty = Some(difficulty);
        self
    }

    pub fn label(&self) -> String {
        let base = match self.kind {
            AgentKind::Hybrid(_) => "hybrid",
            AgentKind::Uct(_) => "uct",
            AgentKind::Random => "random",
        };
        match self.difficulty {
            Some(d) => format!("{base}[{d}]"),
            None => base.to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(d) = self.difficulty {
            let p = d.params();
            DifficultyParams::new(p.mu, p.sigma)?;
        }
        match &self.kind {
            AgentKind::Hybrid(c) => c.validate(),
            AgentKind::Uct(c) if c.c.is_nan() || c.c < 0.0 || c.max_playout_depth == 0 => {
                Err(EngineError::Config("uct needs c >= 0 and a positive playout depth".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn build(&self, clock: Arc<dyn Clock>) -> Box<dyn Agent> {
        let difficulty = self.difficulty.map(Difficulty::params);
        let label = self.label();
        match &self.kind {
            AgentKind::Hybrid(c) => Box::new(HybridAgent::new(c.clone(), difficulty, clock).labeled(label)),
            AgentKind::Uct(c) => Box::new(UctAgent { config: c.clone(), difficulty, rng: seeded(0), clock, label }),
            AgentKind::Random => Box::new(RandomAgent::new(0)),
        }
    }
}

pub struct RandomAgent {
    rng: EngineRng,
}

impl RandomAgent {
    pub fn new(seed: u64) -> Self {
        RandomAgent { rng: seeded(seed) }
    }
}

impl Agent for RandomAgent {
    fn name(&self) -> String {
        "random".into()
    }

    fn reseed(&mut self, seed: u64) {
        self.rng = seeded(seed);
    }

    fn decide(&mut self, game: &dyn ForwardModel, state: &GameState) -> Result<Decision> {
        let mut moves = game.legal_moves(state)?;
        let i = self.rng.random_range(0..moves.len());
        Ok(Decision::plain(moves.swap_remove(i)))
    }
}

/// Iterative-deepening hybrid search followed by difficulty selection.
pub struct HybridAgent {
    config: SearchConfig,
    difficulty: Option<DifficultyParams>,
    rng: EngineRng,
    clock: Arc<dyn Clock>,
    label: String,
}

impl HybridAgent {
    pub fn new(config: SearchConfig, difficulty: Option<DifficultyParams>, clock: Arc<dyn Clock>) -> Self {
        let rng = seeded(config.rng_seed);
        HybridAgent { config, difficulty, rng, clock, label: "hybrid".into() }
    }

    pub fn with_monotonic_clock(config: SearchConfig, difficulty: Option<DifficultyParams>) -> Self {
        Self::new(config, difficulty, Arc::new(MonotonicClock::new()))
    }

    fn labeled(mut self, label: String) -> Self {
        self.label = label;
        self
    }
}

impl Agent for HybridAgent {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn reseed(&mut self, seed: u64) {
        self.rng = seeded(seed);
    }

    fn decide(&mut self, game: &dyn ForwardModel, state: &GameState) -> Result<Decision> {
        let config = SearchConfig { rng_seed: self.rng.random(), ..self.config.clone() };
        let evaluation = iterative_deepening_evaluate_with_clock(game, state, &config, self.clock.as_ref())?;
        let mv = match self.difficulty {
            Some(params) => stochastic_select(&evaluation, params, &mut self.rng)?.clone(),
            None => evaluation.best().ok_or(EngineError::EmptyEvaluation)?.mv.clone(),
        };
        Ok(Decision { mv, evaluation: Some(evaluation) })
    }
}

/// UCT evaluation; plays the most visited move unless a difficulty is set.
pub struct UctAgent {
    config: UctConfig,
    difficulty: Option<DifficultyParams>,
    rng: EngineRng,
    clock: Arc<dyn Clock>,
    label: String,
}

impl UctAgent {
    pub fn new(config: UctConfig, difficulty: Option<DifficultyParams>) -> Self {
        UctAgent { config, difficulty, rng: seeded(0), clock: Arc::new(MonotonicClock::new()), label: "uct".into() }
    }
}

impl Agent for UctAgent {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn reseed(&mut self, seed: u64) {
        self.rng = seeded(seed);
    }

    fn decide(&mut self, game: &dyn ForwardModel, state: &GameState) -> Result<Decision> {
        let result = uct_search(game, state, &self.config, &mut self.rng, self.clock.as_ref())?;
        let mv = match self.difficulty {
            Some(params) => stochastic_select(&result.evaluation, params, &mut self.rng)?.clone(),
            None => result.most_visited().clone(),
        };
        Ok(Decision { mv, evaluation: Some(result.evaluation) })
    }
}
