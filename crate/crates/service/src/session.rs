//! One human-vs-engine game and its status machine.
//!
//! ```text
//! awaiting-human --human move--> ai-thinking --ai move--> awaiting-human
//!        \                            \
//!         `--game over--> finished     `--game over--> finished
//! ```

use std::time::Duration;

use boardmind_core::difficulty::{stochastic_select, DifficultyParams};
use boardmind_core::model::ForwardModel;
use boardmind_core::moves::Move;
use boardmind_core::notation;
use boardmind_core::player::{Outcome, Player};
use boardmind_core::rng::seeded;
use boardmind_core::search::{iterative_deepening_evaluate, Evaluation, SearchConfig};
use boardmind_core::{EngineError, GameSpec, GameState};
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SessionStatus {
    AwaitingHuman,
    AiThinking,
    Finished,
}

impl SessionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SessionStatus::AwaitingHuman => "awaiting-human",
            SessionStatus::AiThinking => "ai-thinking",
            SessionStatus::Finished => "finished",
        }
    }
}

/// A move played in the session and who played it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Played {
    pub mv: Move,
    pub by: Player,
}

/// Everything the engine needs to compute the AI reply, detached from the
/// session so the search can run without holding its lock.
#[derive(Debug, Clone)]
pub struct AiRequest {
    pub spec: GameSpec,
    pub state: GameState,
    pub difficulty: DifficultyParams,
    pub search: SearchConfig,
    /// Session version the request was taken at.
    pub version: u64,
}

impl AiRequest {
    /// Runs the evaluation stage, then the selection stage. Selection sees
    /// only the evaluation and the difficulty.
    pub fn compute(&self) -> Result<(Move, Evaluation), EngineError> {
        let evaluation = iterative_deepening_evaluate(&self.spec, &self.state, &self.search)?;
        let mut rng = seeded(self.search.rng_seed ^ 0x005e_1ec7);
        let mv = stochastic_select(&evaluation, self.difficulty, &mut rng)?.clone();
        Ok((mv, evaluation))
    }
}

#[derive(Debug, Clone)]
pub struct Session {
    id: String,
    spec: GameSpec,
    initial: GameState,
    state: GameState,
    human: Player,
    difficulty: DifficultyParams,
    budget: Duration,
    seed: u64,
    history: Vec<Played>,
    status: SessionStatus,
    outcome: Option<Outcome>,
    last_evaluation: Option<Evaluation>,
    version: u64,
}

impl Session {
    pub fn new(id: String, spec: GameSpec, human: Player, difficulty: DifficultyParams, budget: Duration, seed: u64) -> Self {
        let initial = spec.initial_state();
        let mut s = Session {
            id,
            state: initial.clone(),
            initial,
            spec,
            human,
            difficulty,
            budget,
            seed,
            history: Vec::new(),
            status: SessionStatus::AwaitingHuman,
            outcome: None,
            last_evaluation: None,
            version: 0,
        };
        s.refresh_status();
        s
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn spec(&self) -> &GameSpec {
        &self.spec
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn human(&self) -> Player {
        self.human
    }

    pub fn status(&self) -> SessionStatus {
        self.status
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    pub fn history(&self) -> &[Played] {
        &self.history
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn last_evaluation(&self) -> Option<&Evaluation> {
        self.last_evaluation.as_ref()
    }

    fn refresh_status(&mut self) {
        self.outcome = self.spec.outcome(&self.state);
        self.status = if self.outcome.is_some() {
            SessionStatus::Finished
        } else if self.state.to_move() == self.human {
            SessionStatus::AwaitingHuman
        } else {
            SessionStatus::AiThinking
        };
    }

    fn push(&mut self, mv: Move, next: GameState) {
        self.history.push(Played { mv, by: self.state.to_move() });
        self.state = next;
        self.version += 1;
        self.refresh_status();
    }

    /// Applies the human's move. Illegal moves leave the session untouched.
    pub fn submit_human(&mut self, mv: &Move) -> Result<(), ServiceError> {
        if self.status != SessionStatus::AwaitingHuman {
            return Err(ServiceError::Conflict(self.status));
        }
        let next = self.spec.apply(&self.state, mv)?;
        self.push(mv.clone(), next);
        Ok(())
    }

    /// The pending AI computation, when it is the engine's turn.
    pub fn ai_request(&self) -> Option<AiRequest> {
        (self.status == SessionStatus::AiThinking).then(|| AiRequest {
            spec: self.spec.clone(),
            state: self.state.clone(),
            difficulty: self.difficulty,
            search: SearchConfig {
                rng_seed: self.seed.wrapping_add(self.version),
                ..SearchConfig::with_budget(self.budget)
            },
            version: self.version,
        })
    }

    /// Applies the engine's reply computed for `version`.
    pub fn apply_ai(&mut self, version: u64, mv: Move, evaluation: Evaluation) -> Result<(), ServiceError> {
        if self.status != SessionStatus::AiThinking || version != self.version {
            return Err(ServiceError::Conflict(self.status));
        }
        let next = self.spec.apply(&self.state, &mv)?;
        self.last_evaluation = Some(evaluation);
        self.push(mv, next);
        Ok(())
    }

    /// Replays the history from the initial position.
    pub fn replay(&self) -> Result<GameState, EngineError> {
        self.history.iter().try_fold(self.initial.clone(), |s, p| self.spec.apply(&s, &p.mv))
    }

    pub fn view(&self, reveal_evaluation: bool) -> SessionView {
        let legal_moves = match self.status {
            SessionStatus::AwaitingHuman => {
                self.spec.legal_moves(&self.state).unwrap_or_default().iter().map(Move::to_string).collect()
            }
            _ => Vec::new(),
        };
        SessionView {
            id: self.id.clone(),
            game: self.spec.id().slug().to_string(),
            variant: self.spec.variant().name().to_string(),
            state: notation::serialize(&self.spec, &self.state),
            occupancy: self.state.occupancy_string(),
            to_move: self.state.to_move(),
            human: self.human,
            status: self.status,
            outcome: self.outcome.map(|o| match o {
                Outcome::Win(_) => "win".to_string(),
                Outcome::Draw => "draw".to_string(),
            }),
            winner: self.outcome.and_then(Outcome::winner),
            legal_moves,
            history: self.history.iter().map(|p| p.mv.to_string()).collect(),
            evaluation: if reveal_evaluation {
                self.last_evaluation.as_ref().map(|e| {
                    e.entries().iter().map(|m| MoveValueView { mv: m.mv.to_string(), value: m.value }).collect()
                })
            } else {
                None
            },
            version: self.version,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoveValueView {
    #[serde(rename = "move")]
    pub mv: String,
    pub value: f64,
}

/// Payload sent to clients for every state change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub id: String,
    pub game: String,
    pub variant: String,
    /// Canonical position notation.
    pub state: String,
    pub occupancy: String,
    pub to_move: Player,
    pub human: Player,
    pub status: SessionStatus,
    /// `"win"` or `"draw"` once finished.
    pub outcome: Option<String>,
    pub winner: Option<Player>,
    pub legal_moves: Vec<String>,
    pub history: Vec<String>,
    /// The engine's values for its last move, when the server reveals them.
    pub evaluation: Option<Vec<MoveValueView>>,
    pub version: u64,
}
