//! Minimax with alpha-beta pruning whose depth-limited leaves are valued by
//! the mean of random playouts, driven by time-bounded iterative deepening.

use std::time::Duration;

use rand::Rng;

use super::{Evaluation, SearchConfig, TimeEstimate};
use crate::clock::{Clock, MonotonicClock};
use crate::error::{EngineError, Result};
use crate::model::{Expansion, ForwardModel};
use crate::moves::Move;
use crate::player::Player;
use crate::rng::{derive_seed, seeded, EngineRng};
use crate::state::GameState;

/// Reward of a playout that hits the depth cap before the game ends.
pub const CUTOFF_REWARD: f64 = 0.5;

/// Share of the grace period an iteration may use before it is abandoned;
/// the rest absorbs the cost of noticing the deadline.
const ABORT_SHARE_OF_GRACE: f64 = 0.5;

/// Values non-terminal positions at the depth limit.
pub trait LeafEvaluator {
    fn leaf_value<G: ForwardModel + ?Sized>(&mut self, game: &G, state: &GameState, perspective: Player) -> f64;

    /// Like [`leaf_value`](Self::leaf_value), but may give up and return
    /// `None` once `expired` reports true.
    fn leaf_value_until<G: ForwardModel + ?Sized>(
        &mut self,
        game: &G,
        state: &GameState,
        perspective: Player,
        expired: &dyn Fn() -> bool,
    ) -> Option<f64> {
        let _ = expired;
        Some(self.leaf_value(game, state, perspective))
    }
}

/// Plays uniformly random moves from `state` until the game ends or
/// `max_depth` plies have been played. Returns the terminal value for
/// `perspective`, or [`CUTOFF_REWARD`] when the cap is hit first.
pub fn random_playout<G, R>(game: &G, state: &GameState, max_depth: u32, perspective: Player, rng: &mut R) -> f64
where
    G: ForwardModel + ?Sized,
    R: Rng + ?Sized,
{
    let mut current = state.clone();
    for _ in 0..max_depth {
        match game.expand(&current) {
            Expansion::Terminal(outcome) => return outcome.value_for(perspective),
            Expansion::Moves(moves) => {
                let mv = &moves[rng.random_range(0..moves.len())];
                current = game.apply_unchecked(&current, mv);
            }
        }
    }
    match game.expand(&current) {
        Expansion::Terminal(outcome) => outcome.value_for(perspective),
        Expansion::Moves(_) => CUTOFF_REWARD,
    }
}

/// Mean of a fixed number of random playouts.
#[derive(Debug, Clone)]
pub struct PlayoutLeaf {
    pub playouts: u32,
    pub max_depth: u32,
    rng: EngineRng,
    /// Number of leaves valued so far.
    pub leaves: u64,
}

impl PlayoutLeaf {
    pub fn new(playouts: u32, max_depth: u32, rng: EngineRng) -> Self {
        PlayoutLeaf { playouts: playouts.max(1), max_depth, rng, leaves: 0 }
    }

    pub fn from_config(config: &SearchConfig, rng: EngineRng) -> Self {
        Self::new(config.playouts_per_leaf, config.max_playout_depth, rng)
    }
}

impl LeafEvaluator for PlayoutLeaf {
    fn leaf_value<G: ForwardModel + ?Sized>(&mut self, game: &G, state: &GameState, perspective: Player) -> f64 {
        self.leaves += 1;
        let total: f64 = (0..self.playouts)
            .map(|_| random_playout(game, state, self.max_depth, perspective, &mut self.rng))
            .sum();
        total / f64::from(self.playouts)
    }

    fn leaf_value_until<G: ForwardModel + ?Sized>(
        &mut self,
        game: &G,
        state: &GameState,
        perspective: Player,
        expired: &dyn Fn() -> bool,
    ) -> Option<f64> {
        self.leaves += 1;
        let mut total = 0.0;
        for _ in 0..self.playouts {
            if expired() {
                return None;
            }
            total += random_playout(game, state, self.max_depth, perspective, &mut self.rng);
        }
        Some(total / f64::from(self.playouts))
    }
}

struct Minimax<'a, G: ?Sized, L> {
    game: &'a G,
    leaf: &'a mut L,
    perspective: Player,
    deadline: Option<(&'a dyn Clock, Duration)>,
    aborted: bool,
    leaves: u64,
}

impl<G: ForwardModel + ?Sized, L: LeafEvaluator> Minimax<'_, G, L> {
    fn value(&mut self, state: &GameState, depth: u32, mut alpha: f64, mut beta: f64) -> f64 {
        if let Some((clock, deadline)) = self.deadline {
            if self.aborted || clock.now() >= deadline {
                self.aborted = true;
                return CUTOFF_REWARD;
            }
        }
        let moves = match self.game.expand(state) {
            Expansion::Terminal(outcome) => return outcome.value_for(self.perspective),
            Expansion::Moves(moves) => moves,
        };
        if depth == 0 {
            self.leaves += 1;
            let Some((clock, deadline)) = self.deadline else {
                return self.leaf.leaf_value(self.game, state, self.perspective);
            };
            return match self.leaf.leaf_value_until(self.game, state, self.perspective, &|| clock.now() >= deadline) {
                Some(v) => v,
                None => {
                    self.aborted = true;
                    CUTOFF_REWARD
                }
            };
        }
        if state.to_move() == self.perspective {
            let mut best = f64::NEG_INFINITY;
            for mv in &moves {
                let child = self.game.apply_unchecked(state, mv);
                best = best.max(self.value(&child, depth - 1, alpha, beta));
                if best >= beta {
                    break;
                }
                alpha = alpha.max(best);
            }
            best
        } else {
            let mut best = f64::INFINITY;
            for mv in &moves {
                let child = self.game.apply_unchecked(state, mv);
                best = best.min(self.value(&child, depth - 1, alpha, beta));
                if best <= alpha {
                    break;
                }
                beta = beta.min(best);
            }
            best
        }
    }
}

/// Depth-limited minimax with alpha-beta pruning, maximizing for
/// `perspective`. Terminal positions return their game value, positions at
/// depth 0 are handed to `leaf`.
pub fn minimax_mcts<G, L>(
    game: &G,
    state: &GameState,
    depth: u32,
    alpha: f64,
    beta: f64,
    perspective: Player,
    leaf: &mut L,
) -> Result<f64>
where
    G: ForwardModel + ?Sized,
    L: LeafEvaluator,
{
    if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) || alpha > beta {
        return Err(EngineError::InvalidWindow { alpha, beta });
    }
    let mut search = Minimax { game, leaf, perspective, deadline: None, aborted: false, leaves: 0 };
    Ok(search.value(state, depth, alpha, beta))
}

/// Predicted duration of the next iteration from the last one or two.
pub fn predict_next_iteration_time(t_prev: Duration, t_prev2: Option<Duration>) -> Duration {
    match t_prev2 {
        Some(t2) => (t_prev * 2).saturating_sub(t2).max(t_prev),
        None => t_prev,
    }
}

pub fn iterative_deepening_evaluate<G: ForwardModel + ?Sized>(
    game: &G,
    state: &GameState,
    config: &SearchConfig,
) -> Result<Evaluation> {
    iterative_deepening_evaluate_with_clock(game, state, config, &MonotonicClock::new())
}

/// Evaluates every legal move of `state` at increasing depths until the
/// time budget runs out, returning the deepest sweep that finished.
///
/// Depth 0 always completes. A deeper sweep starts only when the
/// extrapolated duration fits in the remaining budget, and is abandoned if
/// it runs into the grace period. The search also stops early once a sweep
/// reaches no depth-limited leaf, since deeper sweeps would repeat it.
pub fn iterative_deepening_evaluate_with_clock<G: ForwardModel + ?Sized>(
    game: &G,
    state: &GameState,
    config: &SearchConfig,
    clock: &dyn Clock,
) -> Result<Evaluation> {
    config.validate()?;
    let moves = game.legal_moves(state)?;
    let perspective = state.to_move();
    let children: Vec<GameState> = moves.iter().map(|m| game.apply_unchecked(state, m)).collect();
    let mut leaf = PlayoutLeaf::from_config(config, seeded(derive_seed(config.rng_seed, &[state.digest_hash()])));

    let budget = config.time_budget;
    let start = clock.now();
    let abort_at = start + budget + budget.mul_f64(config.grace * ABORT_SHARE_OF_GRACE);

    let mut sweep = |depth: u32, deadline: Option<Duration>| -> Option<(Vec<f64>, u64)> {
        let mut search = Minimax {
            game,
            leaf: &mut leaf,
            perspective,
            deadline: deadline.map(|d| (clock, d)),
            aborted: false,
            leaves: 0,
        };
        let mut values = Vec::with_capacity(children.len());
        for child in &children {
            values.push(search.value(child, depth, 0.0, 1.0));
            if search.aborted {
                return None;
            }
        }
        Some((values, search.leaves))
    };

    let (mut values, leaves) = sweep(0, None).expect("depth 0 is never aborted");
    let mut timings = vec![clock.now().saturating_sub(start)];
    let mut completed_depth = 0;
    let mut exact = leaves == 0;

    while !exact && config.max_depth.is_none_or(|m| completed_depth < m) {
        let elapsed = clock.now().saturating_sub(start);
        if elapsed >= budget {
            break;
        }
        let last = timings[timings.len() - 1];
        let predicted = match config.time_estimate {
            TimeEstimate::NextDuration => predict_next_iteration_time(last, timings.len().checked_sub(2).map(|i| timings[i])),
            TimeEstimate::TotalElapsed => predict_next_iteration_time(last, None),
        };
        if elapsed + predicted > budget {
            break;
        }
        let began = clock.now();
        let Some((v, leaves)) = sweep(completed_depth + 1, Some(abort_at)) else {
            break;
        };
        timings.push(clock.now().saturating_sub(began));
        values = v;
        completed_depth += 1;
        exact = leaves == 0;
    }

    let mut evaluation = Evaluation::new(moves.into_iter().zip(values).collect::<Vec<(Move, f64)>>());
    evaluation.completed_depth = completed_depth;
    evaluation.timings = timings;
    Ok(evaluation)
}
