//! Plain UCT: UCB1 selection, one expansion per iteration, a random playout
//! and backpropagation with the reward flipped at alternating levels.

use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::hybrid::random_playout;
use super::{Evaluation, SearchConfig};
use crate::clock::{Clock, MonotonicClock};
use crate::error::Result;
use crate::model::{Expansion, ForwardModel};
use crate::moves::Move;
use crate::player::{Outcome, Player};
use crate::rng::EngineRng;
use crate::state::GameState;

/// Value reported for root moves the search never tried.
pub const UNVISITED_VALUE: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UctConfig {
    /// Exploration constant.
    pub c: f64,
    pub max_playout_depth: u32,
    #[serde(with = "super::millis")]
    pub time_budget: Duration,
    /// Optional cap on the number of simulations.
    pub max_iterations: Option<u64>,
}

impl Default for UctConfig {
    fn default() -> Self {
        UctConfig {
            c: std::f64::consts::SQRT_2,
            max_playout_depth: SearchConfig::default().max_playout_depth,
            time_budget: Duration::from_secs(5),
            max_iterations: None,
        }
    }
}

/// UCB1 priority of a child. Unvisited children come first.
pub fn ucb1(child_reward_mean: f64, child_visits: u32, parent_visits: u32, c: f64) -> f64 {
    if child_visits == 0 {
        return f64::INFINITY;
    }
    child_reward_mean + c * ((parent_visits as f64).ln() / child_visits as f64).sqrt()
}

#[derive(Debug, Clone)]
pub struct UctNode {
    pub mv: Option<Move>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    untried: Vec<Move>,
    state: GameState,
    terminal: Option<Outcome>,
    pub visits: u32,
    /// Sum of rewards for the player who moved into this node.
    pub reward: f64,
    /// Simulations that started at this node.
    pub own_simulations: u32,
}

impl UctNode {
    fn new<G: ForwardModel + ?Sized>(game: &G, state: GameState, mv: Option<Move>, parent: Option<usize>) -> Self {
        let (untried, terminal) = match game.expand(&state) {
            Expansion::Terminal(o) => (Vec::new(), Some(o)),
            Expansion::Moves(m) => (m, None),
        };
        UctNode { mv, parent, children: Vec::new(), untried, state, terminal, visits: 0, reward: 0.0, own_simulations: 0 }
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn mean(&self) -> f64 {
        if self.visits == 0 {
            UNVISITED_VALUE
        } else {
            self.reward / f64::from(self.visits)
        }
    }

    pub fn is_fully_expanded(&self) -> bool {
        self.untried.is_empty()
    }
}

/// Search tree stored as an arena; node 0 is the root.
#[derive(Debug, Clone)]
pub struct UctTree {
    pub nodes: Vec<UctNode>,
    root_moves: Vec<Move>,
}

impl UctTree {
    pub fn new<G: ForwardModel + ?Sized>(game: &G, root: &GameState) -> Result<Self> {
        let root_moves = game.legal_moves(root)?;
        Ok(UctTree { nodes: vec![UctNode::new(game, root.clone(), None, None)], root_moves })
    }

    pub fn root(&self) -> &UctNode {
        &self.nodes[0]
    }

    /// Child of a fully expanded node with the highest UCB1; the first in
    /// move order wins ties.
    pub fn select_child(&self, node: usize, c: f64) -> usize {
        let n = &self.nodes[node];
        let mut best = n.children[0];
        let mut best_score = f64::NEG_INFINITY;
        for &child in &n.children {
            let ch = &self.nodes[child];
            let score = ucb1(ch.mean(), ch.visits, n.visits, c);
            if score > best_score || (score == best_score && ch.mv < self.nodes[best].mv) {
                best = child;
                best_score = score;
            }
        }
        best
    }

    /// One select / expand / simulate / backpropagate cycle.
    pub fn iterate<G: ForwardModel + ?Sized>(&mut self, game: &G, config: &UctConfig, rng: &mut EngineRng) {
        let mut node = 0;
        while self.nodes[node].terminal.is_none() && self.nodes[node].is_fully_expanded() {
            node = self.select_child(node, config.c);
        }
        if self.nodes[node].terminal.is_none() {
            let untried = &mut self.nodes[node].untried;
            let mv = untried.swap_remove(rng.random_range(0..untried.len()));
            let state = game.apply_unchecked(&self.nodes[node].state, &mv);
            let child = UctNode::new(game, state, Some(mv), Some(node));
            self.nodes.push(child);
            let id = self.nodes.len() - 1;
            self.nodes[node].children.push(id);
            node = id;
        }
        let leaf = &self.nodes[node];
        // reward for P1; P2's is the complement
        let p1_reward = match leaf.terminal {
            Some(o) => o.value_for(Player::P1),
            None => random_playout(game, &leaf.state, config.max_playout_depth, Player::P1, rng),
        };
        self.nodes[node].own_simulations += 1;
        let mut cur = Some(node);
        while let Some(i) = cur {
            let parent = self.nodes[i].parent;
            let mover = match parent {
                Some(p) => self.nodes[p].state.to_move(),
                None => self.nodes[i].state.to_move(),
            };
            let n = &mut self.nodes[i];
            n.visits += 1;
            n.reward += if mover == Player::P1 { p1_reward } else { 1.0 - p1_reward };
            cur = parent;
        }
    }

    /// Root moves with their mean reward for the root player.
    pub fn evaluation(&self) -> Evaluation {
        let entries = self
            .root_moves
            .iter()
            .map(|mv| {
                let value = self
                    .root()
                    .children
                    .iter()
                    .map(|&c| &self.nodes[c])
                    .find(|n| n.mv.as_ref() == Some(mv))
                    .map_or(UNVISITED_VALUE, UctNode::mean);
                (mv.clone(), value)
            })
            .collect();
        Evaluation::new(entries)
    }

    /// Visit count of each root move, in move order.
    pub fn root_visits(&self) -> Vec<u32> {
        self.root_moves
            .iter()
            .map(|mv| {
                self.root()
                    .children
                    .iter()
                    .map(|&c| &self.nodes[c])
                    .find(|n| n.mv.as_ref() == Some(mv))
                    .map_or(0, |n| n.visits)
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct UctResult {
    pub evaluation: Evaluation,
    pub visits: Vec<u32>,
    pub iterations: u64,
}

impl UctResult {
    /// Most visited root move; the first in move order on ties.
    pub fn most_visited(&self) -> &Move {
        let mut best = 0;
        for (i, v) in self.visits.iter().enumerate() {
            if *v > self.visits[best] {
                best = i;
            }
        }
        &self.evaluation.entries()[best].mv
    }
}

/// Runs UCT until the budget (or iteration cap) is used up. At least one
/// simulation always runs.
pub fn uct_search<G: ForwardModel + ?Sized>(
    game: &G,
    state: &GameState,
    config: &UctConfig,
    rng: &mut EngineRng,
    clock: &dyn Clock,
) -> Result<UctResult> {
    let mut tree = UctTree::new(game, state)?;
    let start = clock.now();
    let mut iterations = 0u64;
    loop {
        tree.iterate(game, config, rng);
        iterations += 1;
        if config.max_iterations.is_some_and(|m| iterations >= m) {
            break;
        }
        if clock.now().saturating_sub(start) >= config.time_budget {
            break;
        }
    }
    Ok(UctResult { evaluation: tree.evaluation(), visits: tree.root_visits(), iterations })
}

pub fn uct_evaluate<G: ForwardModel + ?Sized>(
    game: &G,
    state: &GameState,
    config: &UctConfig,
    rng: &mut EngineRng,
) -> Result<Evaluation> {
    uct_search(game, state, config, rng, &MonotonicClock::new()).map(|r| r.evaluation)
}

#[cfg(test)]
mod tests;
