use super::GameSpec;
use crate::board::{BoardGraph, Pos};
use crate::error::RuleViolation;
use crate::model::Expansion;
use crate::moves::Move;
use crate::player::{Outcome, Player};
use crate::state::GameState;

const DIRECTIONS: [(i32, i32); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

pub(super) fn rays(board: &BoardGraph) -> Vec<Vec<Vec<Pos>>> {
    board
        .positions()
        .map(|p| DIRECTIONS.iter().map(|&d| board.ray(p, d)).filter(|r| r.len() >= 2).collect())
        .collect()
}

/// Number of opponent pieces a placement at `at` would flip along `ray`.
#[inline]
fn flanked(cells: &[Option<Player>], ray: &[Pos], player: Player) -> usize {
    let opp = Some(player.opponent());
    let mut n = 0;
    for &q in ray {
        match cells[q as usize] {
            c if c == opp => n += 1,
            c if c == Some(player) => return n,
            _ => return 0,
        }
    }
    0
}

fn can_place(spec: &GameSpec, cells: &[Option<Player>], at: Pos, player: Player) -> bool {
    cells[at as usize].is_none() && spec.rays()[at as usize].iter().any(|r| flanked(cells, r, player) > 0)
}

pub(super) fn placements(spec: &GameSpec, state: &GameState, player: Player) -> Vec<Move> {
    spec.board()
        .positions()
        .filter(|&p| can_place(spec, state.cells(), p, player))
        .map(|to| Move::Insert { to })
        .collect()
}

fn has_placement(spec: &GameSpec, state: &GameState, player: Player) -> bool {
    spec.board().positions().any(|p| can_place(spec, state.cells(), p, player))
}

pub(super) fn flip(spec: &GameSpec, cells: &mut [Option<Player>], at: Pos, player: Player) {
    for ray in &spec.rays()[at as usize] {
        let n = flanked(cells, ray, player);
        for &q in &ray[..n] {
            cells[q as usize] = Some(player);
        }
    }
}

fn count_result(state: &GameState) -> Outcome {
    let (a, b) = (state.count(Player::P1), state.count(Player::P2));
    match a.cmp(&b) {
        std::cmp::Ordering::Greater => Outcome::Win(Player::P1),
        std::cmp::Ordering::Less => Outcome::Win(Player::P2),
        std::cmp::Ordering::Equal => Outcome::Draw,
    }
}

/// The game ends once neither player can place (which includes a full
/// board); the player with more pieces wins.
pub(super) fn final_count(spec: &GameSpec, state: &GameState) -> Option<Outcome> {
    let over = !Player::BOTH.iter().any(|&p| has_placement(spec, state, p));
    over.then(|| count_result(state))
}

pub(super) fn expand(spec: &GameSpec, state: &GameState) -> Expansion {
    let mover = state.to_move();
    let moves = placements(spec, state, mover);
    if !moves.is_empty() {
        Expansion::Moves(moves)
    } else if has_placement(spec, state, mover.opponent()) {
        Expansion::Moves(vec![Move::Pass])
    } else {
        Expansion::Terminal(count_result(state))
    }
}

pub(super) fn diagnose(spec: &GameSpec, state: &GameState, mv: &Move) -> RuleViolation {
    match mv {
        Move::Insert { to } if !spec.board().contains(*to) => RuleViolation::UnknownPosition(*to),
        Move::Insert { to } if state.at(*to).is_some() => RuleViolation::Occupied(*to),
        Move::Insert { .. } => RuleViolation::MustFlank,
        Move::Pass => RuleViolation::PassNotAllowed,
        _ => RuleViolation::WrongMoveKind,
    }
}
