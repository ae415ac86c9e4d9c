//! Rules for the insertion/movement games on line-connected boards:
//! tic-tac-toe, Tapatan, Tsoro Yematatu, Alquerque and Five Field Kono.

use super::{GameId, GameSpec, Placement};
use crate::board::Pos;
use crate::error::RuleViolation;
use crate::games::AlquerqueCaptures;
use crate::moves::{Hop, Move};
use crate::player::{Outcome, Player};
use crate::state::{GameState, Phase};

/// Longest capture sequence enumerated as a single move.
pub(crate) const MAX_HOPS: usize = 12;

pub(super) fn aligned(spec: &GameSpec, state: &GameState) -> Option<Outcome> {
    let last = state.to_move().opponent();
    [last, last.opponent()].into_iter().find_map(|p| {
        spec.board()
            .lines()
            .iter()
            .filter(|l| l.len() == spec.align)
            .any(|l| l.iter().all(|&q| state.at(q) == Some(p)))
            .then_some(Outcome::Win(p))
    })
}

pub(super) fn wiped_out(state: &GameState) -> Option<Outcome> {
    let mover = state.to_move();
    [mover, mover.opponent()]
        .into_iter()
        .find(|&p| state.count(p) == 0)
        .map(|p| Outcome::Win(p.opponent()))
}

pub(super) fn home_filled(spec: &GameSpec, state: &GameState) -> Option<Outcome> {
    let last = state.to_move().opponent();
    [last, last.opponent()].into_iter().find_map(|p| {
        let goal = spec.board().region(goal_region(p))?;
        goal.iter().all(|&q| state.at(q) == Some(p)).then_some(Outcome::Win(p))
    })
}

fn goal_region(p: Player) -> &'static str {
    match p {
        Player::P1 => "goal1",
        Player::P2 => "goal2",
    }
}

pub(super) fn insertions(spec: &GameSpec, state: &GameState) -> Vec<Move> {
    spec.board()
        .positions()
        .filter(|&p| state.at(p).is_none())
        .map(|to| Move::Insert { to })
        .collect()
}

pub(super) fn steps(spec: &GameSpec, state: &GameState) -> Vec<Move> {
    let board = spec.board();
    let mut out = Vec::new();
    for from in state.pieces(state.to_move()) {
        for &to in board.neighbors(from) {
            if state.at(to).is_none() {
                out.push(Move::Step { from, to });
            }
        }
    }
    out
}

pub(super) fn alquerque_moves(spec: &GameSpec, state: &GameState) -> Vec<Move> {
    let multi = spec.variant().alquerque_captures == AlquerqueCaptures::ForcedMulti;
    let mut captures = Vec::new();
    let mut scratch: Vec<Option<Player>> = state.cells().to_vec();
    let mover = state.to_move();
    for from in state.pieces(mover) {
        let mut path = Vec::new();
        capture_sequences(spec, &mut scratch, mover, from, from, multi, &mut path, &mut captures);
    }
    if multi && !captures.is_empty() {
        captures.sort();
        return captures;
    }
    let mut moves = steps(spec, state);
    moves.extend(captures);
    moves.sort();
    moves
}

/// Depth-first enumeration of every capture sequence from `cur`; every
/// prefix is its own move. Captured pieces leave the board immediately,
/// so a piece can never be jumped twice.
#[allow(clippy::too_many_arguments)]
fn capture_sequences(
    spec: &GameSpec,
    cells: &mut [Option<Player>],
    mover: Player,
    origin: Pos,
    cur: Pos,
    multi: bool,
    path: &mut Vec<Hop>,
    out: &mut Vec<Move>,
) {
    for j in spec.board().jumps_from(cur) {
        if cells[j.over as usize] != Some(mover.opponent()) || cells[j.to as usize].is_some() {
            continue;
        }
        cells[cur as usize] = None;
        cells[j.over as usize] = None;
        cells[j.to as usize] = Some(mover);
        path.push(Hop { over: j.over, to: j.to });
        out.push(Move::Jump { from: origin, hops: path.clone() });
        if multi && path.len() < MAX_HOPS {
            capture_sequences(spec, cells, mover, origin, j.to, multi, path, out);
        }
        path.pop();
        cells[j.to as usize] = None;
        cells[j.over as usize] = Some(mover.opponent());
        cells[cur as usize] = Some(mover);
    }
}

pub(super) fn diagnose(spec: &GameSpec, state: &GameState, mv: &Move) -> RuleViolation {
    let board = spec.board();
    let mover = state.to_move();
    let unknown = mv_positions(mv).into_iter().find(|p| !board.contains(*p));
    if let Some(p) = unknown {
        return RuleViolation::UnknownPosition(p);
    }
    match mv {
        Move::Pass => RuleViolation::PassNotAllowed,
        Move::Insert { to } => {
            if state.phase() == Phase::Movement {
                if spec.placement == Placement::None {
                    RuleViolation::WrongMoveKind
                } else {
                    RuleViolation::NoPiecesToPlace
                }
            } else if state.at(*to).is_some() {
                RuleViolation::Occupied(*to)
            } else {
                RuleViolation::Other
            }
        }
        Move::Step { from, to } => {
            if state.phase() == Phase::Placement {
                if spec.placement == Placement::Unlimited {
                    RuleViolation::WrongMoveKind
                } else {
                    RuleViolation::MustPlace
                }
            } else if state.at(*from) != Some(mover) {
                RuleViolation::NotYourPiece(*from)
            } else if !board.adjacent(*from, *to) {
                RuleViolation::NotConnected(*from, *to)
            } else if state.at(*to).is_some() {
                RuleViolation::Occupied(*to)
            } else if spec.id == GameId::Alquerque && spec.generate(state).iter().any(|m| m.captures() > 0) {
                RuleViolation::CaptureRequired
            } else {
                RuleViolation::Other
            }
        }
        Move::Jump { from, hops } => {
            if spec.id != GameId::Alquerque {
                return RuleViolation::NoCaptures;
            }
            if state.at(*from) != Some(mover) {
                return RuleViolation::NotYourPiece(*from);
            }
            if hops.is_empty() {
                return RuleViolation::InvalidJump;
            }
            if hops.len() > 1 && spec.variant().alquerque_captures == AlquerqueCaptures::OptionalSingle {
                return RuleViolation::MultiCaptureNotAllowed;
            }
            let mut cells = state.cells().to_vec();
            let mut cur = *from;
            for h in hops {
                let line = board.jumps_from(cur).iter().any(|j| j.over == h.over && j.to == h.to);
                if !line || cells[h.over as usize] != Some(mover.opponent()) || cells[h.to as usize].is_some() {
                    return RuleViolation::InvalidJump;
                }
                cells[cur as usize] = None;
                cells[h.over as usize] = None;
                cells[h.to as usize] = Some(mover);
                cur = h.to;
            }
            RuleViolation::Other
        }
    }
}

fn mv_positions(mv: &Move) -> Vec<Pos> {
    match mv {
        Move::Insert { to } => vec![*to],
        Move::Step { from, to } => vec![*from, *to],
        Move::Jump { from, hops } => std::iter::once(*from).chain(hops.iter().flat_map(|h| [h.over, h.to])).collect(),
        Move::Pass => Vec::new(),
    }
}
