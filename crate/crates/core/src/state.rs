use std::fmt;

use serde::{Deserialize, Serialize};

use crate::board::Pos;
use crate::player::Player;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    /// Pieces are inserted onto empty positions.
    Placement,
    /// Pieces already on the board move or capture.
    Movement,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Placement => "placement",
            Phase::Movement => "movement",
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Immutable position snapshot. Moves produce fresh states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameState {
    cells: Box<[Option<Player>]>,
    to_move: Player,
    phase: Phase,
    ply_count: u32,
}

impl GameState {
    pub fn new(cells: Vec<Option<Player>>, to_move: Player, phase: Phase, ply_count: u32) -> Self {
        GameState { cells: cells.into_boxed_slice(), to_move, phase, ply_count }
    }

    pub fn cells(&self) -> &[Option<Player>] {
        &self.cells
    }

    #[inline]
    pub fn at(&self, p: Pos) -> Option<Player> {
        self.cells[p as usize]
    }

    pub fn to_move(&self) -> Player {
        self.to_move
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn ply_count(&self) -> u32 {
        self.ply_count
    }

    pub fn count(&self, player: Player) -> usize {
        self.cells.iter().filter(|c| **c == Some(player)).count()
    }

    pub fn pieces(&self, player: Player) -> impl Iterator<Item = Pos> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(move |(_, c)| **c == Some(player))
            .map(|(i, _)| i as Pos)
    }

    /// Occupancy as one mark per position: `.`, `1` or `2`.
    pub fn occupancy_string(&self) -> String {
        self.cells.iter().map(|c| c.map_or('.', Player::mark)).collect()
    }

    /// Canonical digest of occupancy, player to move and phase. The ply
    /// counter is left out so repeated positions share a digest.
    pub fn digest(&self) -> String {
        format!("{}|{}|{}", self.occupancy_string(), self.to_move, self.phase)
    }

    /// 64-bit FNV-1a of [`GameState::digest`].
    pub fn digest_hash(&self) -> u64 {
        fnv1a(self.digest().as_bytes())
    }

    /// The same position with the two colours swapped.
    pub fn color_swapped(&self) -> GameState {
        GameState {
            cells: self.cells.iter().map(|c| c.map(Player::opponent)).collect(),
            to_move: self.to_move.opponent(),
            phase: self.phase,
            ply_count: self.ply_count,
        }
    }

    pub(crate) fn successor(&self, cells: Box<[Option<Player>]>, phase: Phase) -> GameState {
        GameState { cells, to_move: self.to_move.opponent(), phase, ply_count: self.ply_count + 1 }
    }

    pub(crate) fn cells_mut_copy(&self) -> Box<[Option<Player>]> {
        self.cells.clone()
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}
