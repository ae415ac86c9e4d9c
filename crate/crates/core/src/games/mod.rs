//! The six concrete games. Each game is a [`GameSpec`]: a board graph loaded
//! from its data file plus the rule family that interprets it.

mod movement;
mod reversi;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::board::{BoardGraph, Pos};
use crate::error::{EngineError, ParseError, Result, RuleViolation};
use crate::model::{Expansion, ForwardModel};
use crate::moves::Move;
use crate::player::{Outcome, Player};
use crate::state::{GameState, Phase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GameId {
    TicTacToe,
    Tapatan,
    Alquerque,
    TsoroYematatu,
    FiveFieldKono,
    Reversi,
}

impl GameId {
    pub const ALL: [GameId; 6] = [
        GameId::TicTacToe,
        GameId::Tapatan,
        GameId::Alquerque,
        GameId::TsoroYematatu,
        GameId::FiveFieldKono,
        GameId::Reversi,
    ];

    /// Canonical lowercase name used on the command line, in notation and
    /// in URLs.
    pub fn slug(self) -> &'static str {
        match self {
            GameId::TicTacToe => "tictactoe",
            GameId::Tapatan => "tapatan",
            GameId::Alquerque => "alquerque",
            GameId::TsoroYematatu => "tsoro-yematatu",
            GameId::FiveFieldKono => "five-field-kono",
            GameId::Reversi => "reversi",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            GameId::TicTacToe => "Tic-Tac-Toe",
            GameId::Tapatan => "Tapatan",
            GameId::Alquerque => "Alquerque",
            GameId::TsoroYematatu => "Tsoro Yematatu",
            GameId::FiveFieldKono => "Five Field Kono",
            GameId::Reversi => "Reversi",
        }
    }

    pub fn board_text(self) -> &'static str {
        match self {
            GameId::TicTacToe => include_str!("../../boards/tictactoe.board"),
            GameId::Tapatan => include_str!("../../boards/tapatan.board"),
            GameId::Alquerque => include_str!("../../boards/alquerque.board"),
            GameId::TsoroYematatu => include_str!("../../boards/tsoro.board"),
            GameId::FiveFieldKono => include_str!("../../boards/kono.board"),
            GameId::Reversi => include_str!("../../boards/reversi.board"),
        }
    }

    pub fn board(self) -> BoardGraph {
        BoardGraph::parse(self.board_text()).expect("bundled board files are valid")
    }

    pub fn valid_names() -> String {
        GameId::ALL.iter().map(|g| g.slug()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for GameId {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let norm: String = s.trim().to_ascii_lowercase().chars().filter(|c| c.is_ascii_alphanumeric()).collect();
        Ok(match norm.as_str() {
            "tictactoe" => GameId::TicTacToe,
            "tapatan" => GameId::Tapatan,
            "alquerque" => GameId::Alquerque,
            "tsoroyematatu" | "tsoro" => GameId::TsoroYematatu,
            "fivefieldkono" | "kono" => GameId::FiveFieldKono,
            "reversi" | "othello" => GameId::Reversi,
            _ => {
                return Err(ParseError::new(
                    0,
                    format!("unknown game `{}` (valid games: {})", s.trim(), GameId::valid_names()),
                ))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TapatanStart {
    #[default]
    Prefilled,
    EmptyWithPlacement,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlquerqueCaptures {
    #[default]
    ForcedMulti,
    OptionalSingle,
}

/// Rule switches. The defaults are the mobile-platform rules; the
/// alternatives are the research-framework ones.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleVariant {
    pub tapatan_start: TapatanStart,
    pub alquerque_captures: AlquerqueCaptures,
}

impl RuleVariant {
    /// Named variant for `game`: `default` or `ludii`.
    pub fn named(game: GameId, name: &str) -> Result<RuleVariant> {
        match (name.trim().to_ascii_lowercase().as_str(), game) {
            ("default" | "lobogames" | "", _) => Ok(RuleVariant::default()),
            ("ludii", GameId::Tapatan) => {
                Ok(RuleVariant { tapatan_start: TapatanStart::EmptyWithPlacement, ..Default::default() })
            }
            ("ludii", GameId::Alquerque) => {
                Ok(RuleVariant { alquerque_captures: AlquerqueCaptures::OptionalSingle, ..Default::default() })
            }
            ("ludii", GameId::TicTacToe | GameId::Reversi) => Ok(RuleVariant::default()),
            (other, _) => Err(EngineError::Config(format!("variant `{other}` is not available for {game}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        if *self == RuleVariant::default() {
            "default"
        } else {
            "ludii"
        }
    }

    fn check(&self, game: GameId) -> Result<()> {
        if self.tapatan_start != TapatanStart::default() && game != GameId::Tapatan {
            return Err(EngineError::Config(format!("tapatan start rule does not apply to {game}")));
        }
        if self.alquerque_captures != AlquerqueCaptures::default() && game != GameId::Alquerque {
            return Err(EngineError::Config(format!("alquerque capture rule does not apply to {game}")));
        }
        Ok(())
    }
}

/// How many pieces a player inserts before moving; `None` means the game
/// is placement-only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Placement {
    Unlimited,
    Quota(usize),
    None,
}

/// A game's complete forward model.
#[derive(Debug, Clone)]
pub struct GameSpec {
    id: GameId,
    variant: RuleVariant,
    board: Arc<BoardGraph>,
    placement: Placement,
    /// Reversi only: per position, the eight straight rays.
    rays: Arc<Vec<Vec<Vec<Pos>>>>,
    align: usize,
}

pub fn new_game(id: GameId, variant: RuleVariant) -> Result<GameSpec> {
    GameSpec::new(id, variant)
}

impl GameSpec {
    pub fn new(id: GameId, variant: RuleVariant) -> Result<GameSpec> {
        variant.check(id)?;
        let board = id.board();
        let placement = match id {
            GameId::TicTacToe | GameId::Reversi => Placement::Unlimited,
            GameId::Tapatan if variant.tapatan_start == TapatanStart::EmptyWithPlacement => Placement::Quota(3),
            GameId::TsoroYematatu => Placement::Quota(4),
            _ => Placement::None,
        };
        let align = match id {
            GameId::TicTacToe | GameId::Tapatan => 3,
            GameId::TsoroYematatu => 4,
            _ => 0,
        };
        let rays = if id == GameId::Reversi { reversi::rays(&board) } else { Vec::new() };
        Ok(GameSpec { id, variant, board: Arc::new(board), placement, rays: Arc::new(rays), align })
    }

    /// Convenience constructor from a game name and a variant name.
    pub fn named(game: &str, variant: &str) -> Result<GameSpec> {
        let id: GameId = game.parse()?;
        GameSpec::new(id, RuleVariant::named(id, variant)?)
    }

    pub fn id(&self) -> GameId {
        self.id
    }

    pub fn variant(&self) -> RuleVariant {
        self.variant
    }

    pub fn board(&self) -> &BoardGraph {
        &self.board
    }

    pub(crate) fn rays(&self) -> &[Vec<Vec<Pos>>] {
        &self.rays
    }

    /// Number of pieces in an aligned win, if this is an alignment game.
    pub fn alignment_length(&self) -> Option<usize> {
        (self.align > 0).then_some(self.align)
    }

    fn uses_setup(&self) -> bool {
        !matches!(self.placement, Placement::Quota(_))
    }

    pub(crate) fn phase_for(&self, cells: &[Option<Player>], mover: Player) -> Phase {
        match self.placement {
            Placement::Unlimited => Phase::Placement,
            Placement::None => Phase::Movement,
            Placement::Quota(q) => {
                if cells.iter().filter(|c| **c == Some(mover)).count() < q {
                    Phase::Placement
                } else {
                    Phase::Movement
                }
            }
        }
    }

    /// The goal-based result of `state`, if a goal is met: alignment,
    /// capturing every opponent piece, filling the opponent's home, or the
    /// final piece count in Reversi.
    pub fn win_condition(&self, state: &GameState) -> Option<Outcome> {
        match self.id {
            GameId::TicTacToe | GameId::Tapatan | GameId::TsoroYematatu => movement::aligned(self, state),
            GameId::Alquerque => movement::wiped_out(state),
            GameId::FiveFieldKono => movement::home_filled(self, state),
            GameId::Reversi => reversi::final_count(self, state),
        }
    }

    /// Checks that `state` is a position this game can reach in shape:
    /// correct board size, consistent phase and piece counts.
    pub fn validate_state(&self, state: &GameState) -> Result<()> {
        if state.cells().len() != self.board.len() {
            return Err(EngineError::InvalidState(format!(
                "occupancy has {} positions, {} has {}",
                state.cells().len(),
                self.id,
                self.board.len()
            )));
        }
        let expected = self.phase_for(state.cells(), state.to_move());
        if state.phase() != expected {
            return Err(EngineError::InvalidState(format!("phase should be {expected}")));
        }
        if let Placement::Quota(q) = self.placement {
            for p in Player::BOTH {
                if state.count(p) > q {
                    return Err(EngineError::InvalidState(format!("{p} has more than {q} pieces")));
                }
            }
        }
        let cap = match self.id {
            GameId::Alquerque => 12,
            GameId::FiveFieldKono => 7,
            GameId::Tapatan => 3,
            _ => usize::MAX,
        };
        for p in Player::BOTH {
            if state.count(p) > cap {
                return Err(EngineError::InvalidState(format!("{p} has more than {cap} pieces")));
            }
        }
        Ok(())
    }

    pub(crate) fn generate(&self, state: &GameState) -> Vec<Move> {
        match self.id {
            GameId::Reversi => reversi::placements(self, state, state.to_move()),
            GameId::Alquerque => movement::alquerque_moves(self, state),
            _ => match state.phase() {
                Phase::Placement => movement::insertions(self, state),
                Phase::Movement => movement::steps(self, state),
            },
        }
    }
}

impl ForwardModel for GameSpec {
    fn name(&self) -> String {
        self.id.slug().to_string()
    }

    fn initial_state(&self) -> GameState {
        let mut cells = vec![None; self.board.len()];
        if self.uses_setup() {
            for p in Player::BOTH {
                for &pos in self.board.setup(p) {
                    cells[pos as usize] = Some(p);
                }
            }
        }
        let phase = self.phase_for(&cells, Player::P1);
        GameState::new(cells, Player::P1, phase, 0)
    }

    fn expand(&self, state: &GameState) -> Expansion {
        if self.id == GameId::Reversi {
            return reversi::expand(self, state);
        }
        if let Some(outcome) = self.win_condition(state) {
            return Expansion::Terminal(outcome);
        }
        let moves = self.generate(state);
        if !moves.is_empty() {
            return Expansion::Moves(moves);
        }
        match self.id {
            GameId::TicTacToe => Expansion::Terminal(Outcome::Draw),
            // a player who cannot move loses
            _ => Expansion::Terminal(Outcome::Win(state.to_move().opponent())),
        }
    }

    fn apply_unchecked(&self, state: &GameState, mv: &Move) -> GameState {
        let mover = state.to_move();
        let mut cells = state.cells_mut_copy();
        match mv {
            Move::Insert { to } => {
                cells[*to as usize] = Some(mover);
                if self.id == GameId::Reversi {
                    reversi::flip(self, &mut cells, *to, mover);
                }
            }
            Move::Step { from, to } => {
                cells[*from as usize] = None;
                cells[*to as usize] = Some(mover);
            }
            Move::Jump { from, hops } => {
                cells[*from as usize] = None;
                for h in hops {
                    cells[h.over as usize] = None;
                }
                if let Some(last) = hops.last() {
                    cells[last.to as usize] = Some(mover);
                }
            }
            Move::Pass => {}
        }
        let phase = self.phase_for(&cells, mover.opponent());
        state.successor(cells, phase)
    }

    fn diagnose(&self, state: &GameState, mv: &Move) -> RuleViolation {
        if self.is_terminal(state) {
            return RuleViolation::GameOver;
        }
        match self.id {
            GameId::Reversi => reversi::diagnose(self, state, mv),
            _ => movement::diagnose(self, state, mv),
        }
    }
}
