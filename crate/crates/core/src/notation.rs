//! Canonical text notation for positions.
//!
//! One `key=value` record per line, always in this order:
//!
//! ```text
//! game=tictactoe
//! variant=default
//! occupancy=1...2....
//! to_move=P1
//! phase=placement
//! ply_count=2
//! ```
//!
//! `occupancy` holds one mark per position id (`.` empty, `1`, `2`). The
//! parser also accepts `;` as a record separator so a position fits on one
//! command-line argument.

use crate::error::{EngineError, ParseError, Result};
use crate::games::{GameId, GameSpec, RuleVariant};
use crate::player::Player;
use crate::state::{GameState, Phase};

const KEYS: [&str; 6] = ["game", "variant", "occupancy", "to_move", "phase", "ply_count"];

pub fn serialize(spec: &GameSpec, state: &GameState) -> String {
    format!(
        "game={}\nvariant={}\noccupancy={}\nto_move={}\nphase={}\nply_count={}\n",
        spec.id().slug(),
        spec.variant().name(),
        state.occupancy_string(),
        state.to_move(),
        state.phase(),
        state.ply_count()
    )
}

/// Parses a position and the game it belongs to. The state is checked
/// against the game's rules for shape (board size, phase, piece counts).
pub fn parse(text: &str) -> Result<(GameSpec, GameState)> {
    let mut values: [Option<(&str, usize)>; 6] = [None; 6];
    let mut offset = 0;
    for record in text.split(['\n', ';']) {
        let start = offset;
        offset += record.len() + 1;
        let lead = record.len() - record.trim_start().len();
        let rec = record.trim();
        if rec.is_empty() {
            continue;
        }
        let (key, value) = rec
            .split_once('=')
            .ok_or_else(|| ParseError::new(start + lead, format!("expected key=value, found `{rec}`")))?;
        let slot = KEYS
            .iter()
            .position(|k| *k == key.trim())
            .ok_or_else(|| ParseError::new(start + lead, format!("unknown key `{}`", key.trim())))?;
        if values[slot].is_some() {
            return Err(ParseError::new(start + lead, format!("duplicate key `{}`", KEYS[slot])).into());
        }
        let value_off = start + lead + key.len() + 1;
        let vlead = value.len() - value.trim_start().len();
        values[slot] = Some((value.trim(), value_off + vlead));
    }
    let get = |i: usize| values[i].ok_or_else(|| ParseError::new(text.len(), format!("missing key `{}`", KEYS[i])));

    let (game, off) = get(0)?;
    let id: GameId = game.parse().map_err(|e: ParseError| e.shifted(off))?;
    let (variant, off) = get(1)?;
    let variant = RuleVariant::named(id, variant).map_err(|e| ParseError::new(off, e.to_string()))?;
    let spec = GameSpec::new(id, variant)?;

    let (occ, off) = get(2)?;
    let mut cells = Vec::with_capacity(occ.len());
    for (i, ch) in occ.char_indices() {
        cells.push(match ch {
            '.' => None,
            '1' => Some(Player::P1),
            '2' => Some(Player::P2),
            other => return Err(ParseError::new(off + i, format!("bad occupancy mark `{other}`")).into()),
        });
    }
    if cells.len() != spec.board().len() {
        return Err(ParseError::new(
            off,
            format!("occupancy has {} marks, {} has {} positions", cells.len(), id, spec.board().len()),
        )
        .into());
    }
    let (to_move, off) = get(3)?;
    let to_move: Player = to_move.parse().map_err(|e: ParseError| e.shifted(off))?;
    let (phase, off) = get(4)?;
    let phase = match phase {
        "placement" => Phase::Placement,
        "movement" => Phase::Movement,
        other => return Err(ParseError::new(off, format!("unknown phase `{other}`")).into()),
    };
    let (ply, off) = get(5)?;
    let ply: u32 = ply.parse().map_err(|_| ParseError::new(off, format!("bad ply count `{ply}`")))?;

    let state = GameState::new(cells, to_move, phase, ply);
    spec.validate_state(&state).map_err(|e| match e {
        EngineError::InvalidState(m) => EngineError::Parse(ParseError::new(0, m)),
        other => other,
    })?;
    Ok((spec, state))
}
