use std::fmt;

use serde::{Deserialize, Serialize};

use crate::board::{BoardGraph, Pos};
use crate::error::ParseError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hop {
    pub over: Pos,
    pub to: Pos,
}

/// A move for the player to move. Variant order is the canonical move order
/// (insert < step < jump < pass), and the derived `Ord` then compares the
/// origin before the destination.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    Insert { to: Pos },
    Step { from: Pos, to: Pos },
    Jump { from: Pos, hops: Vec<Hop> },
    Pass,
}

impl Move {
    pub fn captures(&self) -> usize {
        match self {
            Move::Jump { hops, .. } => hops.len(),
            _ => 0,
        }
    }

    /// Parses the compact text form: `4` (insert), `3-4` (step),
    /// `3x13x23` (capture sequence by landing points) or `pass`.
    /// Jumped-over positions are resolved through the board's jump triples.
    pub fn parse(text: &str, board: &BoardGraph) -> Result<Move, ParseError> {
        let t = text.trim();
        let lead = text.len() - text.trim_start().len();
        let pos_at = |s: &str, off: usize| -> Result<Pos, ParseError> {
            let p: Pos = s
                .trim()
                .parse()
                .map_err(|_| ParseError::new(lead + off, format!("bad position `{s}`")))?;
            if board.contains(p) {
                Ok(p)
            } else {
                Err(ParseError::new(lead + off, format!("position {p} is not on the board")))
            }
        };
        if t.eq_ignore_ascii_case("pass") {
            return Ok(Move::Pass);
        }
        if t.is_empty() {
            return Err(ParseError::new(lead, "empty move"));
        }
        if let Some((a, b)) = t.split_once('-') {
            return Ok(Move::Step { from: pos_at(a, 0)?, to: pos_at(b, a.len() + 1)? });
        }
        if t.contains('x') {
            let mut off = 0;
            let mut points = Vec::new();
            for part in t.split('x') {
                points.push((pos_at(part, off)?, off));
                off += part.len() + 1;
            }
            let from = points[0].0;
            let mut hops = Vec::new();
            for w in points.windows(2) {
                let ((a, _), (b, boff)) = (w[0], w[1]);
                let j = board
                    .jumps_from(a)
                    .iter()
                    .find(|j| j.to == b)
                    .ok_or_else(|| ParseError::new(lead + boff, format!("no capture line from {a} to {b}")))?;
                hops.push(Hop { over: j.over, to: b });
            }
            return Ok(Move::Jump { from, hops });
        }
        Ok(Move::Insert { to: pos_at(t, 0)? })
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Insert { to } => write!(f, "{to}"),
            Move::Step { from, to } => write!(f, "{from}-{to}"),
            Move::Jump { from, hops } => {
                write!(f, "{from}")?;
                for h in hops {
                    write!(f, "x{}", h.to)?;
                }
                Ok(())
            }
            Move::Pass => f.write_str("pass"),
        }
    }
}
