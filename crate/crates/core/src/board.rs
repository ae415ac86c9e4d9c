//! Board graphs: positions with display coordinates, a symmetric adjacency
//! relation, optional capture-jump triples, win lines, named regions and
//! the initial piece layout.
//!
//! Boards are stored as small text files:
//!
//! ```text
//! boardgraph 1
//! name tapatan
//! extent 3 3
//! pos 0 0 0
//! edge 0 1
//! jump 0 1 2
//! line 0 1 2
//! region goal1 0 1 2
//! setup P1 0 2 7
//! ```
//!
//! Blank lines and `#` comments are ignored. Positions must be listed with
//! ids `0..n` in order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::ParseError;
use crate::player::Player;

pub type Pos = u8;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Jump {
    pub from: Pos,
    pub over: Pos,
    pub to: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoardGraph {
    name: String,
    extent: (i32, i32),
    coords: Vec<(i32, i32)>,
    #[serde(skip)]
    adjacency: Vec<Vec<Pos>>,
    edges: Vec<(Pos, Pos)>,
    jumps: Vec<Jump>,
    #[serde(skip)]
    jumps_from: Vec<Vec<Jump>>,
    lines: Vec<Vec<Pos>>,
    regions: BTreeMap<String, Vec<Pos>>,
    setup: [Vec<Pos>; 2],
}

impl BoardGraph {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        (0..self.coords.len()).map(|p| p as Pos)
    }

    pub fn contains(&self, p: Pos) -> bool {
        (p as usize) < self.coords.len()
    }

    pub fn coord(&self, p: Pos) -> (i32, i32) {
        self.coords[p as usize]
    }

    pub fn extent(&self) -> (i32, i32) {
        self.extent
    }

    /// Sorted neighbours of `p`.
    pub fn neighbors(&self, p: Pos) -> &[Pos] {
        &self.adjacency[p as usize]
    }

    pub fn adjacent(&self, a: Pos, b: Pos) -> bool {
        self.contains(a) && self.adjacency[a as usize].binary_search(&b).is_ok()
    }

    pub fn edges(&self) -> &[(Pos, Pos)] {
        &self.edges
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// Jump triples starting at `p`, sorted by (over, to).
    pub fn jumps_from(&self, p: Pos) -> &[Jump] {
        &self.jumps_from[p as usize]
    }

    pub fn lines(&self) -> &[Vec<Pos>] {
        &self.lines
    }

    pub fn region(&self, name: &str) -> Option<&[Pos]> {
        self.regions.get(name).map(Vec::as_slice)
    }

    pub fn setup(&self, player: Player) -> &[Pos] {
        &self.setup[player.index()]
    }

    /// Position at the given coordinate, if any.
    pub fn at(&self, xy: (i32, i32)) -> Option<Pos> {
        self.coords.iter().position(|&c| c == xy).map(|p| p as Pos)
    }

    /// Positions reached by repeatedly stepping `dir` along connected edges,
    /// starting next to `from` (excluded).
    pub fn ray(&self, from: Pos, dir: (i32, i32)) -> Vec<Pos> {
        let mut out = Vec::new();
        let mut cur = from;
        loop {
            let (x, y) = self.coord(cur);
            match self.at((x + dir.0, y + dir.1)) {
                Some(next) if self.adjacent(cur, next) => {
                    out.push(next);
                    cur = next;
                }
                _ => break,
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<BoardGraph, ParseError> {
        let mut builder = Builder::default();
        let mut saw_header = false;
        let mut offset = 0;
        for raw in text.split_inclusive('\n') {
            let line_offset = offset;
            offset += raw.len();
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lead = raw.len() - raw.trim_start().len();
            let at = |msg: String| ParseError::new(line_offset + lead, msg);
            let mut fields = line.split_whitespace();
            let key = fields.next().unwrap_or_default();
            let rest: Vec<&str> = fields.collect();
            if !saw_header {
                if key != "boardgraph" {
                    return Err(at("expected `boardgraph <version>` header".into()));
                }
                match rest.as_slice() {
                    [v] if v.parse::<u32>() == Ok(FORMAT_VERSION) => {}
                    _ => return Err(at(format!("unsupported board format version (expected {FORMAT_VERSION})"))),
                }
                saw_header = true;
                continue;
            }
            builder.record(key, &rest).map_err(at)?;
        }
        if !saw_header {
            return Err(ParseError::new(0, "empty board file"));
        }
        builder.finish().map_err(|m| ParseError::new(text.len(), m))
    }

    /// Renders the board back into its file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "boardgraph {FORMAT_VERSION}");
        let _ = writeln!(out, "name {}", self.name);
        let _ = writeln!(out, "extent {} {}", self.extent.0, self.extent.1);
        for (i, (x, y)) in self.coords.iter().enumerate() {
            let _ = writeln!(out, "pos {i} {x} {y}");
        }
        for (a, b) in &self.edges {
            let _ = writeln!(out, "edge {a} {b}");
        }
        for j in &self.jumps {
            let _ = writeln!(out, "jump {} {} {}", j.from, j.over, j.to);
        }
        for line in &self.lines {
            let _ = writeln!(out, "line {}", join(line));
        }
        for (name, ps) in &self.regions {
            let _ = writeln!(out, "region {name} {}", join(ps));
        }
        for p in Player::BOTH {
            if !self.setup[p.index()].is_empty() {
                let _ = writeln!(out, "setup {p} {}", join(&self.setup[p.index()]));
            }
        }
        out
    }
}

fn join(ps: &[Pos]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Default)]
struct Builder {
    name: Option<String>,
    extent: Option<(i32, i32)>,
    coords: Vec<(i32, i32)>,
    edges: BTreeSet<(Pos, Pos)>,
    jumps: Vec<Jump>,
    lines: Vec<Vec<Pos>>,
    regions: BTreeMap<String, Vec<Pos>>,
    setup: [Vec<Pos>; 2],
}

impl Builder {
    fn pos(&self, s: &str) -> Result<Pos, String> {
        let p: Pos = s.parse().map_err(|_| format!("bad position id `{s}`"))?;
        if (p as usize) < self.coords.len() {
            Ok(p)
        } else {
            Err(format!("unknown position {p}"))
        }
    }

    fn positions(&self, items: &[&str]) -> Result<Vec<Pos>, String> {
        items.iter().map(|s| self.pos(s)).collect()
    }

    fn record(&mut self, key: &str, rest: &[&str]) -> Result<(), String> {
        let int = |s: &str| s.parse::<i32>().map_err(|_| format!("bad integer `{s}`"));
        match (key, rest) {
            ("name", [n]) => self.name = Some((*n).to_string()),
            ("extent", [w, h]) => self.extent = Some((int(w)?, int(h)?)),
            ("pos", [id, x, y]) => {
                let id: usize = id.parse().map_err(|_| format!("bad position id `{id}`"))?;
                if id != self.coords.len() {
                    return Err(format!("position {id} out of order (expected {})", self.coords.len()));
                }
                if id > Pos::MAX as usize {
                    return Err("too many positions".into());
                }
                let xy = (int(x)?, int(y)?);
                if self.coords.contains(&xy) {
                    return Err(format!("duplicate coordinate {xy:?}"));
                }
                self.coords.push(xy);
            }
            ("edge", [a, b]) => {
                let (a, b) = (self.pos(a)?, self.pos(b)?);
                if a == b {
                    return Err(format!("self edge on {a}"));
                }
                if !self.edges.insert((a.min(b), a.max(b))) {
                    return Err(format!("duplicate edge {a} {b}"));
                }
            }
            ("jump", [f, o, t]) => {
                let j = Jump { from: self.pos(f)?, over: self.pos(o)?, to: self.pos(t)? };
                let adj = |a: Pos, b: Pos| self.edges.contains(&(a.min(b), a.max(b)));
                if !adj(j.from, j.over) || !adj(j.over, j.to) {
                    return Err(format!("jump {} {} {}: over must be adjacent to both ends", j.from, j.over, j.to));
                }
                self.jumps.push(j);
            }
            ("line", ps) if ps.len() >= 2 => {
                let line = self.positions(ps)?;
                self.lines.push(line);
            }
            ("region", [name, ps @ ..]) if !ps.is_empty() => {
                let mut r = self.positions(ps)?;
                r.sort_unstable();
                self.regions.insert((*name).to_string(), r);
            }
            ("setup", [who, ps @ ..]) if !ps.is_empty() => {
                let who: Player = who.parse().map_err(|e: ParseError| e.message)?;
                let mut r = self.positions(ps)?;
                r.sort_unstable();
                self.setup[who.index()] = r;
            }
            _ => return Err(format!("malformed `{key}` record")),
        }
        Ok(())
    }

    fn finish(self) -> Result<BoardGraph, String> {
        let name = self.name.ok_or("missing `name` record")?;
        if self.coords.is_empty() {
            return Err("board has no positions".into());
        }
        let extent = self.extent.unwrap_or_else(|| {
            let w = self.coords.iter().map(|c| c.0).max().unwrap_or(0) + 1;
            let h = self.coords.iter().map(|c| c.1).max().unwrap_or(0) + 1;
            (w, h)
        });
        if self.setup[0].iter().any(|p| self.setup[1].contains(p)) {
            return Err("setup positions overlap".into());
        }
        let n = self.coords.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        adjacency.iter_mut().for_each(|v| v.sort_unstable());
        let mut jumps = self.jumps;
        jumps.sort_unstable();
        jumps.dedup();
        let mut jumps_from = vec![Vec::new(); n];
        for j in &jumps {
            jumps_from[j.from as usize].push(*j);
        }
        Ok(BoardGraph {
            name,
            extent,
            coords: self.coords,
            adjacency,
            edges: self.edges.into_iter().collect(),
            jumps,
            jumps_from,
            lines: self.lines,
            regions: self.regions,
            setup: self.setup,
        })
    }
}
