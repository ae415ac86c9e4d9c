//! Agent-vs-agent series: alternating first player, per-match seeds, and
//! win/loss/draw reporting.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::agents::AgentConfig;
use crate::clock::{Clock, MonotonicClock};
use crate::error::{EngineError, Result};
use crate::games::{GameSpec, RuleVariant};
use crate::matches::{run_match_with_clock, Agent, MatchError, DEFAULT_TURN_LIMIT};
use crate::player::{Outcome, Player};
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    /// Side playing first in match `index`: A in even matches, B in odd.
    pub fn first_in(index: u32) -> Side {
        if index.is_multiple_of(2) {
            Side::A
        } else {
            Side::B
        }
    }

    pub fn seat(self, index: u32) -> Player {
        if Side::first_in(index) == self {
            Player::P1
        } else {
            Player::P2
        }
    }

    fn of_seat(seat: Player, index: u32) -> Side {
        if Side::A.seat(index) == seat {
            Side::A
        } else {
            Side::B
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesOutcome {
    A,
    B,
    Draw,
}

/// One line of the record stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchRecord {
    pub game: String,
    #[serde(rename = "match")]
    pub index: u32,
    pub first: Side,
    pub outcome: SeriesOutcome,
    pub plies: u32,
    pub cutoff: bool,
    pub move_ms: Vec<f64>,
    /// Set when the match was aborted; the offending side is scored a loss.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub game: String,
    pub variant: String,
    pub agent_a: String,
    pub agent_b: String,
    pub n_games: u32,
    pub turn_limit: u32,
    pub master_seed: u64,
    pub wins_a: u32,
    pub wins_b: u32,
    pub draws: u32,
    pub matches: Vec<MatchRecord>,
}

impl SeriesResult {
    pub fn played(&self) -> u32 {
        self.wins_a + self.wins_b + self.draws
    }

    fn pct(&self, n: u32) -> f64 {
        if self.played() == 0 {
            0.0
        } else {
            100.0 * f64::from(n) / f64::from(self.played())
        }
    }

    pub fn pct_a(&self) -> f64 {
        self.pct(self.wins_a)
    }

    pub fn pct_b(&self) -> f64 {
        self.pct(self.wins_b)
    }

    pub fn pct_draw(&self) -> f64 {
        self.pct(self.draws)
    }

    /// `"55% / 40% / 5%"`.
    pub fn percent_row(&self) -> String {
        format!("{} / {} / {}", fmt_pct(self.pct_a()), fmt_pct(self.pct_b()), fmt_pct(self.pct_draw()))
    }
}

fn fmt_pct(p: f64) -> String {
    let rounded = (p * 10.0).round() / 10.0;
    if rounded.fract() == 0.0 {
        format!("{rounded:.0}%")
    } else {
        format!("{rounded:.1}%")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesOptions {
    pub n_games: u32,
    pub turn_limit: u32,
    pub master_seed: u64,
    /// Matches played concurrently.
    pub workers: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { n_games: 20, turn_limit: DEFAULT_TURN_LIMIT, master_seed: 0, workers: 1 }
    }
}

pub fn run_series(game: &GameSpec, a: &AgentConfig, b: &AgentConfig, options: &SeriesOptions) -> Result<SeriesResult> {
    run_series_with(game, a, b, options, Arc::new(MonotonicClock::new()), &|_| {})
}

/// Plays the series; `on_record` sees each match record as it finishes.
pub fn run_series_with(
    game: &GameSpec,
    a: &AgentConfig,
    b: &AgentConfig,
    options: &SeriesOptions,
    clock: Arc<dyn Clock>,
    on_record: &(dyn Fn(&MatchRecord) + Sync),
) -> Result<SeriesResult> {
    a.validate()?;
    b.validate()?;
    let factory = |side: Side| match side {
        Side::A => a.build(clock.clone()),
        Side::B => b.build(clock.clone()),
    };
    run_series_custom(game, (&a.label(), &b.label()), &factory, options, clock.as_ref(), on_record)
}

/// Like [`run_series_with`] for arbitrary agents. `factory` builds a fresh
/// agent for a side at the start of every match.
pub fn run_series_custom(
    game: &GameSpec,
    labels: (&str, &str),
    factory: &(dyn Fn(Side) -> Box<dyn Agent> + Sync),
    options: &SeriesOptions,
    clock: &dyn Clock,
    on_record: &(dyn Fn(&MatchRecord) + Sync),
) -> Result<SeriesResult> {
    if options.n_games == 0 {
        return Err(EngineError::Config("a series needs at least one game".into()));
    }
    if options.turn_limit == 0 {
        return Err(EngineError::Config("turn limit must be at least 1".into()));
    }
    let n = options.n_games as usize;
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<MatchRecord>>> = Mutex::new(vec![None; n]);
    let worker = || loop {
        let i = next.fetch_add(1, Ordering::SeqCst);
        if i >= n {
            break;
        }
        let record = play_one(game, factory, i as u32, options, clock);
        on_record(&record);
        slots.lock().expect("no worker panics while holding the lock")[i] = Some(record);
    };
    std::thread::scope(|scope| {
        for _ in 1..options.workers.max(1) {
            scope.spawn(worker);
        }
        worker();
    });
    let matches: Vec<MatchRecord> = slots.into_inner().expect("workers joined").into_iter().flatten().collect();
    let count = |o: SeriesOutcome| matches.iter().filter(|m| m.outcome == o).count() as u32;
    Ok(SeriesResult {
        game: game.id().slug().to_string(),
        variant: game.variant().name().to_string(),
        agent_a: labels.0.to_string(),
        agent_b: labels.1.to_string(),
        n_games: options.n_games,
        turn_limit: options.turn_limit,
        master_seed: options.master_seed,
        wins_a: count(SeriesOutcome::A),
        wins_b: count(SeriesOutcome::B),
        draws: count(SeriesOutcome::Draw),
        matches,
    })
}

fn play_one(
    game: &GameSpec,
    factory: &(dyn Fn(Side) -> Box<dyn Agent> + Sync),
    index: u32,
    options: &SeriesOptions,
    clock: &dyn Clock,
) -> MatchRecord {
    let mut agent_a = factory(Side::A);
    let mut agent_b = factory(Side::B);
    let first = Side::first_in(index);
    let (p1, p2) = match first {
        Side::A => (&mut agent_a, &mut agent_b),
        Side::B => (&mut agent_b, &mut agent_a),
    };
    let seed = derive_seed(options.master_seed, &[u64::from(index)]);
    let result = run_match_with_clock(game, p1.as_mut(), p2.as_mut(), options.turn_limit, seed, clock);
    let to_side = |o: Outcome| match o {
        Outcome::Win(seat) => match Side::of_seat(seat, index) {
            Side::A => SeriesOutcome::A,
            Side::B => SeriesOutcome::B,
        },
        Outcome::Draw => SeriesOutcome::Draw,
    };
    let game_name = game.id().slug().to_string();
    match result {
        Ok(r) => MatchRecord {
            game: game_name,
            index,
            first,
            outcome: to_side(r.outcome),
            plies: r.plies,
            cutoff: r.cutoff,
            move_ms: r.log.iter().map(|m| m.elapsed.as_secs_f64() * 1000.0).collect(),
            aborted: None,
        },
        Err(e) => {
            let plies = match &e {
                MatchError::IllegalMove { plies, .. } | MatchError::AgentFailed { plies, .. } => *plies,
                MatchError::InvalidTurnLimit => 0,
            };
            let outcome = e.offender().map_or(Outcome::Draw, |seat| Outcome::Win(seat.opponent()));
            MatchRecord {
                game: game_name,
                index,
                first,
                outcome: to_side(outcome),
                plies,
                cutoff: false,
                move_ms: Vec::new(),
                aborted: Some(e.to_string()),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    RecordStream,
}

pub fn report(result: &SeriesResult, format: ReportFormat) -> String {
    match format {
        ReportFormat::Table => render_table(result),
        ReportFormat::RecordStream => render_records(result),
    }
}

pub fn render_table(result: &SeriesResult) -> String {
    let cols = [result.agent_a.as_str(), result.agent_b.as_str(), "Draw"];
    let w0 = result.game.len().max(4);
    let widths: Vec<usize> = cols.iter().map(|c| c.len().max(6)).collect();
    let mut out = String::new();
    let _ = write!(out, "{:<w0$}", "Game");
    for (c, w) in cols.iter().zip(&widths) {
        let _ = write!(out, " | {c:>w$}");
    }
    out.push('\n');
    let _ = write!(out, "{:<w0$}", result.game);
    for (p, w) in [result.pct_a(), result.pct_b(), result.pct_draw()].iter().zip(&widths) {
        let _ = write!(out, " | {:>w$}", fmt_pct(*p));
    }
    out.push('\n');
    let aborted = result.matches.iter().filter(|m| m.aborted.is_some()).count();
    let _ = writeln!(
        out,
        "({} games, {} wins / {} wins / {} draws{})",
        result.played(),
        result.wins_a,
        result.wins_b,
        result.draws,
        if aborted > 0 { format!(", {aborted} aborted") } else { String::new() }
    );
    out
}

/// One JSON object per line, one line per match.
pub fn render_records(result: &SeriesResult) -> String {
    result
        .matches
        .iter()
        .map(|m| serde_json::to_string(m).expect("records serialize") + "\n")
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub wins_a: u32,
    pub wins_b: u32,
    pub draws: u32,
}

pub fn parse_records(text: &str) -> Result<Tally> {
    let mut tally = Tally::default();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let r: MatchRecord = serde_json::from_str(line)
            .map_err(|e| EngineError::Config(format!("record {}: {e}", i + 1)))?;
        match r.outcome {
            SeriesOutcome::A => tally.wins_a += 1,
            SeriesOutcome::B => tally.wins_b += 1,
            SeriesOutcome::Draw => tally.draws += 1,
        }
    }
    Ok(tally)
}

/// Experiment description, stored as TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentManifest {
    pub game: String,
    #[serde(default = "default_variant")]
    pub variant: String,
    #[serde(default = "default_games")]
    pub games: u32,
    #[serde(default = "default_turn_limit")]
    pub turn_limit: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    pub a: AgentConfig,
    pub b: AgentConfig,
}

fn default_variant() -> String {
    "default".into()
}

fn default_games() -> u32 {
    20
}

fn default_turn_limit() -> u32 {
    DEFAULT_TURN_LIMIT
}

fn default_workers() -> usize {
    1
}

impl ExperimentManifest {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| EngineError::Config(format!("manifest: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EngineError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }

    pub fn game_spec(&self) -> Result<GameSpec> {
        let id = self.game.parse()?;
        GameSpec::new(id, RuleVariant::named(id, &self.variant)?)
    }

    pub fn options(&self) -> SeriesOptions {
        SeriesOptions { n_games: self.games, turn_limit: self.turn_limit, master_seed: self.seed, workers: self.workers }
    }
}
