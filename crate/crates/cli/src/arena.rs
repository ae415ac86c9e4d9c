use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::Duration;

use anyhow::{Context, Result};
use boardmind_core::agents::{AgentConfig, Difficulty};
use boardmind_core::arena::{render_table, run_series_with, ExperimentManifest, SeriesOptions};
use boardmind_core::clock::MonotonicClock;
use boardmind_core::difficulty::{DifficultyParams, DifficultyPreset};
use boardmind_core::games::{GameId, GameSpec, RuleVariant};
use boardmind_core::search::{SearchConfig, UctConfig};
use clap::{Args, ValueEnum};

use crate::UsageError;

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AgentName {
    Hybrid,
    Uct,
    Random,
}

#[derive(Debug, Args)]
pub struct ArenaArgs {
    /// TOML experiment manifest; replaces the game and agent flags.
    #[arg(long, conflicts_with_all = ["game", "a", "b"])]
    manifest: Option<PathBuf>,
    #[arg(long, required_unless_present = "manifest")]
    game: Option<String>,
    #[arg(long, default_value = "default")]
    variant: String,
    #[arg(long, value_enum, required_unless_present = "manifest")]
    a: Option<AgentName>,
    #[arg(long, value_enum, required_unless_present = "manifest")]
    b: Option<AgentName>,
    /// Selection for agent A: Easy, Medium, Hard or `mu,sigma`. Argmax when omitted.
    #[arg(long)]
    a_difficulty: Option<String>,
    #[arg(long)]
    b_difficulty: Option<String>,
    #[arg(long, default_value_t = 20)]
    games: u32,
    /// Thinking time per move for both agents.
    #[arg(long, default_value_t = 1000)]
    time_ms: u64,
    /// Playouts per hybrid leaf.
    #[arg(long, default_value_t = 15)]
    playouts: u32,
    #[arg(long, default_value_t = 100)]
    turn_limit: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Directory for `table.txt` and the appended `records.jsonl`.
    #[arg(long, default_value = "arena-out")]
    out: PathBuf,
}

fn parse_difficulty(text: &str) -> Result<Difficulty> {
    if let Some((mu, sigma)) = text.split_once(',') {
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| UsageError(format!("bad difficulty `{text}`")));
        let params = DifficultyParams::new(num(mu)?, num(sigma)?).map_err(|e| UsageError(e.to_string()))?;
        return Ok(Difficulty::Custom(params));
    }
    let preset: DifficultyPreset = text.parse().map_err(|e: boardmind_core::EngineError| UsageError(e.to_string()))?;
    Ok(Difficulty::Preset(preset))
}

fn agent(name: AgentName, difficulty: Option<&str>, args: &ArenaArgs) -> Result<AgentConfig> {
    let budget = Duration::from_millis(args.time_ms);
    let mut config = match name {
        AgentName::Hybrid => AgentConfig::hybrid(SearchConfig {
            playouts_per_leaf: args.playouts,
            ..SearchConfig::with_budget(budget)
        }),
        AgentName::Uct => AgentConfig::uct(UctConfig { time_budget: budget, ..UctConfig::default() }),
        AgentName::Random => AgentConfig::random(),
    };
    if let Some(d) = difficulty {
        config = config.with_difficulty(parse_difficulty(d)?);
    }
    config.validate().map_err(|e| UsageError(e.to_string()))?;
    Ok(config)
}

fn resolve(args: &ArenaArgs) -> Result<(GameSpec, AgentConfig, AgentConfig, SeriesOptions)> {
    if let Some(path) = &args.manifest {
        let m = ExperimentManifest::load(path).map_err(|e| UsageError(e.to_string()))?;
        let spec = m.game_spec().map_err(|e| UsageError(e.to_string()))?;
        return Ok((spec, m.a.clone(), m.b.clone(), m.options()));
    }
    let game = args.game.as_deref().expect("clap requires --game");
    let id: GameId = game.parse().map_err(|e: boardmind_core::ParseError| UsageError(e.message))?;
    let variant = RuleVariant::named(id, &args.variant).map_err(|e| UsageError(e.to_string()))?;
    let spec = GameSpec::new(id, variant)?;
    let a = agent(args.a.expect("clap requires --a"), args.a_difficulty.as_deref(), args)?;
    let b = agent(args.b.expect("clap requires --b"), args.b_difficulty.as_deref(), args)?;
    let options = SeriesOptions {
        n_games: args.games,
        turn_limit: args.turn_limit,
        master_seed: args.seed,
        workers: args.workers,
    };
    Ok((spec, a, b, options))
}

pub fn run(args: ArenaArgs) -> Result<()> {
    let (spec, a, b, options) = resolve(&args)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let records_path = args.out.join("records.jsonl");
    let records = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&records_path)
        .with_context(|| format!("opening {}", records_path.display()))?;
    let records = Mutex::new(records);
    eprintln!("{} vs {} on {}, {} games", a.label(), b.label(), spec.id().slug(), options.n_games);

    let result = run_series_with(&spec, &a, &b, &options, Arc::new(MonotonicClock::new()), &|r| {
        let line = serde_json::to_string(r).expect("records serialize") + "\n";
        let mut f = records.lock().expect("records lock");
        if let Err(e) = f.write_all(line.as_bytes()) {
            tracing::warn!("could not append record: {e}");
        }
    })?;

    let table = render_table(&result);
    fs::write(args.out.join("table.txt"), &table)?;
    print!("{table}");
    Ok(())
}
