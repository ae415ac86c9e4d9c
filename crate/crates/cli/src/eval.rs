use std::io::Read;
use std::time::Duration;

use anyhow::{Context, Result};
use boardmind_core::notation;
use boardmind_core::search::{iterative_deepening_evaluate, uct_evaluate, SearchConfig, UctConfig};
use boardmind_core::EngineError;
use clap::Args;

use crate::UsageError;

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Position in canonical notation, records separated by newlines or `;`.
    /// Read from stdin when omitted or `-`.
    state: Option<String>,
    #[arg(long, default_value_t = 1000)]
    time_ms: u64,
    #[arg(long, default_value_t = 15)]
    playouts: u32,
    /// Stop deepening after this depth.
    #[arg(long)]
    max_depth: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate with the UCT baseline instead of the hybrid search.
    #[arg(long)]
    uct: bool,
}

pub fn run(args: EvalArgs) -> Result<()> {
    let text = match args.state.as_deref() {
        None | Some("-") => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf).context("reading the position from stdin")?;
            buf
        }
        Some(s) => s.to_string(),
    };
    let (spec, state) = notation::parse(&text).map_err(|e| match e {
        EngineError::Parse(p) => anyhow::Error::new(UsageError(p.to_string())),
        other => anyhow::Error::new(UsageError(other.to_string())),
    })?;
    let budget = Duration::from_millis(args.time_ms);

    let evaluation = if args.uct {
        let config = UctConfig { time_budget: budget, ..UctConfig::default() };
        uct_evaluate(&spec, &state, &config, &mut boardmind_core::rng::seeded(args.seed))?
    } else {
        let config = SearchConfig {
            playouts_per_leaf: args.playouts,
            max_depth: args.max_depth,
            rng_seed: args.seed,
            ..SearchConfig::with_budget(budget)
        };
        iterative_deepening_evaluate(&spec, &state, &config)?
    };

    let mut entries: Vec<_> = evaluation.entries().iter().collect();
    entries.sort_by(|a, b| b.value.total_cmp(&a.value));
    for e in entries {
        println!("{:<12} {:.4}", e.mv.to_string(), e.value);
    }
    if !args.uct {
        let ms: Vec<String> = evaluation.timings.iter().map(|d| format!("{:.1}", d.as_secs_f64() * 1e3)).collect();
        eprintln!("depth {} completed; iteration ms: [{}]", evaluation.completed_depth, ms.join(", "));
    }
    Ok(())
}
