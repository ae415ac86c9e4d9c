use std::io::{BufRead, Write};
use std::time::Duration;

use anyhow::Result;
use boardmind_core::board::BoardGraph;
use boardmind_core::difficulty::{stochastic_select, DifficultyPreset};
use boardmind_core::games::{GameId, GameSpec, RuleVariant};
use boardmind_core::model::ForwardModel;
use boardmind_core::moves::Move;
use boardmind_core::player::{Outcome, Player};
use boardmind_core::rng::seeded;
use boardmind_core::search::{iterative_deepening_evaluate, SearchConfig};
use boardmind_core::state::GameState;
use clap::Args;

use crate::UsageError;

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[arg(long)]
    game: String,
    #[arg(long, default_value = "default")]
    variant: String,
    /// Side you play.
    #[arg(long, default_value = "P1")]
    human: String,
    #[arg(long, default_value = "Medium")]
    difficulty: String,
    #[arg(long, default_value_t = 1000)]
    time_ms: u64,
    /// Seed for the engine; random when omitted.
    #[arg(long)]
    seed: Option<u64>,
}

/// Draws the board on its coordinate grid, pieces on the left and position
/// ids on the right.
fn render(board: &BoardGraph, state: &GameState) -> String {
    let (w, h) = board.extent();
    let id_width = board.len().saturating_sub(1).to_string().len();
    let mut out = String::new();
    for y in 0..h {
        let mut pieces = String::new();
        let mut ids = String::new();
        for x in 0..w {
            match board.at((x, y)) {
                Some(p) => {
                    pieces.push(match state.at(p) {
                        Some(Player::P1) => 'X',
                        Some(Player::P2) => 'O',
                        None => '.',
                    });
                    ids.push_str(&format!("{p:>id_width$}"));
                }
                None => {
                    pieces.push(' ');
                    ids.push_str(&" ".repeat(id_width));
                }
            }
            pieces.push(' ');
            ids.push(' ');
        }
        out.push_str(&format!("  {pieces}   {ids}\n"));
    }
    out
}

pub fn run(args: PlayArgs) -> Result<()> {
    let id: GameId = args.game.parse().map_err(|e: boardmind_core::ParseError| UsageError(e.message))?;
    let variant = RuleVariant::named(id, &args.variant).map_err(|e| UsageError(e.to_string()))?;
    let spec = GameSpec::new(id, variant)?;
    let human: Player = args.human.parse().map_err(|e: boardmind_core::ParseError| UsageError(e.message))?;
    let difficulty = args
        .difficulty
        .parse::<DifficultyPreset>()
        .map_err(|e| UsageError(e.to_string()))?
        .params();
    let seed = args.seed.unwrap_or_else(rand::random);
    let mut rng = seeded(seed);

    let stdin = std::io::stdin();
    let mut lines = stdin.lock().lines();
    let mut state = spec.initial_state();
    println!("{} ({}), you are {} (X is P1). Enter a move, or `quit`.", id.title(), spec.variant().name(), human);

    while !spec.is_terminal(&state) {
        print!("{}", render(spec.board(), &state));
        let legal = spec.legal_moves(&state)?;
        if state.to_move() == human {
            let texts: Vec<String> = legal.iter().map(Move::to_string).collect();
            println!("legal: {}", texts.join(" "));
            print!("> ");
            std::io::stdout().flush()?;
            let Some(line) = lines.next().transpose()? else { return Ok(()) };
            let line = line.trim();
            if line == "quit" {
                return Ok(());
            }
            let mv = match Move::parse(line, spec.board()) {
                Ok(mv) => mv,
                Err(e) => {
                    println!("{e}");
                    continue;
                }
            };
            match spec.apply(&state, &mv) {
                Ok(next) => state = next,
                Err(e) => println!("{e}"),
            }
        } else {
            let config = SearchConfig {
                rng_seed: seed ^ u64::from(state.ply_count()),
                ..SearchConfig::with_budget(Duration::from_millis(args.time_ms))
            };
            let evaluation = iterative_deepening_evaluate(&spec, &state, &config)?;
            let mv = stochastic_select(&evaluation, difficulty, &mut rng)?.clone();
            println!("engine plays {mv}");
            state = spec.apply(&state, &mv)?;
        }
    }
    print!("{}", render(spec.board(), &state));
    match spec.outcome(&state) {
        Some(Outcome::Win(p)) if p == human => println!("you win"),
        Some(Outcome::Win(_)) => println!("the engine wins"),
        _ => println!("draw"),
    }
    Ok(())
}
