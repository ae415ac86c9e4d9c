use std::process::ExitCode;

use clap::Parser;

mod arena;
mod eval;
mod play;
mod serve;

#[derive(Debug, Parser)]
#[command(name = "boardmind", version, about = "Board game engine with adjustable difficulty")]
enum Cli {
    /// Play a series between two agents and write a result table and match records.
    Arena(arena::ArenaArgs),
    /// Print the value of every legal move in a position.
    Eval(eval::EvalArgs),
    /// Play against the engine in the terminal.
    Play(play::PlayArgs),
    /// Run the HTTP session service.
    Serve(serve::ServeArgs),
}

/// Errors that should exit with the usage status (2) rather than 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli {
        Cli::Arena(args) => arena::run(args),
        Cli::Eval(args) => eval::run(args),
        Cli::Play(args) => play::run(args),
        Cli::Serve(args) => serve::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
