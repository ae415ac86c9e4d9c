use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{Context, Result};
use boardmind_service::{ServiceConfig, SessionStore};
use clap::Args;
use tracing_subscriber::EnvFilter;

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, env = "BOARDMIND_PORT", default_value_t = 8080)]
    port: u16,
    #[arg(long, env = "BOARDMIND_HOST", default_value = "127.0.0.1")]
    host: String,
    /// Default engine time per move, used when a session does not set one.
    #[arg(long, env = "BOARDMIND_BUDGET_MS", default_value_t = 1000)]
    budget_ms: u64,
    /// Append session events to this JSON-lines file.
    #[arg(long, env = "BOARDMIND_LOG")]
    log: Option<PathBuf>,
    /// Include the engine's move values in session payloads.
    #[arg(long, env = "BOARDMIND_REVEAL_EVALUATIONS")]
    reveal_evaluations: bool,
    /// Idle time after which a session is dropped.
    #[arg(long, env = "BOARDMIND_EXPIRY_S", default_value_t = 3600)]
    expiry_s: u64,
}

pub fn run(args: ServeArgs) -> Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();
    let config = ServiceConfig {
        budget: Duration::from_millis(args.budget_ms),
        reveal_evaluations: args.reveal_evaluations,
        expiry: Duration::from_secs(args.expiry_s),
        log_path: args.log.clone(),
    };
    let store = Arc::new(SessionStore::new(config).context("opening the session log")?);
    let addr: SocketAddr = format!("{}:{}", args.host, args.port).parse().context("bad listen address")?;

    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("binding {addr}"))?;
        tracing::info!("listening on http://{}", listener.local_addr()?);
        boardmind_service::serve(listener, store).await?;
        Ok(())
    })
}
