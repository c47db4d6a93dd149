use std::net::SocketAddr;
use std::path::PathBuf;

use clap::Parser;
use pmcda_service::{router, Config, DEFAULT_MAX_SAMPLES};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "pmcda-service", version, about = "HTTP/JSON service for pmcda")]
struct Args {
    #[arg(long, env = "PMCDA_BIND", default_value = "127.0.0.1:8080")]
    bind: SocketAddr,
    /// Concurrent compute jobs (defaults to the number of cores).
    #[arg(long, env = "PMCDA_WORKERS")]
    workers: Option<usize>,
    /// Largest posterior sample count accepted per request.
    #[arg(long, env = "PMCDA_MAX_SAMPLES", default_value_t = DEFAULT_MAX_SAMPLES)]
    max_samples: usize,
    /// Static files (the web client) served under `/`.
    #[arg(long, env = "PMCDA_STATIC_DIR")]
    static_dir: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> std::io::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();
    let args = Args::parse();
    let mut config = Config {
        max_samples: args.max_samples,
        static_dir: args.static_dir,
        ..Config::default()
    };
    if let Some(w) = args.workers {
        config.workers = w;
    }
    tracing::info!(workers = config.workers, max_samples = config.max_samples, "listening on {}", args.bind);
    let listener = tokio::net::TcpListener::bind(args.bind).await?;
    axum::serve(listener, router(config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
