use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use heyfriend_core::metrics::aggregate;
use heyfriend_core::resume::{BuiltinEngine, ResumeBuilder, ResumeInput};
use heyfriend_service::config::{Credentials, ServiceConfig};
use heyfriend_service::{app, AppState};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "heyfriend", version, about = "Community resource assistant service")]
struct Cli {
    /// TOML configuration file. Without one, content is read from ./data.
    #[arg(long, global = true, env = "HEYFRIEND_CONFIG")]
    config: Option<PathBuf>,

    /// Replay recorded provider responses instead of calling the network.
    /// Defaults to the fixtures directory next to the content files.
    #[arg(long, global = true, num_args = 0..=1, value_name = "DIR")]
    offline_fixtures: Option<Option<PathBuf>>,

    /// Port to listen on, overriding the configured address's port.
    #[arg(long, global = true)]
    port: Option<u16>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service (the default).
    Serve,
    /// Render a resume JSON file to PDF with the builtin engine.
    Render {
        input: PathBuf,
        #[arg(short, long, default_value = "resume.pdf")]
        output: PathBuf,
    },
    /// Summarize an event log.
    Report {
        log: PathBuf,
        /// Print JSON instead of the text summary.
        #[arg(long)]
        json: bool,
    },
}

fn load_config(cli: &Cli) -> Result<ServiceConfig, String> {
    let mut config = match &cli.config {
        Some(path) => ServiceConfig::load(path).map_err(|e| e.to_string())?,
        None => ServiceConfig::default(),
    };
    config.credentials = Credentials::from_env();
    if let Some(dir) = &cli.offline_fixtures {
        let data_dir = config.content.corpus.parent().unwrap_or(Path::new(".")).to_path_buf();
        config.offline_fixtures = Some(dir.clone().unwrap_or_else(|| data_dir.join("fixtures")));
    }
    if let Some(port) = cli.port {
        config.listen.set_port(port);
    }
    Ok(config)
}

async fn serve(cli: &Cli) -> Result<(), String> {
    let config = load_config(cli)?;
    let state = AppState::build(&config).await.map_err(|e| e.to_string())?;
    let listener = tokio::net::TcpListener::bind(config.listen)
        .await
        .map_err(|e| format!("cannot listen on {}: {e}", config.listen))?;
    tracing::info!(addr = %config.listen, mode = ?state.mode, "listening");
    axum::serve(listener, app(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
            tracing::info!("shutting down");
        })
        .await
        .map_err(|e| e.to_string())
}

async fn render(input: &Path, output: &Path) -> Result<(), String> {
    let raw = std::fs::read_to_string(input).map_err(|e| format!("{}: {e}", input.display()))?;
    let resume: ResumeInput = serde_json::from_str(&raw).map_err(|e| format!("{}: {e}", input.display()))?;
    let pdf = ResumeBuilder::new(std::sync::Arc::new(BuiltinEngine), 1)
        .build_resume(&resume)
        .await
        .map_err(|e| e.to_string())?;
    std::fs::write(output, pdf).map_err(|e| format!("{}: {e}", output.display()))
}

fn report(log: &Path, json: bool) -> Result<(), String> {
    let raw = std::fs::read_to_string(log).map_err(|e| format!("{}: {e}", log.display()))?;
    let report = aggregate(&raw);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?);
    } else {
        print!("{}", report.export_text());
    }
    Ok(())
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    let result = match &cli.command {
        None | Some(Command::Serve) => serve(&cli).await,
        Some(Command::Render { input, output }) => render(input, output).await,
        Some(Command::Report { log, json }) => report(log, *json),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("heyfriend: {e}");
            ExitCode::FAILURE
        }
    }
}
