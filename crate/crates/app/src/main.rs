use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use persistry::dataset::DatasetError;
use persistry::service::{Format, TradeRequest};
use persistry::{ApiError, Dataset, Service, ServiceConfig};
use persistry_core::geometry::TunnelingConfig;
use persistry_core::roster::StatColumn;

#[derive(Parser)]
#[command(
    name = "persistry",
    version,
    about = "Persistent homology of team rosters"
)]
struct Cli {
    /// Dataset root holding one directory per season.
    #[arg(long, env = "PERSISTRY_DATASET", global = true, default_value = "data")]
    dataset: PathBuf,
    /// Season directory; may be omitted when the dataset holds only one.
    #[arg(long, global = true)]
    season: Option<String>,
    /// Comma-separated stat columns, e.g. G,A,SP. Defaults to all twelve.
    #[arg(long, global = true)]
    stats: Option<String>,
    /// Dimension-1 bars shorter than this fraction of the top line are noise.
    #[arg(long, global = true, default_value_t = 0.01)]
    noise_fraction: f64,
    /// Seed for the tunneling estimator's start points.
    #[arg(long, global = true, default_value_t = TunnelingConfig::default().seed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Svg,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension 0 and 1 barcode of a team.
    Barcode {
        #[arg(long)]
        team: String,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
    },
    /// Team summary: top line, mean bar length, cycles, sparsity, tunneling.
    Summary {
        #[arg(long)]
        team: String,
    },
    /// Before/after comparison of a hypothetical trade.
    Trade {
        #[arg(long)]
        team: String,
        #[arg(long)]
        out_player: String,
        #[arg(long)]
        in_team: String,
        #[arg(long)]
        in_player: String,
    },
    /// Spearman correlation of Corsi rank and final standing.
    Correlate,
    /// Serve the JSON API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        listen: String,
    },
}

fn service(cli: &Cli) -> anyhow::Result<Service> {
    let stats = match &cli.stats {
        Some(list) => StatColumn::parse_list(list).map_err(ApiError::from)?,
        None => StatColumn::ALL.to_vec(),
    };
    let config = ServiceConfig {
        stats,
        noise_fraction: cli.noise_fraction,
        tunneling: TunnelingConfig {
            seed: cli.seed,
            ..TunnelingConfig::default()
        },
    };
    config.validate()?;
    let dataset = Dataset::load(&cli.dataset, cli.season.as_deref())
        .with_context(|| format!("loading dataset {}", cli.dataset.display()))?;
    Ok(Service::new(dataset, config)?)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let service = service(&cli)?;
    let out = match cli.command {
        Command::Barcode { team, dim, format } => {
            let format = match format {
                OutputFormat::Json => Format::Json,
                OutputFormat::Svg => Format::Svg,
                OutputFormat::Text => Format::Text,
            };
            service.barcode(&team, dim, format)?
        }
        Command::Summary { team } => service.summary(&team)?,
        Command::Trade {
            team,
            out_player,
            in_team,
            in_player,
        } => service.evaluate_trade(&TradeRequest {
            team,
            outgoing: out_player,
            incoming_team: in_team,
            incoming_player: in_player,
        })?,
        Command::Correlate => service.correlate()?,
        Command::Serve { listen } => {
            let runtime = tokio::runtime::Runtime::new().context("starting runtime")?;
            runtime
                .block_on(persistry::http::serve(Arc::new(service), &listen))
                .with_context(|| format!("serving on {listen}"))?;
            return Ok(());
        }
    };
    print!("{out}");
    Ok(())
}

fn is_user_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<ApiError>()
            .is_some_and(ApiError::is_user_error)
            || c.downcast_ref::<DatasetError>().is_some()
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_user_error(&e) { 2 } else { 1 })
        }
    }
}
