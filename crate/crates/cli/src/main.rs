use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use racnsim::config::{parse_config, to_config_text};
use racnsim::engine::{run_experiment, ExperimentConfig};
use racnsim::geometry::NetworkLayout;
use racnsim::schemes::{build_neighbor_matrix, Scheme};
use racnsim::tables::{read_summary, write_tables, SummaryRow, SUMMARY_FILE};
use racnsim::{ConfigError, SimError};

#[derive(Parser)]
#[command(
    name = "racnsim",
    version,
    about = "Downlink resource-allocation simulator for relay-assisted OFDMA networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write result tables.
    Run {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory.
        #[arg(long, env = "RACNSIM_OUT", default_value = "racnsim-out")]
        out: PathBuf,
    },
    /// Check a configuration and print it with defaults resolved.
    Validate {
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Print the interfering-neighbor listing of a scheme.
    Neighbors {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print region polygons of the layout.
    Layout {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Tabulate summaries of earlier runs side by side.
    Compare {
        /// Run directories, or summary files.
        #[arg(required = true)]
        runs: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct ConfigArgs {
    /// Configuration file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of drops per density.
    #[arg(long)]
    drops: Option<usize>,
    /// Users per sector, one value or a comma separated list.
    #[arg(long)]
    users: Option<String>,
    /// Comma separated scheme names.
    #[arg(long)]
    schemes: Option<String>,
}

enum CliError {
    Config(String),
    Io(String),
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => f.write_str(m),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Other(m) => f.write_str(m),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Io(e) => CliError::Io(e.to_string()),
            SimError::Config(e) => CliError::Config(e.to_string()),
            SimError::InvalidParameter(m) | SimError::InvalidLayout(m) => {
                CliError::Config(format!("invalid configuration: {m}"))
            }
            other => CliError::Other(other.to_string()),
        }
    }
}

fn read_config_text(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        None => Ok(String::new()),
        Some(p) => fs::read_to_string(p)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", p.display()))),
    }
}

fn load(args: &ConfigArgs) -> Result<ExperimentConfig, CliError> {
    let mut text = read_config_text(args.config.as_deref())?;
    text.push('\n');
    // command-line flags override the file
    let overrides = [
        ("run.master_seed", args.seed.map(|s| s.to_string())),
        ("run.num_drops", args.drops.map(|d| d.to_string())),
        ("run.users_per_sector", args.users.clone()),
        ("run.schemes", args.schemes.clone()),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            text.push_str(&format!("{key} = {v}\n"));
        }
    }
    Ok(parse_config(&text)?)
}

fn load_plain(path: Option<&Path>) -> Result<ExperimentConfig, CliError> {
    Ok(parse_config(&read_config_text(path)?)?)
}

fn run(args: &ConfigArgs, out: &Path) -> Result<(), CliError> {
    let cfg = load(args)?;
    let result = run_experiment(&cfg)?;
    let manifest = write_tables(&result, out, args.config.as_deref())?;
    println!(
        "wrote {} files to {}",
        manifest.files.len() + 1,
        out.display()
    );
    for e in &result.entries {
        let r = &e.report;
        println!(
            "{:<15} u={:<5} median edge SINR {:>8.2} dB  eta {:>10.3}  eta_area {:>9.3}  blocked {}",
            e.scheme.to_string(),
            e.users_per_sector,
            r.median_edge_sinr_db().unwrap_or(f64::NAN),
            r.edge_spectral_efficiency,
            r.area_spectral_efficiency,
            r.blocked_count
        );
    }
    Ok(())
}

fn neighbors(scheme: &str, config: Option<&Path>) -> Result<(), CliError> {
    let scheme: Scheme = scheme.parse()?;
    let cfg = load_plain(config)?;
    let layout = NetworkLayout::new(cfg.layout)?;
    print!("{}", build_neighbor_matrix(&layout, scheme).listing());
    Ok(())
}

fn compare(runs: &[PathBuf]) -> Result<(), CliError> {
    let mut rows: Vec<(String, SummaryRow)> = Vec::new();
    for run in runs {
        let path = if run.is_dir() {
            run.join(SUMMARY_FILE)
        } else {
            run.clone()
        };
        let name = run.display().to_string();
        rows.extend(read_summary(&path)?.into_iter().map(|r| (name.clone(), r)));
    }
    let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(3).max(3);
    println!(
        "{:<width$}  {:<15} {:>6} {:>12} {:>10} {:>16} {:>8}",
        "run", "scheme", "users", "eta_edge", "eta_area", "median_edge_db", "blocked"
    );
    for (name, r) in rows {
        println!(
            "{:<width$}  {:<15} {:>6} {:>12.3} {:>10.3} {:>16.2} {:>8}",
            name,
            r.scheme,
            r.users_per_sector,
            r.eta_edge,
            r.eta_area,
            r.median_edge_sinr_db,
            r.blocked
        );
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, out } => run(&config, &out),
        Command::Validate { config } => {
            print!("{}", to_config_text(&load(&config)?));
            Ok(())
        }
        Command::Neighbors { scheme, config } => neighbors(&scheme, config.as_deref()),
        Command::Layout { config } => {
            let cfg = load_plain(config.as_deref())?;
            print!("{}", NetworkLayout::new(cfg.layout)?.geometry_dump());
            Ok(())
        }
        Command::Compare { runs } => compare(&runs),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("racnsim: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
