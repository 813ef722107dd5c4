//! `cellfree` command-line front end.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cellfree::Algorithm;

#[derive(Parser)]
#[command(name = "cellfree", version, about = "Pilot assignment simulator for cell-free massive MIMO")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte Carlo sweep and write trials.csv and summary.csv.
    Sweep(SweepArgs),
    /// Check the approximation guarantees and power-control properties.
    Verify(VerifyArgs),
    /// Compare configured normalized SNRs with the physical link budget.
    SnrCheck(SnrArgs),
    /// Print one assignment for inspection.
    Assign(AssignArgs),
}

#[derive(Args)]
pub struct ConfigArgs {
    /// Config file (JSON or `key = value` lines). Defaults apply otherwise.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override a config key, e.g. `--set K=25`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
    /// Master seed (overrides the config).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Comma-separated algorithms: gec, iwgf, ibasic, greedy, random.
    #[arg(long, value_delimiter = ',', default_value = "gec,iwgf,ibasic,greedy,random")]
    pub algos: Vec<Algorithm>,
    /// Comma-separated pilot counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub pilots: Vec<usize>,
    /// Comma-separated coherence intervals; defaults to the config's tau_c.
    #[arg(long = "tau-c", value_delimiter = ',')]
    pub tau_c: Vec<u32>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Random instances compared against the exhaustive oracle.
    #[arg(long, default_value_t = 500)]
    pub instances: usize,
    #[arg(long, default_value_t = 4)]
    pub min_users: usize,
    /// Largest oracle instance (at most 12).
    #[arg(long, default_value_t = 9)]
    pub max_users: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
    pub pilots: Vec<usize>,
    /// Simulated trials for the P = K and power-control checks.
    #[arg(long, default_value_t = 20)]
    pub trials: u64,
}

#[derive(Args)]
pub struct SnrArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Transmit power (W).
    #[arg(long, default_value_t = 0.1)]
    pub power: f64,
    /// Noise temperature (K).
    #[arg(long, default_value_t = 290.0)]
    pub temperature: f64,
    /// Receiver noise figure (dB).
    #[arg(long, default_value_t = 9.0)]
    pub noise_figure: f64,
}

#[derive(Args)]
pub struct AssignArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, default_value = "gec")]
    pub algo: Algorithm,
    #[arg(long)]
    pub pilots: usize,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    /// Print one pilot index per line instead of a JSON array.
    #[arg(long)]
    pub lines: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(args) => commands::sweep(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::SnrCheck(args) => commands::snr_check(&args),
        Command::Assign(args) => commands::assign(&args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            commands::EXIT_INVALID
        }
    }
}
