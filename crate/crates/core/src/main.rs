use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use selfsim_bs::cli::{self, CliError, Options, RunConfig};

/// Option pricing against self-similar measures with an explicit finite-difference scheme.
#[derive(Parser)]
#[command(name = "selfsim-bs", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve on the configured grid; writes surface.csv, price_t0.csv and run.json.
    Solve(CommonArgs),
    /// Solve once per mu1 in mu1_list; writes one price curve each plus sweep.csv.
    Sweep(CommonArgs),
    /// Delta, Gamma and Theta at t = 0 (Vega and Rho with --bumps); writes greeks.csv.
    Greeks(CommonArgs),
    /// Price interval covering S_T with probability 1 - alpha (tails split evenly,
    /// evaluated at t = T) and the boundary tolerance checks for L and M.
    Bounds(CommonArgs),
    /// Weighted-norm error against the closed form for each m in m_list (mu1 = 0.5 only).
    Validate(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a `key = value` config file.
    #[arg(long)]
    config: PathBuf,
    /// Run even if the coercivity condition 4r > sigma^2 fails.
    #[arg(long)]
    force: bool,
    /// Add Vega and Rho by bump-and-revalue (greeks only).
    #[arg(long)]
    bumps: bool,
    /// Also write Delta, Gamma and Theta on every time row (greeks only).
    #[arg(long)]
    full_surface: bool,
    /// Output directory; overrides output_dir from the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (args, command): (&CommonArgs, fn(&RunConfig, &Options, &mut dyn std::io::Write) -> Result<(), CliError>) =
        match &cli.command {
            Command::Solve(a) => (a, cli::cmd_solve),
            Command::Sweep(a) => (a, cli::cmd_sweep),
            Command::Greeks(a) => (a, cli::cmd_greeks),
            Command::Bounds(a) => (a, cli::cmd_bounds),
            Command::Validate(a) => (a, cli::cmd_validate),
        };
    let config = RunConfig::load(&args.config)?;
    let opts = Options {
        force: args.force,
        bumps: args.bumps,
        full_surface: args.full_surface,
        out: args.out.clone(),
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    command(&config, &opts, &mut lock)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
