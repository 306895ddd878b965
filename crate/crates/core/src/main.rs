use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use obreg::scenario::{cmd_calibrate, cmd_monitor, cmd_simulate, Overrides};

#[derive(Parser)]
#[command(
    name = "obreg",
    version,
    about = "Boussinesq simulation with weak-Lebesgue regularity monitoring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: OverrideArgs,
}

#[derive(Args)]
struct OverrideArgs {
    /// Replace `output.dir`.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Replace the initial-condition and calibration seeds.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a simulation and write snapshots plus a monitor report.
    Simulate { config: PathBuf },
    /// Re-analyze stored snapshot frames without stepping.
    Monitor { pattern: String, config: PathBuf },
    /// Calibrate inequality constants on a seeded field family.
    Calibrate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let overrides = Overrides {
        output_dir: cli.overrides.output_dir,
        seed: cli.overrides.seed,
    };
    let code = match &cli.command {
        Command::Simulate { config } => cmd_simulate(config, &overrides),
        Command::Monitor { pattern, config } => cmd_monitor(pattern, config, &overrides),
        Command::Calibrate { config } => cmd_calibrate(config, &overrides),
    };
    ExitCode::from(code as u8)
}
