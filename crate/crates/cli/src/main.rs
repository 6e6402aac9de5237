mod eccentric;
mod energy;
mod error;
mod fit;
mod orbits;
mod output;
mod settings;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliResult;
use crate::settings::{Context, NumericsArgs};

/// Casimir energies and forces between perfectly conducting cylinders.
///
/// Exit status: 0 on success, 2 for usage or domain errors, 3 when a
/// numerical result failed to converge. Errors are reported on stderr as a
/// JSON object with an "error" field.
#[derive(Debug, Parser)]
#[command(name = "casimir", version)]
struct Cli {
    /// JSON file with "numerics", "workers" and "sweep" sections. Flags
    /// override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(flatten)]
    numerics: NumericsArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact interaction and total energy at one radius ratio.
    Energy(energy::EnergyArgs),
    /// Exact and approximate quantities over a grid of radius ratios.
    Sweep(sweep::SweepArgs),
    /// Best-fit effective-area exponent.
    FitP(fit::FitArgs),
    /// Energy and force for cylinders with offset axes.
    Eccentric(eccentric::EccentricArgs),
    /// Periodic orbits between the cylinders.
    Orbits(orbits::OrbitArgs),
    /// Resonator frequency shift; `eccentric` with required resonator
    /// parameters and a default offset of zero.
    FreqShift(eccentric::EccentricArgs),
}

fn run(cli: &Cli) -> CliResult<()> {
    let ctx = Context::build(cli.config.as_deref(), cli.workers, &cli.numerics)?;
    match &cli.command {
        Command::Energy(a) => energy::cmd_energy(a, &ctx),
        Command::Sweep(a) => sweep::cmd_sweep(a, &ctx),
        Command::FitP(a) => fit::cmd_fit(a, &ctx),
        Command::Eccentric(a) => eccentric::cmd_eccentric(a, &ctx, false),
        Command::Orbits(a) => orbits::cmd_orbits(a, &ctx),
        Command::FreqShift(a) => eccentric::cmd_eccentric(a, &ctx, true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let report = serde_json::json!({ "error": e.to_string(), "kind": e.kind() });
            eprintln!("{report}");
            ExitCode::from(e.exit_code())
        }
    }
}
