//! `coulomb`: verification harness for the Coulomb-gas partition function
//! library: residual sweeps, identity suites and B2 fits, driven by TOML
//! configs.
//!
//! Exit codes: 0 pass, 2 verification failure, 3 config error,
//! 4 numerical-conditioning error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use coulomb_cli::config::RunConfig;
use coulomb_cli::{commands, error};

#[derive(Parser)]
#[command(name = "coulomb", version, about = "Coulomb-gas partition function verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep N on the sphere and compare exact vs expansion (CSV output)
    VerifySphere {
        #[arg(long)]
        config: PathBuf,
        /// override the CSV output path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exactness ladder for the torus modified partition function
    VerifyTorus {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the identity suites (cocycle laws, theta lemma, two-route
    /// zeta, bosonization closure, c-tilde, equilibrium)
    Identities {
        #[arg(long)]
        config: PathBuf,
        /// run a single suite by name
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the quadratic coefficient of ln Z(N,V) - ln Z(N,0) against the
    /// quadrature functional
    FitB2 {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> error::Result<()> {
    match cli.command {
        Command::VerifySphere { config, out } => {
            let cfg = RunConfig::load(&config)?;
            commands::cmd_verify_sphere(&cfg, out.as_deref())
        }
        Command::VerifyTorus { config, out } => {
            let cfg = RunConfig::load(&config)?;
            commands::cmd_verify_torus(&cfg, out.as_deref())
        }
        Command::Identities { config, only, out } => {
            let cfg = RunConfig::load(&config)?;
            commands::cmd_identities(&cfg, only.as_deref(), out.as_deref())
        }
        Command::FitB2 { config, out } => {
            let cfg = RunConfig::load(&config)?;
            commands::cmd_fit_b2(&cfg, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
