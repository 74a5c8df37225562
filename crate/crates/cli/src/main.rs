//! Batch front end: JSON scenario configs in, CSV/JSON out.
//!
//! Exit codes: 0 success, 2 configuration/validation failure,
//! 3 numeric non-convergence (the message names the failing operation).

mod commands;
mod pool;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "relay-aser",
    version,
    about = "ASER of QAM over dual-hop DF relays in mixed eta-mu / kappa-mu fading"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep the exact and asymptotic ASER over the configured SNR grid (CSV).
    Aser {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Suppress the relay: outage forced certain, direct link only.
        #[arg(long)]
        direct_only: bool,
        /// Worker threads for the sweep grid.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Sweep the asymptotic ASER only (CSV).
    Asym {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        direct_only: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Solve the optimal source/relay power split (JSON).
    PowerOpt {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Solver tolerance on xi.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Monte Carlo sweep; appends mc_aser/mc_stderr columns to the CSV schema.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Trial-count override.
        #[arg(long)]
        trials: Option<u64>,
        /// Worker threads for the trial loop.
        #[arg(long)]
        workers: Option<usize>,
        /// semi-analytic | symbol-level.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        direct_only: bool,
    },
    /// Probe one special function: name plus JSON argument array.
    Specfun {
        #[command(subcommand)]
        cmd: SpecfunCmd,
    },
}

#[derive(Subcommand)]
enum SpecfunCmd {
    /// Evaluate `name` at the JSON argument array, e.g.
    /// `specfun eval fd '[0.5, [1,1], 2, [0,0]]'`.
    Eval { name: String, args: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Aser { config, out, direct_only, workers } => {
            commands::cmd_aser(&config, out.as_deref(), direct_only, workers, false)
        }
        Cmd::Asym { config, out, direct_only, workers } => {
            commands::cmd_aser(&config, out.as_deref(), direct_only, workers, true)
        }
        Cmd::PowerOpt { config, out, tol } => commands::cmd_power_opt(&config, out.as_deref(), tol),
        Cmd::Simulate { config, out, seed, trials, workers, mode, direct_only } => {
            commands::cmd_simulate(
                &config,
                out.as_deref(),
                commands::SimOverrides { seed, trials, workers, mode, direct_only },
            )
        }
        Cmd::Specfun { cmd: SpecfunCmd::Eval { name, args } } => {
            commands::cmd_specfun_eval(&name, &args)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
