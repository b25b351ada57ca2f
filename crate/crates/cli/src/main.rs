use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nmlm_cli::commands::{cmd_run, cmd_sweep, cmd_verify, GlobalOptions, EXIT_ERROR, VERIFY_ORDERS};
use nmlm_core::verify::Library;

#[derive(Parser)]
#[command(name = "nmlm", version, about = "Steady 1D rarefied-gas solver with nonlinear multilevel moment acceleration")]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory, overriding the config's `output`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one benchmark and write profile, history and summary.
    Run {
        #[arg(env = "NMLM_CONFIG")]
        config: PathBuf,
    },
    /// Run a single-level baseline and multilevel variants over grid sizes.
    Sweep {
        #[arg(env = "NMLM_CONFIG")]
        config: PathBuf,
    },
    /// Check the velocity-space routines against quadrature.
    Verify {
        /// Orders to check.
        #[arg(long, value_delimiter = ',', default_values_t = VERIFY_ORDERS)]
        orders: Vec<usize>,
        /// Randomised states per order.
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_ERROR as u8);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    }
    let opts = GlobalOptions {
        out: cli.out,
        quiet: cli.quiet,
    };
    let code = match &cli.command {
        Command::Run { config } => cmd_run(config, &opts),
        Command::Sweep { config } => cmd_sweep(config, &opts),
        Command::Verify { orders, cases } => cmd_verify(&Library, orders, *cases, &opts),
    };
    ExitCode::from(code as u8)
}
