use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "goldfish", version, about = "Goldfish N-body simulations and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configured system and write its trajectory as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run property suites: all, symfun, geometry, poisson, dynamics, reduction or hyperbolic.
    Verify {
        selector: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Report to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock seconds per check (makes the report non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Run several solvers on one configuration and tabulate their discrepancies.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        solvers: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Simulate { config, out } => goldfish_cli::run_simulate(&config, &out),
        Command::Verify {
            selector,
            seed,
            out,
            timings,
        } => goldfish_cli::run_verify(&selector, seed, timings, out.as_deref()),
        Command::Compare {
            config,
            solvers,
            out,
        } => goldfish_cli::run_compare(&config, &solvers, &out),
    };
    match result {
        Ok(code) => {
            if code == 3 {
                eprintln!("goldfish: solver stopped early; partial output written");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("goldfish: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
