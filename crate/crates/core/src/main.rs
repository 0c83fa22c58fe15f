use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mcforge::experiments::{list_experiments, run_experiment, ExperimentSpec, DEFAULT_SEED};
use mcforge::Error;

#[derive(Parser)]
#[command(name = "mcforge", version, about = "Reproducible Monte Carlo experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write <name>.csv and <name>.summary.txt.
    Run {
        name: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Sample size, iteration count or simulation count.
        #[arg(long)]
        n: Option<usize>,
        /// Leapfrog step size.
        #[arg(long)]
        eps: Option<f64>,
        /// Leapfrog steps per trajectory.
        #[arg(long)]
        steps: Option<usize>,
        /// Proposal scale.
        #[arg(long)]
        scale: Option<f64>,
        /// ABC tolerance quantile.
        #[arg(long)]
        quantile: Option<f64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Use the full original sample sizes.
        #[arg(long)]
        full: bool,
    },
    /// List the available experiments.
    List,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            print!("{}", list_experiments());
            ExitCode::SUCCESS
        }
        Command::Run {
            name,
            seed,
            n,
            eps,
            steps,
            scale,
            quantile,
            out,
            full,
        } => {
            let spec = ExperimentSpec {
                name,
                seed,
                n,
                eps,
                steps,
                scale,
                quantile,
                full,
                out_dir: out,
            };
            match run_experiment(&spec) {
                Ok(o) => {
                    println!("{}", o.csv_path.display());
                    println!("{}", o.summary_path.display());
                    ExitCode::SUCCESS
                }
                Err(Error::Lookup { name, .. }) => {
                    eprintln!("unknown experiment `{name}`; available experiments:");
                    eprint!("{}", list_experiments());
                    ExitCode::from(2)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
    }
}
