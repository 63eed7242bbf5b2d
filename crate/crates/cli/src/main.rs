use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use uncertop_cli::{run, RunError};

#[derive(Parser)]
#[command(
    name = "uncertop",
    about = "Batch runner for transform uncertainty experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every task of a JSON experiment config and write reports,
    /// CSV tables and a digest manifest into the output directory.
    Run {
        /// Path to the experiment config (JSON).
        config: PathBuf,
        /// Output directory (created if missing).
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Rayon thread count (default: one per core). Results do not depend
        /// on it; reductions are order-fixed.
        #[arg(long)]
        threads: Option<usize>,
        /// Override every task seed for ad-hoc reruns.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            threads,
            seed,
        } => {
            if let Some(n) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    eprintln!("warning: could not configure thread pool: {e}");
                }
            }
            match run(&config, &out, seed) {
                Ok(summary) => {
                    println!(
                        "{} task(s) executed; manifest at {}",
                        summary.tasks_run,
                        summary.manifest_path.display()
                    );
                    if summary.all_passed {
                        println!("all certificates passed");
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("certificate failure (see manifest)");
                        ExitCode::from(1)
                    }
                }
                Err(e @ RunError::Config(_)) => {
                    eprintln!("{e}");
                    ExitCode::from(2)
                }
                Err(e @ RunError::Numeric(_)) => {
                    eprintln!("{e}");
                    ExitCode::from(3)
                }
            }
        }
    }
}
