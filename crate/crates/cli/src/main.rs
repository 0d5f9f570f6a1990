use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use valvechain::{parse_config, run_experiment};

/// Run a valve-chain experiment described by a config file.
#[derive(Parser, Debug)]
#[command(name = "valvechain", version)]
struct Args {
    /// Experiment config (`key = value` lines).
    config: PathBuf,

    /// Directory for output files; overrides `output_path`.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Master seed; overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,

    /// Do not print the path of the written file.
    #[arg(long)]
    quiet: bool,
}

fn run(args: &Args) -> Result<PathBuf, String> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let mut cfg = parse_config(&text).map_err(|e| format!("{}: {e}", args.config.display()))?;
    if let Some(dir) = &args.output {
        cfg.output_path = dir.clone();
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    run_experiment(&cfg).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(path) => {
            if !args.quiet {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(reason) => {
            eprintln!("error: {reason}");
            ExitCode::FAILURE
        }
    }
}
