use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use utgrade_cli::config::Format;
use utgrade_cli::job::EXIT_ERROR;
use utgrade_cli::{load, render, run, RunOptions};

/// Graded automorphism groups of upper triangular matrix algebras.
#[derive(Parser)]
#[command(name = "utgrade", version)]
struct Args {
    /// JSON job file
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the format in the config
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Overrides the enumeration budget in the config
    #[arg(long)]
    budget: Option<u64>,
    /// Overrides the seed in the config
    #[arg(long)]
    seed: Option<u64>,
    /// Include wall-clock times in the report
    #[arg(long)]
    wall_clock: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let mut cfg = match load(&text) {
        Ok(c) => c,
        Err(diags) => {
            eprint!("{}", render::diagnostics(&diags));
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    if let Some(f) = args.format {
        cfg.format = f;
    }
    if let Some(b) = args.budget {
        cfg.budget = b;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    let outcome = run(&cfg, &RunOptions { wall_clock: args.wall_clock });
    let body = match cfg.format {
        Format::Json => outcome.report.to_json(),
        Format::Text => render::text(&outcome.report),
    };
    let written = match &args.out {
        Some(path) => std::fs::write(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_ERROR as u8);
    }
    if let Some(e) = &outcome.report.error {
        eprintln!("error: {e}");
    }
    ExitCode::from(outcome.exit_code as u8)
}
