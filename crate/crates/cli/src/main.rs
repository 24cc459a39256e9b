use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use shortwave::config::{ExperimentConfig, Kind, RawConfig};

/// Short-interval statistics of L-function coefficients.
#[derive(Parser, Debug)]
#[command(name = "shortwave", version, about)]
struct Cli {
    /// Experiment to run
    #[arg(value_enum)]
    kind: Kind,
    /// JSON config file (or a prior run's manifest.json); flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: RawConfig,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(p) => match RawConfig::from_file(p) {
            Ok(c) => c,
            Err(errs) => return invalid(&errs),
        },
        None => RawConfig::default(),
    };
    let cfg = match ExperimentConfig::resolve(cli.kind, &file.overlay(&cli.flags)) {
        Ok(c) => c,
        Err(errs) => return invalid(&errs),
    };
    match shortwave::run(&cfg) {
        Ok(m) if m.passed => {
            println!("{}: all {} checks passed, outputs in {}", cfg.kind.name(), m.checks.len(), cfg.out.display());
            ExitCode::SUCCESS
        }
        Ok(m) => {
            let failed: Vec<&str> = m.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
            eprintln!("stage `checks` failed: {} of {} checks failed ({})", failed.len(), m.checks.len(), failed.join(", "));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}

fn invalid(errs: &[String]) -> ExitCode {
    eprintln!("invalid configuration:");
    for e in errs {
        eprintln!("  {e}");
    }
    ExitCode::from(2)
}
