use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use heun_spectra::{run, CliError, Mode, RunConfig};

/// Confluent Heun functions and Kerr electromagnetic spectra.
#[derive(Debug, Parser)]
#[command(name = "heun-spectra", version)]
struct Args {
    #[arg(value_enum)]
    mode: Mode,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    if let Some(n) = args.jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    let cfg = RunConfig::load(&args.config)?;
    let dir = args.out.clone().unwrap_or_else(|| cfg.output.dir.clone());
    let report = run(args.mode, &cfg, &dir)?;
    for line in &report.lines {
        println!("{line}");
    }
    for f in &report.files {
        eprintln!("wrote {}", f.display());
    }
    Ok(())
}
