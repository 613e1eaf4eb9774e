use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use udw_cli::presets::{listing, preset};
use udw_cli::runner::{resolve_tolerance, run};
use udw_cli::scenario::Scenario;

#[derive(Parser)]
#[command(name = "udw", version, about = "Detector response to Gaussian Fock wavepackets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        config: PathBuf,
        /// Write here instead of the path named in the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run a built-in figure preset.
    Preset {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// List the built-in presets.
    ListPresets,
    /// Check a scenario file without running it.
    Validate { config: PathBuf },
}

fn execute(s: &Scenario, out: Option<PathBuf>, tol: Option<f64>, jobs: Option<usize>) -> Result<()> {
    if jobs == Some(0) {
        bail!("--jobs must be at least 1");
    }
    let rel_tol = resolve_tolerance(tol, s)?;
    let (summary, text) = run(s, rel_tol, jobs, out).with_context(|| format!("scenario `{}` failed", s.name))?;
    match &summary.path {
        Some(p) => eprintln!("{}: {} rows, rel_tol {:e} -> {}", summary.name, summary.rows, summary.rel_tol, p.display()),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            r => r?,
        },
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Run { config, out, tol, jobs } => execute(&Scenario::from_file(&config)?, out, tol, jobs),
        Command::Preset { name, out, tol, jobs } => {
            let Some(s) = preset(&name) else {
                bail!("unknown preset `{name}`; see `udw list-presets`");
            };
            execute(&s, out, tol, jobs)
        }
        Command::ListPresets => {
            print!("{}", listing());
            Ok(())
        }
        Command::Validate { config } => {
            let s = Scenario::from_file(&config)?;
            println!("ok: {} ({:?}, {} points)", s.name, s.kind, s.points().len());
            Ok(())
        }
    }
}
