use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use proxlearn::runner::{self, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "proxlearn",
    version,
    about = "Run prox-learning experiments on time-varying games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a config file or a shipped preset.
    Run {
        config: Option<PathBuf>,
        /// Use seeds 0..N instead of the configured list.
        #[arg(long)]
        seeds: Option<u64>,
        /// Output directory (default: $PROXLEARN_OUT or ./proxlearn-out).
        #[arg(long, env = "PROXLEARN_OUT")]
        out: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
    },
    /// Print the shipped presets.
    ListPresets,
    /// Check a config without running it.
    Validate { config: PathBuf },
}

fn load(config: Option<PathBuf>, preset: Option<String>) -> Result<ExperimentConfig> {
    match (config, preset) {
        (Some(path), None) => ExperimentConfig::from_path(&path)
            .with_context(|| format!("reading {}", path.display())),
        (None, Some(name)) => Ok(runner::preset(&name)?),
        _ => bail!("pass either a config path or --preset NAME"),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::ListPresets => {
            for name in runner::list_presets() {
                println!("{name}");
            }
        }
        Command::Validate { config } => {
            let cfg = load(Some(config), None)?;
            let v = cfg.validate()?;
            for w in &v.warnings {
                eprintln!("warning: {w}");
            }
            println!("ok: {}", cfg.name);
        }
        Command::Run {
            config,
            seeds,
            out,
            preset,
        } => {
            let mut cfg = load(config, preset)?;
            if let Some(n) = seeds {
                cfg.seeds = (0..n).collect();
            }
            if out.is_some() {
                cfg.output_dir = out;
            }
            let summary = runner::run_experiment(&cfg)?;
            for w in &summary.warnings {
                eprintln!("warning: {w}");
            }
            let dir = runner::output_root(&cfg).join(&cfg.name);
            println!("wrote {}", dir.display());
            for (key, fit) in &summary.rate_fits {
                println!("{key}: slope {:.4} (R² {:.4})", fit.slope, fit.r_squared);
            }
            for s in summary.seeds.iter().filter(|s| s.error.is_some()) {
                eprintln!(
                    "seed {} failed: {}",
                    s.seed,
                    s.error.as_deref().unwrap_or_default()
                );
            }
            if summary.partial {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
