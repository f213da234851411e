//! `catlab run | validate | list-experiments`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use catlab::harness::{
    apply_override, builtin_experiment, builtin_experiments, emit_plot_data, run, write_result,
    ExperimentConfig, RunOptions,
};
use catlab::{CatError, Result};

#[derive(Parser)]
#[command(name = "catlab", version, about = "Quantum cat map entropy experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write its CSV series, summary and plot script.
    Run {
        /// Config file, or the name of a built-in experiment.
        config: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Memory ceiling for history computations, in MiB.
        #[arg(long)]
        budget_mb: Option<u64>,
        /// Override a config field, e.g. `--set experiment.q=[2,3]`.
        #[arg(long = "set", value_name = "PATH=JSON")]
        overrides: Vec<String>,
    },
    /// Parse and validate a config without computing anything.
    Validate {
        config: String,
        #[arg(long = "set", value_name = "PATH=JSON")]
        overrides: Vec<String>,
    },
    /// List the built-in figure configs.
    ListExperiments,
}

fn load(config: &str, overrides: &[String], budget_mb: Option<u64>) -> Result<ExperimentConfig> {
    let text = if Path::new(config).exists() {
        fs::read_to_string(config)?
    } else {
        let b = builtin_experiments()
            .iter()
            .find(|b| b.name == config)
            .ok_or_else(|| {
                CatError::ConfigInvalid(format!("{config}: no such file or built-in experiment"))
            })?;
        b.json.to_string()
    };
    let mut doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CatError::ConfigInvalid(e.to_string()))?;
    for o in overrides {
        let (path, value) = o
            .split_once('=')
            .ok_or_else(|| CatError::ConfigInvalid(format!("override {o:?} lacks '='")))?;
        apply_override(&mut doc, path, value)?;
    }
    if let Some(mb) = budget_mb {
        apply_override(&mut doc, "budget.memory_mb", &mb.to_string())?;
    }
    let cfg: ExperimentConfig =
        serde_json::from_value(doc).map_err(|e| CatError::ConfigInvalid(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ListExperiments => {
            for b in builtin_experiments() {
                match builtin_experiment(b.name) {
                    Ok(c) => println!(
                        "{:<26} fig {:<6} {:<20} {}",
                        b.name,
                        c.figure.as_deref().unwrap_or("-"),
                        c.kind(),
                        c.description
                    ),
                    Err(e) => println!("{:<26} INVALID: {e}", b.name),
                }
            }
            Ok(0)
        }
        Command::Validate { config, overrides } => load(&config, &overrides, None).map(|c| {
            println!("{}: valid {} experiment", c.name, c.kind());
            0
        }),
        Command::Run {
            config,
            out,
            workers,
            budget_mb,
            overrides,
        } => load(&config, &overrides, budget_mb).and_then(|c| {
            let rs = run(&c, &RunOptions { workers })?;
            for p in write_result(&rs, &out)? {
                println!("wrote {}", p.display());
            }
            println!("wrote {}", emit_plot_data(&rs, &out)?.display());
            for s in &rs.skipped {
                eprintln!("skipped {}: {}", s.point, s.reason);
            }
            for v in &rs.violations {
                eprintln!("invariant violation: {v}");
            }
            eprintln!("{:.2} s on {} workers", rs.provenance.wall_seconds, rs.provenance.workers);
            Ok(rs.exit_code())
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CatError::ConfigInvalid(_) | CatError::Json(_) => 64,
                _ => 1,
            })
        }
    }
}
