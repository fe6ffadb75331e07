// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use atomnoise_cli::{load, presets, run, scenario::Severity, validate, CliError, RunOptions, OUT_DIR_ENV};
use clap::{Parser, Subcommand};

/// Quantum noise of light after a thin cloud of driven Zeeman-degenerate atoms.
#[derive(Parser)]
#[command(name = "atomnoise", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario and write CSV tables plus a JSON metadata record.
    Run {
        /// Scenario file (TOML).
        #[arg(required_unless_present = "preset", conflicts_with = "preset")]
        scenario: Option<PathBuf>,
        /// Run a shipped figure scenario instead of a file.
        #[arg(long, value_parser = presets::NAMES)]
        preset: Option<String>,
        /// Output directory [default: $ATOMNOISE_OUT_DIR, then ./out].
        #[arg(long)]
        out: Option<PathBuf>,
        /// Maximum number of worker threads.
        #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
        threads: Option<u16>,
    },
    /// Static checks of a scenario file; nothing is computed.
    Validate { scenario: PathBuf },
    /// Print the scenario text of a shipped preset.
    Preset {
        #[arg(value_parser = presets::NAMES)]
        name: String,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn execute(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Run { scenario, preset, out, threads } => {
            let text = match (&scenario, &preset) {
                (Some(path), _) => read(path)?,
                (None, Some(name)) => presets::text(name).expect("clap checked the preset name").to_string(),
                (None, None) => unreachable!("clap requires a scenario or a preset"),
            };
            let (plan, warnings) = load(&text)?;
            for w in &warnings {
                eprintln!("{w}");
            }
            let out_dir = out
                .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("out"));
            let report = run(&plan, &RunOptions { out_dir, threads: threads.map(usize::from) })?;
            for f in &report.files {
                println!("{}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { scenario } => {
            let diags = validate(&read(&scenario)?);
            for d in &diags {
                println!("{d}");
            }
            if diags.iter().any(|d| d.severity == Severity::Error) {
                return Ok(ExitCode::from(2));
            }
            if diags.is_empty() {
                println!("ok");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Preset { name } => {
            print!("{}", presets::text(&name).expect("clap checked the preset name"));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("atomnoise: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
