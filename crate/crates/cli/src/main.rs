mod commands;
mod config;
mod error;
mod input;
mod mesh;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::commands::Outcome;
use crate::config::{Cli, CommandKind, RunConfig};
use crate::error::CliError;

fn command_name(kind: CommandKind) -> &'static str {
    match kind {
        CommandKind::Validate => "validate",
        CommandKind::Mesh => "mesh",
        CommandKind::Classify => "classify",
        CommandKind::Curves => "curves",
    }
}

fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let outcome = match config.command {
        CommandKind::Validate => commands::validate(config),
        CommandKind::Mesh => commands::mesh(config),
        CommandKind::Classify => commands::classify(config),
        CommandKind::Curves => commands::curves(config),
    }?;
    let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    match &config.output_dir {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join(format!("{}.json", command_name(config.command))), text + "\n")?;
        }
        // A closed pipe downstream is not an error of ours.
        None => {
            let _ = writeln!(std::io::stdout().lock(), "{text}");
        }
    }
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (kind, options) = cli.command.split();
    let result = RunConfig::new(kind, options).and_then(|config| run(&config));
    match result {
        Ok(outcome) => ExitCode::from(outcome.exit_code),
        Err(e) => {
            eprintln!("d4lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
