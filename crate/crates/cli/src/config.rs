use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "d4lab", version, about = "Bifurcation sets of D4 unfoldings: validation, meshes, classification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Validate,
    Mesh,
    Classify,
    Curves,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the normal-form conditions of a spec.
    Validate(Options),
    /// Write one OBJ mesh and one CSV sample table per sheet.
    Mesh(Options),
    /// Classify the parabolic-curve configuration.
    Classify(Options),
    /// Ridge and subparabolic emanation directions and edge predicates.
    Curves(Options),
}

impl Command {
    pub fn split(self) -> (CommandKind, Options) {
        match self {
            Command::Validate(o) => (CommandKind::Validate, o),
            Command::Mesh(o) => (CommandKind::Mesh, o),
            Command::Classify(o) => (CommandKind::Classify, o),
            Command::Curves(o) => (CommandKind::Curves, o),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Options {
    /// JSON spec file; when omitted, a random normalized spec is drawn from `--seed`.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value_t = 64)]
    pub theta_steps: usize,
    #[arg(long, default_value_t = 16)]
    pub z_steps: usize,
    #[arg(long, default_value_t = 0.1)]
    pub z_max: f64,
    /// Output directory; reports go to stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Mesh the quotient θ ∈ [0, π) instead of the double cover (ε₁ = −1 only).
    #[arg(long)]
    pub quotient: bool,
}

#[derive(Debug, Clone)]
pub enum SpecSource {
    File(PathBuf),
    Seed(u64),
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub spec: SpecSource,
    pub theta_steps: usize,
    pub z_steps: usize,
    pub z_max: f64,
    pub output_dir: Option<PathBuf>,
    pub quotient: bool,
}

impl RunConfig {
    pub fn new(command: CommandKind, o: Options) -> Result<Self, CliError> {
        if o.theta_steps < 8 {
            return Err(CliError::Invalid(format!("--theta-steps must be at least 8, got {}", o.theta_steps)));
        }
        if o.z_steps < 2 {
            return Err(CliError::Invalid(format!("--z-steps must be at least 2, got {}", o.z_steps)));
        }
        if !(o.z_max > 0.0 && o.z_max <= 0.5) {
            return Err(CliError::Invalid(format!("--z-max must lie in (0, 0.5], got {}", o.z_max)));
        }
        let spec = match (o.spec, o.seed) {
            (Some(path), _) => SpecSource::File(path),
            (None, Some(seed)) => SpecSource::Seed(seed),
            (None, None) => return Err(CliError::Invalid("either --spec or --seed is required".into())),
        };
        if command == CommandKind::Mesh && o.out.is_none() {
            return Err(CliError::Invalid("mesh needs --out".into()));
        }
        Ok(Self {
            command,
            spec,
            theta_steps: o.theta_steps,
            z_steps: o.z_steps,
            z_max: o.z_max,
            output_dir: o.out,
            quotient: o.quotient,
        })
    }
}
