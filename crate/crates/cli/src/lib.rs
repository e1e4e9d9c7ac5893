//! Batch front end: builds a universe from flags and descriptor files, runs
//! one command and renders its report.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fracspec::CatError;
use serde::Serialize;

pub mod classify;
pub mod config;
pub mod laws;
pub mod reproduce;
pub mod spec;
mod text;

pub use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "fracspec", version, about = "Essential monomorphisms and spectral categories of finite algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Ambient category.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Grp)]
    pub backend: BackendArg,
    /// Built-in universe, or several separated by commas.
    #[arg(long, global = true, default_value = "trivial")]
    pub universe: String,
    /// Object descriptor file (JSON); may be repeated.
    #[arg(long = "input", global = true, value_name = "PATH")]
    pub inputs: Vec<PathBuf>,
    /// Largest object admitted by the backend.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub bound_size: Option<u64>,
    /// Largest probe object used by cancellation cross-checks.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub bound_probe: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write the JSON artifact of the command to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Recorded in every report. No command currently draws random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Classify every mono between registered objects.
    Classify {
        /// The designated class S.
        #[arg(long, value_enum, default_value_t = ClassArg::AllMonos)]
        class: ClassArg,
    },
    /// Check the closure and cancellation laws of the derived mono classes.
    Laws {
        /// The designated class S.
        #[arg(long, value_enum, default_value_t = ClassArg::AllMonos)]
        class: ClassArg,
    },
    /// Build the spectral category of the universe.
    Spec,
    /// Run a built-in scripted check.
    Reproduce {
        /// One of the ids printed by `reproduce list`.
        id: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendArg {
    Grp,
    Ab,
    Pset,
}

impl From<BackendArg> for fracspec::BackendKind {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Grp => fracspec::BackendKind::Group,
            BackendArg::Ab => fracspec::BackendKind::AbelianGroup,
            BackendArg::Pset => fracspec::BackendKind::PointedSet,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassArg {
    AllMonos,
    NormalMonos,
}

impl ClassArg {
    pub fn spec(self) -> fracspec::monoclass::MonoClassSpec {
        match self {
            ClassArg::AllMonos => fracspec::monoclass::MonoClassSpec::AllMonos,
            ClassArg::NormalMonos => fracspec::monoclass::MonoClassSpec::NormalMonos,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    PropertyFailure = 1,
    InputError = 2,
    BoundExceeded = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: String, source: CatError },
    #[error("unknown reproduce id `{id}`; known ids: {known}")]
    UnknownId { id: String, known: String },
    #[error(transparent)]
    Engine(#[from] CatError),
}

impl CliError {
    pub fn status(&self) -> Status {
        let e = match self {
            CliError::Io { .. } | CliError::UnknownId { .. } => return Status::InputError,
            CliError::Input { source, .. } | CliError::Engine(source) => source,
        };
        match e {
            CatError::BoundExceeded { .. } => Status::BoundExceeded,
            CatError::Consistency(_) | CatError::ConditionFailed { .. } => Status::PropertyFailure,
            _ => Status::InputError,
        }
    }
}

/// What a command hands back for printing.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub status: Status,
    /// Report in the requested format, newline-terminated.
    pub stdout: String,
    /// JSON written to `--out` when given.
    pub artifact: String,
}

impl Outcome {
    pub fn new<R: Serialize>(passed: bool, report: &R, text: String, format: Format) -> Self {
        let json = to_json(report);
        Outcome {
            status: if passed { Status::Pass } else { Status::PropertyFailure },
            stdout: match format {
                Format::Json => json.clone(),
                Format::Text => text,
            },
            artifact: json,
        }
    }
}

pub(crate) fn to_json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub(crate) fn to_compact_json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn execute(command: &Command, options: &Options) -> Result<Outcome, CliError> {
    let config = RunConfig::from_options(command, options);
    match command {
        Command::Classify { class } => classify::run(&config, *class),
        Command::Laws { class } => laws::run(&config, *class),
        Command::Spec => spec::run(&config),
        Command::Reproduce { id } => reproduce::run(&config, id),
    }
}
