use std::path::PathBuf;

use fracspec::backend::Backend;
use fracspec::descriptor::parse_descriptors;
use fracspec::registry;
use fracspec::BackendKind;
use serde::Serialize;

use crate::{BackendArg, CliError, Command, Format, Options};

/// Everything that determines a run, echoed at the top of each report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub backend: BackendArg,
    pub universe: String,
    pub inputs: Vec<PathBuf>,
    pub bound_size: Option<usize>,
    pub bound_probe: Option<usize>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_options(command: &Command, o: &Options) -> Self {
        let command = match command {
            Command::Classify { .. } => "classify".to_string(),
            Command::Laws { .. } => "laws".to_string(),
            Command::Spec => "spec".to_string(),
            Command::Reproduce { id } => format!("reproduce {id}"),
        };
        RunConfig {
            command,
            backend: o.backend,
            universe: o.universe.clone(),
            inputs: o.inputs.clone(),
            bound_size: o.bound_size.map(|b| b as usize),
            bound_probe: o.bound_probe.map(|b| b as usize),
            format: o.format,
            seed: o.seed,
        }
    }

    pub fn kind(&self) -> BackendKind {
        self.backend.into()
    }

    /// An empty backend of `kind` carrying the configured bounds.
    pub fn base(&self, kind: BackendKind) -> Backend {
        let mut b = Backend::new(kind);
        if let Some(n) = self.bound_size {
            b = b.with_size_bound(n);
        }
        if let Some(n) = self.bound_probe {
            b = b.with_probe_bound(n);
        }
        b
    }

    /// A named universe of `kind` with the configured bounds.
    pub fn universe_of(&self, name: &str, kind: BackendKind) -> Result<Backend, CliError> {
        Ok(registry::universe(name, self.base(kind))?)
    }

    /// The universe selected by `--universe` and `--input`. Each input
    /// object is registered together with its subobjects.
    pub fn build_universe(&self) -> Result<Backend, CliError> {
        let kind = self.kind();
        let mut b = self.base(kind);
        for name in self.universe.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            b = registry::universe(name, b)?;
        }
        for path in &self.inputs {
            let shown = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: shown.clone(),
                source,
            })?;
            let wrap = |source| CliError::Input {
                path: shown.clone(),
                source,
            };
            for d in parse_descriptors(&text).map_err(wrap)? {
                let obj = d.build(kind, b.size_bound()).map_err(wrap)?;
                b.check_size(&obj).map_err(wrap)?;
                registry::register_with_subobjects(&mut b, &obj, &|_| None).map_err(wrap)?;
            }
        }
        Ok(b.with_label(self.universe.clone()))
    }
}
