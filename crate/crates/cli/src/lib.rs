// Copyright 2026 The atomnoise Authors
// SPDX-License-Identifier: Apache-2.0

//! Scenario files in, CSV spectra and a JSON metadata record out.
//!
//! Exit codes: `2` configuration, `3` computation, `4` I/O.

use std::path::PathBuf;

use thiserror::Error;

pub mod presets;
pub mod runner;
pub mod scenario;

pub use runner::{run, RunOptions, RunReport};
pub use scenario::{Diagnostic, Plan, Severity};

/// Version of the sign, ordering and normalization conventions recorded in
/// every metadata file.
pub const CONVENTIONS_VERSION: &str = "1";

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ATOMNOISE_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", render(.0))]
    Config(Vec<Diagnostic>),

    #[error("computation failed at {point}: {source}")]
    Compute {
        point: String,
        #[source]
        source: atomnoise::Error,
    },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Compute { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }

    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        CliError::Config(vec![Diagnostic { severity: Severity::Error, field: field.into(), message: message.into() }])
    }
}

fn render(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n")
}

/// Parse and resolve scenario text. Warnings travel with the plan.
pub fn load(text: &str) -> Result<(Plan, Vec<Diagnostic>), CliError> {
    let file = scenario::parse(text).map_err(|m| CliError::config("toml", m))?;
    scenario::resolve(&file).map_err(CliError::Config)
}

/// Static diagnostics for scenario text. A parse failure is reported as a
/// single error.
pub fn validate(text: &str) -> Vec<Diagnostic> {
    match scenario::parse(text) {
        Ok(file) => scenario::validate(&file),
        Err(m) => vec![Diagnostic { severity: Severity::Error, field: "toml".into(), message: m }],
    }
}
