//! Orchestration for the skelxai benchmarks: generate synthetic data, train
//! the toy ensemble, evaluate attribution methods, test and report.

pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod evaluate;
pub mod generate;
pub mod output;
pub mod report;
pub mod svg;
pub mod train;
pub mod ttest;


use std::path::Path;

pub use config::{Overrides, Resolved, RunConfig, Scope};
pub use error::{HarnessError, Result};

/// Loads the config file (or defaults), applies overrides and resolves it.
/// Relative paths are taken from the config file's directory, or from the
/// working directory without a file.
pub fn resolve_config(path: Option<&Path>, overrides: &Overrides) -> Result<Resolved> {
    let (mut cfg, base) = match path {
        Some(p) => {
            let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
            (RunConfig::load(p)?, base)
        }
        None => (RunConfig::default(), std::env::current_dir().unwrap_or_default()),
    };
    let base = if base.as_os_str().is_empty() { std::env::current_dir().unwrap_or_default() } else { base };
    cfg.apply(overrides);
    cfg.resolve(&base)
}
