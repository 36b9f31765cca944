//! Std side of annotext: resource files, corpus IO, the HTTP service and
//! the command-line tools built on `annotext-core`.

pub mod bench;
pub mod build;
pub mod config;
pub mod corpus;
pub mod evaluation;
pub mod service;
pub mod store;
pub mod synth;
pub mod wire;

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use annotext_core::edl::ClassifierModel;
use annotext_core::pipeline::{Pipeline, PipelineConfig};

pub fn read_model(path: &Path) -> Result<ClassifierModel> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Loads resources, model and (optionally) configuration into a pipeline.
pub fn load_pipeline(resources: &Path, model: &Path, config: Option<&Path>) -> Result<Pipeline> {
    let res = store::load_resources(resources).with_context(|| format!("loading {}", resources.display()))?;
    let model = read_model(model)?;
    let config = match config {
        Some(p) => config::load_config(p)?,
        None => PipelineConfig::default(),
    };
    Ok(Pipeline::new(res, model, config))
}
