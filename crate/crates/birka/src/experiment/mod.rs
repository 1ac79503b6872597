//! Drivers behind the command-line tool: single reductions and tolerance/seed sweeps
//! that write CSV tables and a JSON summary.

mod reduce;
mod sweep;

pub use reduce::{run_reduce, ReduceOptions, ReduceSummary};
pub use sweep::{run_experiment, CellOutcome, ExperimentConfig, ExperimentSummary, OrderSpread};

use crate::models::{build_flow_model, build_heat_model, FlowModelParams, HeatModelParams};
use crate::system::io::read_system;
use crate::{BilinearSystem, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Which full model to reduce.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelSpec {
    Heat(HeatModelParams),
    Flow(FlowModelParams),
    /// A system directory as written by [`crate::system::io::write_system`].
    File { path: PathBuf },
}

impl ModelSpec {
    pub fn build(&self) -> Result<BilinearSystem> {
        match self {
            ModelSpec::Heat(p) => build_heat_model(p),
            ModelSpec::Flow(p) => build_flow_model(p),
            ModelSpec::File { path } => read_system(path),
        }
    }
}

pub(crate) fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}
