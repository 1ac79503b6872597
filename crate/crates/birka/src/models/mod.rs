//! Benchmark systems: a 2-D heat-transfer model with boundary control and a
//! Carleman-bilinearized 1-D Burgers flow model.

mod flow;
mod heat;

pub use flow::{build_flow_model, flow_rhs, FlowModelParams};
pub use heat::{build_heat_model, HeatModelParams};
