//! A small seed/tolerance sweep written to CSV tables and a JSON summary, the
//! same driver the `birka experiment` subcommand uses.
//!
//! ```bash
//! cargo run --release --example experiment_sweep
//! ```

use birka::experiment::{run_experiment, ExperimentConfig, ModelSpec};
use birka::models::FlowModelParams;

fn main() -> birka::Result<()> {
    let out = std::env::temp_dir().join("birka-sweep");
    let mut cfg = ExperimentConfig::new(ModelSpec::Flow(FlowModelParams::new(6)), out.clone());
    cfg.r_values = vec![3];
    cfg.seeds = vec![0, 1, 2];
    cfg.tolerances = vec![1e-2, 1e-6, 1e-10];
    let summary = run_experiment(&cfg)?;

    for (tol, err) in &summary.median_final_h2_error_sq {
        println!("tol {tol:.0e}: median ||exact - inexact||^2 = {}", err.map_or("n/a".into(), |e| format!("{e:.3e}")));
    }
    for s in &summary.table4 {
        println!("r = {}: ||(W'V)^-1 W'||_F in [{:.4}, {:.4}]", s.r, s.min, s.max);
    }
    println!("tables in {}", out.display());
    Ok(())
}
