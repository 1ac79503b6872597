//! Exact BIRKA on the 2-D heat model (K = 10, order 100) down to r = 6.
//!
//! ```bash
//! cargo run --release --example reduce_heat
//! ```

use birka::birka::{run_birka, BirkaConfig, SolverMode};
use birka::models::{build_heat_model, HeatModelParams};
use birka::system::h2_norm_kron;

fn main() -> birka::Result<()> {
    let sys = build_heat_model(&HeatModelParams::new(10))?;
    println!("{}: n={} m={} p={}  ||H||_H2 = {:.6}", sys.label, sys.n(), sys.m(), sys.p(), h2_norm_kron(&sys)?);

    let cfg = BirkaConfig::new(6).btol(1e-8).solver(SolverMode::Direct).seed(0).track_h2_error(true);
    let result = run_birka(&sys, &cfg)?;

    println!("{:>4}  {:>12}  {:>12}", "it", "rel change", "H2 error");
    for h in &result.history {
        let err = h.h2_error.map_or("-".to_string(), |e| format!("{e:.6e}"));
        println!("{:>4}  {:>12.3e}  {:>12}", h.iteration, h.relative_change, err);
    }
    println!("converged: {}  reduced order: {}", result.converged, result.reduced.n());
    for w in &result.warnings {
        println!("warning: {w}");
    }
    Ok(())
}
