//! Inexact BIRKA on the Carleman-lifted Burgers model: how the BiCG tolerance
//! shows up in the distance between exact and inexact reduced models.
//!
//! ```bash
//! cargo run --release --example inexact_flow
//! ```

use birka::birka::{run_birka, BirkaConfig, SolverMode};
use birka::models::{build_flow_model, FlowModelParams};
use birka::system::h2_error_squared;

fn main() -> birka::Result<()> {
    let sys = build_flow_model(&FlowModelParams::new(10))?;
    let base = BirkaConfig::new(6).btol(1e-6).seed(3);
    let exact = run_birka(&sys, &base.clone().solver(SolverMode::Direct))?;
    println!("exact: {} steps, converged {}", exact.iterations, exact.converged);

    for tol in [1e-2, 1e-4, 1e-6, 1e-8] {
        let run = run_birka(&sys, &base.clone().solver(SolverMode::bicg(tol)))?;
        let bicg_its: usize = run.history.iter().map(|h| h.primal.iterations.max(h.dual.iterations)).sum();
        let dist = h2_error_squared(&exact.reduced, &run.reduced)?;
        println!(
            "tol {tol:>6.0e}: {:>3} outer steps, {:>5} BiCG iterations, ||exact - inexact||^2 = {dist:.3e}",
            run.iterations, bicg_its
        );
    }
    Ok(())
}
