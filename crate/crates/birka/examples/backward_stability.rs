//! Per-iteration backward-stability table for an inexact run: residual sizes,
//! the perturbation `F` of `A`, its bound, and how well the inexact reduced
//! model matches an exact projection of `A + F`.
//!
//! ```bash
//! cargo run --release --example backward_stability
//! ```

use birka::birka::{run_birka, BirkaConfig, SolverMode};
use birka::models::{build_heat_model, HeatModelParams};
use birka::stability::stability_history;

fn main() -> birka::Result<()> {
    let sys = build_heat_model(&HeatModelParams::new(10))?;
    let cfg = BirkaConfig::new(6).seed(0).solver(SolverMode::bicg(1e-4)).capture_bases(true);
    let result = run_birka(&sys, &cfg)?;
    let rows = stability_history(&sys, &result)?;

    println!(
        "{:>3} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "it", "|R_B|col", "||F||_2", "||F||_F", "bound", "F^^", "proj gap", "W'FV"
    );
    for r in &rows {
        println!(
            "{:>3} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}",
            r.iteration, r.r_b_max_col, r.f_norm_2, r.f_norm_f, r.f_bound, r.fhh_norm, r.projection_defect, r.reduced_f_defect
        );
    }
    let chain = rows.iter().all(|r| r.bound_chain_holds());
    let twice = rows.iter().all(|r| r.fhh_within_twice());
    println!("bound chain holds on every step: {chain}; F^^ <= 2||F|| on every step: {twice}");
    Ok(())
}
