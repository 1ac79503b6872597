//! The H2 norm two ways: an assembled Kronecker solve and a generalized
//! Lyapunov equation. Also shows the error-system form used for distances.
//!
//! ```bash
//! cargo run --release --example h2_norms
//! ```

use birka::linalg::Mat;
use birka::models::{build_flow_model, build_heat_model, FlowModelParams, HeatModelParams};
use birka::system::{h2_error, h2_norm_kron, h2_norm_lyap, solve_generalized_lyapunov};
use birka::BilinearSystem;

fn report(sys: &BilinearSystem) -> birka::Result<()> {
    let (k, l) = (h2_norm_kron(sys)?, h2_norm_lyap(sys)?);
    let path = solve_generalized_lyapunov(sys)?.path;
    println!("{:<14} kron {k:.12}  lyap {l:.12}  rel diff {:.1e}  ({path:?})", sys.label, (k - l).abs() / k);
    Ok(())
}

fn main() -> birka::Result<()> {
    report(&build_heat_model(&HeatModelParams::new(10))?)?;
    report(&build_flow_model(&FlowModelParams::new(8))?)?;

    // scalar x' = -x + 0.5 x u + u, y = x has ||H||^2 = 1 / (2 - 0.25)
    let one = |v: f64| Mat::from_fn(1, 1, |_, _| v);
    let s = BilinearSystem::from_dense(&one(-1.0), &[one(0.5)], &one(1.0), &one(1.0))?.with_label("scalar");
    report(&s)?;
    println!("closed form      {:.12}", (1.0f64 / 1.75).sqrt());

    let t = BilinearSystem::from_dense(&one(-2.0), &[one(0.5)], &one(1.0), &one(1.0))?;
    println!("||scalar - shifted||_H2 = {:.6e}", h2_error(&s, &t)?);
    Ok(())
}
