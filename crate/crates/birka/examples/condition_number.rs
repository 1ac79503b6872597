//! Norms of the error-system operator `Q` and the H2 condition number with
//! respect to perturbations of `A`. The estimate needs `||Q^-1|| < 1`; when
//! that fails the reason comes back as an error instead of a number.
//!
//! ```bash
//! cargo run --release --example condition_number
//! ```

use birka::models::{build_flow_model, build_heat_model, FlowModelParams, HeatModelParams};
use birka::stability::condition_number_with;
use birka::system::qhat_diagnostics;

fn main() -> birka::Result<()> {
    for sys in [build_heat_model(&HeatModelParams::new(10))?, build_flow_model(&FlowModelParams::new(10))?] {
        let q = qhat_diagnostics(&sys)?;
        println!("{}", sys.label);
        println!("  sigma_min(G) = {:.4e}, sigma_max(G) = {:.4e}", q.base_sigma_min, q.base_sigma_max);
        println!("  ||Q^-1|| = {:.4e}   1/||Q|| = {:.4e}", q.qinv_norm, q.qhat_norm_reciprocal);
        match condition_number_with(&sys, q) {
            Ok(k) => println!("  k = {:.4e}  (||A|| = {:.3e}, ||B_hat|| = {:.3e}, ||H|| = {:.4})", k.value, k.a_norm, k.bhat_norm, k.h2_norm),
            Err(e) => println!("  k unavailable: {e}"),
        }
    }
    Ok(())
}
