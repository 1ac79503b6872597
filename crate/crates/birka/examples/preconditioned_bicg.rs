//! One BIRKA step's Kronecker systems solved by coupled BiCG, with and without
//! an ILUT preconditioner, against the sparse direct solve.
//!
//! ```bash
//! cargo run --release --example preconditioned_bicg
//! ```

use birka::birka::{initialize_guess, step_operator, step_rhs};
use birka::linalg::{vec, vecops::norm2};
use birka::models::{build_flow_model, FlowModelParams};
use birka::solvers::{bicg_dual_solve, build_ilut, direct_solve, BicgOptions};

fn main() -> birka::Result<()> {
    let sys = build_flow_model(&FlowModelParams::new(10))?;
    let guess = initialize_guess(0, 6, sys.m(), sys.p())?;
    let op = step_operator(&sys, &guess)?;
    let (bp, bd) = step_rhs(&sys, &guess)?;
    println!("operator order {} (n r = {} x {})", op.dim(), sys.n(), guess.order());

    let (exact, _) = direct_solve(&op, &bp, &bd)?;
    let x_ref = vec(&exact.solution);

    let plain = bicg_dual_solve(&op, &bp, &bd, BicgOptions::new(1e-10))?;
    println!("no preconditioner: {} / {} iterations", plain.0.iterations, plain.1.iterations);

    for drop in [1e-1, 1e-2, 1e-4] {
        let pre = build_ilut(&op, drop)?;
        let opts = BicgOptions { tol: 1e-10, maxit: None, precond: Some(&pre) };
        let (p, d) = bicg_dual_solve(&op, &bp, &bd, opts)?;
        let diff: Vec<_> = vec(&p.solution).iter().zip(&x_ref).map(|(a, b)| a - b).collect();
        println!(
            "ILUT drop {drop:.0e} (nnz {:>6}): {:>3} / {:>3} iterations, rel. error vs direct {:.1e}",
            pre.nnz(),
            p.iterations,
            d.iterations,
            norm2(&diff) / norm2(&x_ref)
        );
    }
    Ok(())
}
