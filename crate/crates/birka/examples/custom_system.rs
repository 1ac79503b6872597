//! Bring your own model: build a bilinear system from dense matrices, save it in
//! the Matrix Market directory format, read it back and reduce it.
//!
//! ```bash
//! cargo run --release --example custom_system
//! ```

use birka::birka::{run_birka, BirkaConfig};
use birka::linalg::Mat;
use birka::system::io::{read_system, write_system};
use birka::system::h2_error;
use birka::BilinearSystem;

fn main() -> birka::Result<()> {
    let n = 30;
    // a damped chain with one bilinear actuator at the left end
    let a = Mat::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => -2.5,
        1 => 1.0,
        _ => 0.0,
    });
    let n1 = Mat::from_fn(n, n, |i, j| if i == 0 && j == 0 { 0.8 } else { 0.0 });
    let b = Mat::from_fn(n, 1, |i, _| if i == 0 { 1.0 } else { 0.0 });
    let c = Mat::from_fn(1, n, |_, j| 1.0 / (1.0 + j as f64));
    let sys = BilinearSystem::from_dense(&a, &[n1], &b, &c)?.with_label("chain");

    let dir = std::env::temp_dir().join("birka-custom-system");
    write_system(&dir, &sys)?;
    let back = read_system(&dir)?;
    println!("wrote and reloaded {} (n = {}) at {}", back.label, back.n(), dir.display());

    for r in [2, 4, 6] {
        let res = run_birka(&back, &BirkaConfig::new(r).btol(1e-8))?;
        println!("r = {r}: {} steps, ||H - H_r||_H2 = {:.3e}", res.iterations, h2_error(&back, &res.reduced)?);
    }
    Ok(())
}
