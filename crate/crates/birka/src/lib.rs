//! H2-optimal model reduction of bilinear systems.
//!
//! A bilinear system `x' = Ax + sum_k N_k x u_k + Bu, y = Cx` is reduced by the
//! bilinear iterative rational Krylov algorithm ([`birka::run_birka`]). The two
//! Kronecker-structured linear systems inside each outer step are solved either
//! exactly (sparse LU) or inexactly with a coupled primal/dual BiCG recurrence.
//! The [`stability`] module turns the residuals of the inexact solves into a
//! backward perturbation of `A` and measures how far the inexact run is from an
//! exact run on the perturbed model.
//!
//! ```no_run
//! use birka::birka::{run_birka, BirkaConfig, SolverMode};
//! use birka::models::{build_heat_model, HeatModelParams};
//!
//! let sys = build_heat_model(&HeatModelParams::new(10)).unwrap();
//! let cfg = BirkaConfig::new(6).btol(1e-3).solver(SolverMode::Direct).seed(1);
//! let result = run_birka(&sys, &cfg).unwrap();
//! println!("converged={} after {} steps", result.converged, result.iterations);
//! ```

pub mod birka;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod models;
pub mod solvers;
pub mod stability;
pub mod system;

pub use error::{Error, Result};
pub use linalg::{c64, Mat};
pub use system::BilinearSystem;
