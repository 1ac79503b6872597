//! Solvers for the two Kronecker-structured systems of each reduction step.
//!
//! The primal system `M vec(V) = vec(B Bcc)` and the dual `M^T vec(W) = vec(C^T Ccc)`
//! share one operator. [`direct_solve`] factorizes `M` once and answers both;
//! [`bicg_dual_solve`] runs a single BiCG recurrence where the dual residual is
//! the shadow residual of the primal, so both Krylov spaces are bi-orthogonal.

mod bicg;
mod direct;
mod ilut;
mod operator;
mod report;

pub use bicg::{bicg_dual_solve, BicgOptions, BREAKDOWN_TOL, MAX_RESTARTS};
pub use direct::direct_solve;
pub use ilut::{build_ilut, IlutPreconditioner};
pub use operator::{build_operator, KroneckerOperator, Orientation};
pub use report::{Preconditioner, SolveMode, SolveReport};
