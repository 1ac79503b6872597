//! Backward stability of inexact BIRKA.
//!
//! Residuals `R_B`, `R_C` of the inexact primal and dual solves define a rank
//! `2r` perturbation `F` of `A`. When the residuals satisfy the Petrov-Galerkin
//! conditions, the inexact step equals an exact step on `(A + F, N_k, B, C)`;
//! this module builds `F`, bounds it by the residuals, measures how far the
//! equivalence holds in practice and evaluates the condition number of the H2
//! norm that turns `||F||` into an output error bound.
//!
//! Perturbations of `N_k`, `B` and `C` can be derived the same way but need the
//! transformed reduced matrices to be invertible, which cannot be guaranteed, so
//! only `F` is built here.

mod condition;
mod fhh;
mod perturbation;
mod report;
mod verify;
#[cfg(test)]
mod tests;

pub use condition::{condition_number, condition_number_with, ConditionNumber};
pub use fhh::{assemble_fhh, fhh_norm};
pub use perturbation::{construct_perturbation, perturbation_bound, PerturbationBound, PerturbationF};
pub use report::{stability_history, stability_report, write_stability_csv, StabilityReport};
pub use verify::{verify_backward_stability, ProjectionDefects, DENSE_LIMIT};
