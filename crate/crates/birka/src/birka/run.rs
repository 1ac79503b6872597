use super::{birka_step, initialize_guess, BirkaConfig, CapturedBases, ReducedModel};
use crate::linalg::{c64, eig_dense};
use crate::solvers::SolveReport;
use crate::system::h2_error;
use crate::{BilinearSystem, Result};
use serde::Serialize;

/// Scalar outcome of one side of a solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveSummary {
    pub iterations: usize,
    pub relative_residual: f64,
    pub converged: bool,
    pub hit_maxit: bool,
    pub stagnated: bool,
    pub pg_defect: f64,
}

impl From<&SolveReport> for SolveSummary {
    fn from(r: &SolveReport) -> Self {
        Self {
            iterations: r.iterations,
            relative_residual: r.relative_residual,
            converged: r.converged,
            hit_maxit: r.hit_maxit,
            stagnated: r.stagnated,
            pg_defect: r.pg_defect,
        }
    }
}

#[derive(Debug, Clone)]
pub struct IterationRecord {
    /// 1-based.
    pub iteration: usize,
    /// Sorted eigenvalues of the new reduced drift.
    pub eigenvalues: Vec<c64>,
    pub relative_change: f64,
    pub primal: SolveSummary,
    pub dual: SolveSummary,
    pub h2_error: Option<f64>,
    pub unstable_shifts: usize,
    pub projector_cond: f64,
    pub oblique_factor_frobenius: f64,
    /// The reduced model after this step.
    pub reduced: ReducedModel,
    /// Present when the run captures bases.
    pub bases: Option<CapturedBases>,
}

#[derive(Debug, Clone)]
pub struct BirkaResult {
    pub reduced: BilinearSystem,
    pub final_guess: ReducedModel,
    pub initial_guess: ReducedModel,
    pub converged: bool,
    pub iterations: usize,
    pub history: Vec<IterationRecord>,
    pub warnings: Vec<String>,
}

/// Eigenvalues ordered by real part, then imaginary part.
pub fn sort_eigenvalues(values: &[c64]) -> Vec<c64> {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

/// `||new - old|| / ||old||` on sorted eigenvalue lists.
pub fn relative_eigenvalue_change(old_sorted: &[c64], new_sorted: &[c64]) -> f64 {
    let diff: f64 = old_sorted.iter().zip(new_sorted).map(|(a, b)| (a - b).norm_sqr()).sum();
    let base: f64 = old_sorted.iter().map(|a| a.norm_sqr()).sum();
    (diff / base).sqrt()
}

/// BIRKA from a seeded random guess.
pub fn run_birka(sys: &BilinearSystem, config: &BirkaConfig) -> Result<BirkaResult> {
    config.validate(sys.n())?;
    let guess = initialize_guess(config.seed, config.r, sys.m(), sys.p())?;
    run_birka_from(sys, config, guess)
}

/// BIRKA from a given guess; `config.r` and `config.seed` are ignored.
pub fn run_birka_from(sys: &BilinearSystem, config: &BirkaConfig, guess: ReducedModel) -> Result<BirkaResult> {
    BirkaConfig { r: guess.order(), ..config.clone() }.validate(sys.n())?;
    let mut warnings = Vec::new();
    if !sys.is_stable()? {
        warnings.push("the full model's drift is not Hurwitz; H2 quantities are undefined".to_string());
    }
    let initial_guess = guess.clone();
    let mut guess = guess;
    let mut old = sort_eigenvalues(&eig_dense(&guess.a)?.values);
    let mut history = Vec::new();
    let mut converged = false;
    for it in 1..=config.max_outer {
        let step = birka_step(sys, &guess, &config.solver)?;
        let new = sort_eigenvalues(&eig_dense(&step.guess.a)?.values);
        let change = relative_eigenvalue_change(&old, &new);
        if step.unstable_shifts > 0 {
            warnings.push(format!("iteration {it}: {} shifts in the closed right half-plane", step.unstable_shifts));
        }
        let h2 = if config.track_h2_error {
            match step.guess.to_system().and_then(|red| h2_error(sys, &red)) {
                Ok(e) => Some(e),
                Err(e) => {
                    warnings.push(format!("iteration {it}: H2 error unavailable ({e})"));
                    None
                }
            }
        } else {
            None
        };
        history.push(IterationRecord {
            iteration: it,
            eigenvalues: new.clone(),
            relative_change: change,
            primal: SolveSummary::from(&step.bases.primal),
            dual: SolveSummary::from(&step.bases.dual),
            h2_error: h2,
            unstable_shifts: step.unstable_shifts,
            projector_cond: step.projector_cond,
            oblique_factor_frobenius: step.oblique_factor_frobenius,
            reduced: step.guess.clone(),
            bases: config.capture_bases.then_some(step.bases),
        });
        guess = step.guess;
        old = new;
        if change < config.btol {
            converged = true;
            break;
        }
    }
    Ok(BirkaResult {
        reduced: guess.to_system()?.with_label(format!("{} reduced r={}", sys.label, guess.order()).trim().to_string()),
        iterations: history.len(),
        final_guess: guess,
        initial_guess,
        converged,
        history,
        warnings,
    })
}
