use super::{write_json, ModelSpec};
use crate::birka::{run_birka, BirkaConfig, SolverMode};
use crate::stability::{condition_number_with, stability_history, write_stability_csv, ConditionNumber};
use crate::system::{qhat_diagnostics, QHatDiagnostics};
use crate::Result;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Debug, Clone)]
pub struct ReduceOptions {
    pub model: ModelSpec,
    pub birka: BirkaConfig,
    /// Evaluate `Q` diagnostics and the condition number of the full model.
    pub diagnostics: bool,
    pub output: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceFinal {
    pub tolerance: Option<f64>,
    pub final_h2_error: Option<f64>,
    pub final_relative_change: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReduceSummary {
    pub label: String,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub config: BirkaConfig,
    pub converged: bool,
    pub iterations: usize,
    pub final_h2_error: Option<f64>,
    pub per_tolerance: Vec<ToleranceFinal>,
    pub qinv_norm: Option<f64>,
    pub qhat: Option<QHatDiagnostics>,
    pub condition_number: Option<f64>,
    pub condition_factors: Option<ConditionNumber>,
    /// Why a diagnostic is missing.
    pub diagnostic_errors: Vec<String>,
    pub bound_violations: usize,
    pub fhh_violations: usize,
    pub warnings: Vec<String>,
}

/// Runs BIRKA once and writes `reduced/`, `history.csv`, `eigenvalues.csv`,
/// `stability.csv` and `summary.json` under `output`.
pub fn run_reduce(opts: &ReduceOptions) -> Result<ReduceSummary> {
    let sys = opts.model.build()?;
    opts.birka.validate(sys.n())?;
    let cfg = opts.birka.clone().capture_bases(true).track_h2_error(true);
    let result = run_birka(&sys, &cfg)?;
    std::fs::create_dir_all(&opts.output)?;
    result.write_dir(&opts.output)?;
    let rows = stability_history(&sys, &result)?;
    write_stability_csv(&rows, &opts.output.join("stability.csv"))?;

    let mut diagnostic_errors = Vec::new();
    let (mut qhat, mut cond) = (None, None);
    if opts.diagnostics {
        match qhat_diagnostics(&sys) {
            Ok(q) => {
                qhat = Some(q);
                match condition_number_with(&sys, q) {
                    Ok(k) => cond = Some(k),
                    Err(e) => diagnostic_errors.push(format!("condition number: {e}")),
                }
            }
            Err(e) => diagnostic_errors.push(format!("Q diagnostics: {e}")),
        }
    }
    let last = result.history.last().expect("at least one iteration");
    let tolerance = match cfg.solver {
        SolverMode::Direct => None,
        SolverMode::Bicg { tol, .. } => Some(tol),
    };
    let summary = ReduceSummary {
        label: sys.label.clone(),
        n: sys.n(),
        m: sys.m(),
        p: sys.p(),
        config: cfg,
        converged: result.converged,
        iterations: result.iterations,
        final_h2_error: last.h2_error,
        per_tolerance: vec![ToleranceFinal {
            tolerance,
            final_h2_error: last.h2_error,
            final_relative_change: last.relative_change,
        }],
        qinv_norm: qhat.map(|q| q.qinv_norm),
        qhat,
        condition_number: cond.map(|k| k.value),
        condition_factors: cond,
        diagnostic_errors,
        bound_violations: rows.iter().filter(|r| !r.bound_chain_holds()).count(),
        fhh_violations: rows.iter().filter(|r| !r.fhh_within_twice()).count(),
        warnings: result.warnings.clone(),
    };
    write_json(&opts.output.join("summary.json"), &summary)?;
    Ok(summary)
}
