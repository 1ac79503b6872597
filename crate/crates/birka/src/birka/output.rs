use super::BirkaResult;
use crate::system::io::write_system;
use crate::Result;
use serde::Serialize;
use std::path::Path;

#[derive(Serialize)]
struct HistoryRow {
    iteration: usize,
    relative_change: f64,
    primal_iterations: usize,
    dual_iterations: usize,
    primal_relative_residual: f64,
    dual_relative_residual: f64,
    primal_converged: bool,
    dual_converged: bool,
    h2_error: Option<f64>,
    unstable_shifts: usize,
    projector_cond: f64,
    oblique_factor_frobenius: f64,
}

#[derive(Serialize)]
struct EigenRow {
    iteration: usize,
    index: usize,
    re: f64,
    im: f64,
}

impl BirkaResult {
    /// `reduced/` (system directory), `history.csv`, `eigenvalues.csv`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        write_system(&dir.join("reduced"), &self.reduced)?;
        self.write_history_csv(&dir.join("history.csv"))?;
        self.write_eigenvalues_csv(&dir.join("eigenvalues.csv"))
    }

    pub fn write_history_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for h in &self.history {
            w.serialize(HistoryRow {
                iteration: h.iteration,
                relative_change: h.relative_change,
                primal_iterations: h.primal.iterations,
                dual_iterations: h.dual.iterations,
                primal_relative_residual: h.primal.relative_residual,
                dual_relative_residual: h.dual.relative_residual,
                primal_converged: h.primal.converged,
                dual_converged: h.dual.converged,
                h2_error: h.h2_error,
                unstable_shifts: h.unstable_shifts,
                projector_cond: h.projector_cond,
                oblique_factor_frobenius: h.oblique_factor_frobenius,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_eigenvalues_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for h in &self.history {
            for (index, l) in h.eigenvalues.iter().enumerate() {
                w.serialize(EigenRow { iteration: h.iteration, index, re: l.re, im: l.im })?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
