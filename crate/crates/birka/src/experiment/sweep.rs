use super::{write_json, ModelSpec};
use crate::birka::{run_birka, step_operator, BirkaConfig, BirkaResult, ReducedModel, SolverMode};
use crate::stability::{condition_number_with, stability_history, write_stability_csv, StabilityReport};
use crate::system::{h2_error_squared, qhat_diagnostics};
use crate::{BilinearSystem, Error, Result};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Largest `n r` for which the dense spectrum of the step operator is computed.
const FIG3_DENSE_LIMIT: usize = 3000;
const FIG3_COUNT: usize = 6;

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub r_values: Vec<usize>,
    pub btol: f64,
    pub max_outer: usize,
    pub tolerances: Vec<f64>,
    pub seeds: Vec<u64>,
    pub precond_drop_tol: Option<f64>,
    /// Outer iterations at which the step operator's smallest eigenvalues are recorded.
    pub fig3_iterations: Vec<usize>,
    /// Compute stability tables (first reduced order only).
    pub stability: bool,
    /// Evaluate `Q` diagnostics and the condition number of the full model.
    pub diagnostics: bool,
    pub output: PathBuf,
}

impl ExperimentConfig {
    pub fn new(model: ModelSpec, output: impl Into<PathBuf>) -> Self {
        Self {
            model,
            r_values: vec![6],
            btol: 1e-6,
            max_outer: 100,
            tolerances: vec![1e-2, 1e-8],
            seeds: (0..5).collect(),
            precond_drop_tol: None,
            fig3_iterations: vec![1],
            stability: true,
            diagnostics: true,
            output: output.into(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.r_values.is_empty() || self.tolerances.is_empty() || self.seeds.is_empty() {
            return Err(Error::Invalid("a sweep needs at least one reduced order, one tolerance and one seed".into()));
        }
        for &r in &self.r_values {
            for &tol in &self.tolerances {
                self.cell_config(r, 0, Some(tol)).validate(n)?;
            }
        }
        Ok(())
    }

    fn cell_config(&self, r: usize, seed: u64, tol: Option<f64>) -> BirkaConfig {
        let solver = match tol {
            None => SolverMode::Direct,
            Some(tol) => SolverMode::Bicg { tol, maxit: None, precond_drop_tol: self.precond_drop_tol },
        };
        BirkaConfig::new(r).btol(self.btol).max_outer(self.max_outer).solver(solver).seed(seed)
    }
}

/// Status of one `(r, seed, tolerance)` run; `tolerance = None` is the exact run.
#[derive(Debug, Clone, Serialize)]
pub struct CellOutcome {
    pub r: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub converged: Option<bool>,
    pub iterations: Option<usize>,
    /// `||exact reduced - inexact reduced||_H2^2` at the final iterates.
    pub final_h2_error_sq: Option<f64>,
    pub final_oblique_frobenius: Option<f64>,
    pub error: Option<String>,
}

/// Spread of the final `||(W^T V)^{-1} W^T||_F` across seeds for one reduced order.
#[derive(Debug, Clone, Serialize)]
pub struct OrderSpread {
    pub r: usize,
    pub min: f64,
    pub max: f64,
    /// `(max - min) / min`
    pub relative_spread: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSummary {
    pub label: String,
    pub n: usize,
    pub config: ExperimentConfig,
    pub cells: Vec<CellOutcome>,
    /// Per tolerance: median over seeds of the final squared H2 distance (first reduced order).
    pub median_final_h2_error_sq: Vec<(f64, Option<f64>)>,
    pub table4: Vec<OrderSpread>,
    pub qinv_norm: Option<f64>,
    pub condition_number: Option<f64>,
    pub diagnostic_errors: Vec<String>,
}

#[derive(Serialize)]
struct Table1Row {
    r: usize,
    seed: u64,
    tolerance: f64,
    iteration: usize,
    h2_error_sq: Option<f64>,
    bicg_iterations_primal: usize,
    bicg_iterations_dual: usize,
    relative_change: f64,
}

#[derive(Serialize)]
struct Fig1Row {
    r: usize,
    tolerance: f64,
    iteration: usize,
    median_h2_error_sq: f64,
    seeds: usize,
}

#[derive(Serialize)]
struct Table4Row {
    r: usize,
    seed: u64,
    tolerance: f64,
    converged: bool,
    iterations: usize,
    oblique_frobenius: f64,
}

#[derive(Serialize)]
struct Fig3Row {
    seed: u64,
    tolerance: f64,
    iteration: usize,
    rank: usize,
    re: f64,
    im: f64,
    modulus: f64,
}

struct Cell {
    r: usize,
    seed: u64,
    tol: f64,
    result: BirkaResult,
    /// Squared H2 distance to the exact run at matching iterations.
    errors: Vec<Option<f64>>,
    stability: Vec<StabilityReport>,
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    Some(if k % 2 == 1 { v[k / 2] } else { 0.5 * (v[k / 2 - 1] + v[k / 2]) })
}

fn distance(a: &ReducedModel, b: &ReducedModel) -> Option<f64> {
    let (x, y) = (a.to_system().ok()?, b.to_system().ok()?);
    h2_error_squared(&x, &y).ok()
}

fn cell_dir(root: &Path, r: usize, seed: u64, tol: Option<f64>) -> PathBuf {
    let t = tol.map_or_else(|| "exact".to_string(), |t| format!("tol{t:e}"));
    root.join("cells").join(format!("r{r}_seed{seed}_{t}"))
}

/// Runs every `(r, seed)` exactly and at each tolerance, then writes
/// `fig1.csv`, `fig3.csv`, `table1.csv` to `table4.csv` and `summary.json`.
///
/// A failing cell is recorded in the summary and the sweep moves on.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentSummary> {
    let sys = cfg.model.build()?;
    cfg.validate(sys.n())?;
    std::fs::create_dir_all(&cfg.output)?;
    let mut outcomes = Vec::new();
    let mut cells: Vec<Cell> = Vec::new();
    for (ri, &r) in cfg.r_values.iter().enumerate() {
        for &seed in &cfg.seeds {
            let exact = run_birka(&sys, &cfg.cell_config(r, seed, None)).and_then(|res| {
                res.write_history_csv(&ensure(cell_dir(&cfg.output, r, seed, None))?.join("history.csv"))?;
                Ok(res)
            });
            outcomes.push(outcome(r, seed, None, &exact, None));
            let exact = exact.ok();
            for &tol in &cfg.tolerances {
                let want_stability = cfg.stability && ri == 0;
                let run = run_cell(&sys, cfg, r, seed, tol, want_stability, exact.as_ref());
                match run {
                    Ok(cell) => {
                        let final_err = exact.as_ref().and_then(|e| distance(&e.final_guess, &cell.result.final_guess));
                        outcomes.push(outcome(r, seed, Some(tol), &Ok(cell.result.clone()), final_err));
                        cells.push(cell);
                    }
                    Err(e) => outcomes.push(outcome(r, seed, Some(tol), &Err(e), None)),
                }
            }
        }
    }

    write_table1(&cfg.output, &cells)?;
    write_fig1(&cfg.output, &cells)?;
    write_stability_tables(&cfg.output, cfg, &cells)?;
    let table4 = write_table4(&cfg.output, cfg, &cells)?;
    write_fig3(&cfg.output, cfg, &sys, &cells)?;

    let r0 = cfg.r_values[0];
    let median_final_h2_error_sq = cfg
        .tolerances
        .iter()
        .map(|&t| {
            let v = outcomes
                .iter()
                .filter(|o| o.r == r0 && o.tolerance == Some(t))
                .filter_map(|o| o.final_h2_error_sq)
                .collect();
            (t, median(v))
        })
        .collect();
    let mut diagnostic_errors = Vec::new();
    let (mut qinv_norm, mut condition_number) = (None, None);
    if cfg.diagnostics {
        match qhat_diagnostics(&sys) {
            Ok(q) => {
                qinv_norm = Some(q.qinv_norm);
                match condition_number_with(&sys, q) {
                    Ok(k) => condition_number = Some(k.value),
                    Err(e) => diagnostic_errors.push(format!("condition number: {e}")),
                }
            }
            Err(e) => diagnostic_errors.push(format!("Q diagnostics: {e}")),
        }
    }
    let summary = ExperimentSummary {
        label: sys.label.clone(),
        n: sys.n(),
        config: cfg.clone(),
        cells: outcomes,
        median_final_h2_error_sq,
        table4,
        qinv_norm,
        condition_number,
        diagnostic_errors,
    };
    write_json(&cfg.output.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Writer that emits `header` up front, so empty tables still carry column names.
fn csv_out(path: &Path, header: &[&str]) -> Result<csv::Writer<std::fs::File>> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    w.write_record(header)?;
    Ok(w)
}

fn ensure(dir: PathBuf) -> Result<PathBuf> {
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn outcome(r: usize, seed: u64, tolerance: Option<f64>, res: &Result<BirkaResult>, final_err: Option<f64>) -> CellOutcome {
    match res {
        Ok(res) => CellOutcome {
            r,
            seed,
            tolerance,
            converged: Some(res.converged),
            iterations: Some(res.iterations),
            final_h2_error_sq: final_err,
            final_oblique_frobenius: res.history.last().map(|h| h.oblique_factor_frobenius),
            error: None,
        },
        Err(e) => CellOutcome {
            r,
            seed,
            tolerance,
            converged: None,
            iterations: None,
            final_h2_error_sq: None,
            final_oblique_frobenius: None,
            error: Some(e.to_string()),
        },
    }
}

fn run_cell(
    sys: &BilinearSystem,
    cfg: &ExperimentConfig,
    r: usize,
    seed: u64,
    tol: f64,
    want_stability: bool,
    exact: Option<&BirkaResult>,
) -> Result<Cell> {
    let result = run_birka(sys, &cfg.cell_config(r, seed, Some(tol)).capture_bases(want_stability))?;
    let stability = if want_stability { stability_history(sys, &result)? } else { Vec::new() };
    let errors = result
        .history
        .iter()
        .map(|h| {
            let e = exact?;
            let k = (h.iteration - 1).min(e.history.len() - 1);
            distance(&e.history[k].reduced, &h.reduced)
        })
        .collect();
    let dir = ensure(cell_dir(&cfg.output, r, seed, Some(tol)))?;
    result.write_history_csv(&dir.join("history.csv"))?;
    if want_stability {
        write_stability_csv(&stability, &dir.join("stability.csv"))?;
    }
    // bases are large and no longer needed
    let mut result = result;
    result.history.iter_mut().for_each(|h| h.bases = None);
    Ok(Cell { r, seed, tol, result, errors, stability })
}

fn write_table1(out: &Path, cells: &[Cell]) -> Result<()> {
    let mut w = csv_out(&out.join("table1.csv"), &["r", "seed", "tolerance", "iteration", "h2_error_sq", "bicg_iterations_primal", "bicg_iterations_dual", "relative_change"])?;
    for c in cells {
        for (h, e) in c.result.history.iter().zip(&c.errors) {
            w.serialize(Table1Row {
                r: c.r,
                seed: c.seed,
                tolerance: c.tol,
                iteration: h.iteration,
                h2_error_sq: *e,
                bicg_iterations_primal: h.primal.iterations,
                bicg_iterations_dual: h.dual.iterations,
                relative_change: h.relative_change,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

fn write_fig1(out: &Path, cells: &[Cell]) -> Result<()> {
    let mut keys: Vec<(usize, u64)> = cells.iter().map(|c| (c.r, c.tol.to_bits())).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut w = csv_out(&out.join("fig1.csv"), &["r", "tolerance", "iteration", "median_h2_error_sq", "seeds"])?;
    for (r, tb) in keys {
        let group: Vec<&Cell> = cells.iter().filter(|c| c.r == r && c.tol.to_bits() == tb).collect();
        let longest = group.iter().map(|c| c.errors.len()).max().unwrap_or(0);
        for it in 0..longest {
            let vals: Vec<f64> = group.iter().filter_map(|c| c.errors.get(it).copied().flatten()).collect();
            let seeds = vals.len();
            if let Some(m) = median(vals) {
                w.serialize(Fig1Row { r, tolerance: f64::from_bits(tb), iteration: it + 1, median_h2_error_sq: m, seeds })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// `table2.csv` for the loosest tolerance, `table3.csv` for the tightest.
fn write_stability_tables(out: &Path, cfg: &ExperimentConfig, cells: &[Cell]) -> Result<()> {
    if !cfg.stability {
        return Ok(());
    }
    let loosest = cfg.tolerances.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tightest = cfg.tolerances.iter().copied().fold(f64::INFINITY, f64::min);
    // A single tolerance yields two identical tables; callers can rely on both files.
    for (name, tol) in [("table2.csv", loosest), ("table3.csv", tightest)] {
        let mut w = csv::Writer::from_path(out.join(name))?;
        let mut header = vec!["seed", "tolerance"];
        header.extend(StabilityReport::CSV_HEADER);
        w.write_record(&header)?;
        for c in cells.iter().filter(|c| c.tol == tol && !c.stability.is_empty()) {
            for row in &c.stability {
                let mut rec = vec![c.seed.to_string(), c.tol.to_string()];
                rec.extend(row.csv_record());
                w.write_record(&rec)?;
            }
        }
        w.flush()?;
    }
    Ok(())
}

/// Final `||(W^T V)^{-1} W^T||_F` per order and seed, at the first tolerance.
fn write_table4(out: &Path, cfg: &ExperimentConfig, cells: &[Cell]) -> Result<Vec<OrderSpread>> {
    let tol = cfg.tolerances[0];
    let mut w = csv_out(&out.join("table4.csv"), &["r", "seed", "tolerance", "converged", "iterations", "oblique_frobenius"])?;
    let mut spreads = Vec::new();
    for &r in &cfg.r_values {
        let mut vals = Vec::new();
        for c in cells.iter().filter(|c| c.r == r && c.tol == tol) {
            let last = c.result.history.last().expect("nonempty history");
            vals.push(last.oblique_factor_frobenius);
            w.serialize(Table4Row {
                r,
                seed: c.seed,
                tolerance: tol,
                converged: c.result.converged,
                iterations: c.result.iterations,
                oblique_frobenius: last.oblique_factor_frobenius,
            })?;
        }
        if !vals.is_empty() {
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            spreads.push(OrderSpread { r, min, max, relative_spread: (max - min) / min });
        }
    }
    w.flush()?;
    Ok(spreads)
}

/// Smallest-magnitude eigenvalues of the assembled step operator, first seed and tolerance.
fn write_fig3(out: &Path, cfg: &ExperimentConfig, sys: &BilinearSystem, cells: &[Cell]) -> Result<()> {
    let mut w = csv_out(&out.join("fig3.csv"), &["seed", "tolerance", "iteration", "rank", "re", "im", "modulus"])?;
    let cell = cells.iter().find(|c| c.r == cfg.r_values[0] && c.seed == cfg.seeds[0] && c.tol == cfg.tolerances[0]);
    if let Some(c) = cell.filter(|c| sys.n() * c.r <= FIG3_DENSE_LIMIT) {
        for &it in &cfg.fig3_iterations {
            if it == 0 || it > c.result.history.len() {
                continue;
            }
            let guess = if it == 1 { &c.result.initial_guess } else { &c.result.history[it - 2].reduced };
            let dense = step_operator(sys, guess)?.assemble().to_dense();
            let mut ev = dense
                .eigenvalues()
                .map_err(|e| Error::NoConvergence(format!("step operator spectrum: {e:?}")))?;
            ev.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
            for (rank, l) in ev.iter().take(FIG3_COUNT).enumerate() {
                w.serialize(Fig3Row { seed: c.seed, tolerance: c.tol, iteration: it, rank: rank + 1, re: l.re, im: l.im, modulus: l.norm() })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
