//! Acceptance checks for the reduction pipeline.
//!
//! Each criterion prints exactly one `PASS` or `FAIL` line with the measured
//! numbers; the process exits non-zero when any criterion fails. Criteria whose
//! published targets the implementation cannot reproduce are still evaluated
//! against those targets and reported as failures.

#[path = "../../birka/tests/common/mod.rs"]
mod common;

use birka::birka::{run_birka, run_birka_from, step_operator, step_rhs, BirkaConfig, BirkaResult, ReducedModel, SolverMode};
use birka::linalg::{c64, frobenius, spectral_norm, svd_values, vec, vecops::norm2, Mat};
use birka::models::{build_flow_model, build_heat_model, FlowModelParams, HeatModelParams};
use birka::solvers::SolveReport;
use birka::stability::{condition_number_with, construct_perturbation, fhh_norm, stability_history, verify_backward_stability, StabilityReport};
use birka::system::{
    assemble_qhat, h2_error_squared, h2_norm_squared_kron, h2_norm_squared_lyap, qhat_diagnostics, solve_generalized_lyapunov,
    GramianOperator, LyapunovPath, QHatDiagnostics,
};
use birka::BilinearSystem;
use common::{median, pg_exact_instance, random_stable_system, rng};
use rand::Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Outcome = Result<String, String>;

fn rel(x: f64, target: f64) -> f64 {
    (x - target).abs() / target.abs()
}

/// Shared heavy fixtures, built once.
struct Fixtures {
    heat: BilinearSystem,
    flow: BilinearSystem,
    heat_q: Result<QHatDiagnostics, String>,
    flow_q: Result<QHatDiagnostics, String>,
    /// Heat K=10, r=6, BiCG 1e-4, seeds 0..5, with stability rows.
    heat_runs: Vec<(BirkaResult, Vec<StabilityReport>)>,
    /// Flow N=10, r=6: exact, BiCG 1e-2 and BiCG 1e-8 per seed.
    flow_runs: Vec<FlowSeed>,
}

struct FlowSeed {
    exact: BirkaResult,
    loose: BirkaResult,
    tight: BirkaResult,
}

const SEEDS: [u64; 5] = [0, 1, 2, 3, 4];

fn fixtures() -> Fixtures {
    let heat = build_heat_model(&HeatModelParams::new(10)).expect("heat model");
    let flow = build_flow_model(&FlowModelParams::new(10)).expect("flow model");
    let heat_q = qhat_diagnostics(&heat).map_err(|e| e.to_string());
    let flow_q = qhat_diagnostics(&flow).map_err(|e| e.to_string());
    let heat_runs = SEEDS
        .iter()
        .map(|&seed| {
            let cfg = BirkaConfig::new(6).seed(seed).solver(SolverMode::bicg(1e-4)).capture_bases(true);
            let res = run_birka(&heat, &cfg).expect("heat run");
            let rows = stability_history(&heat, &res).expect("heat stability rows");
            (res, rows)
        })
        .collect();
    let flow_runs = SEEDS
        .iter()
        .map(|&seed| {
            let cfg = BirkaConfig::new(6).btol(1e-6).seed(seed);
            let run = |solver| run_birka(&flow, &cfg.clone().solver(solver).capture_bases(true)).expect("flow run");
            FlowSeed { exact: run(SolverMode::Direct), loose: run(SolverMode::bicg(1e-2)), tight: run(SolverMode::bicg(1e-8)) }
        })
        .collect();
    Fixtures { heat, flow, heat_q, flow_q, heat_runs, flow_runs }
}

fn c01_h2_routes_agree(_: &Fixtures) -> Outcome {
    let start = Instant::now();
    let mut g = rng(2024);
    let mut worst = 0.0f64;
    for case in 0..50 {
        let (n, m, p) = (g.random_range(1..=20), g.random_range(1..=3), g.random_range(1..=3));
        let sys = random_stable_system(g.random(), n, m, p);
        let kron = h2_norm_squared_kron(&sys).map_err(|e| format!("case {case}: {e}"))?;
        let lyap = h2_norm_squared_lyap(&sys).map_err(|e| format!("case {case}: {e}"))?;
        let path = solve_generalized_lyapunov(&sys).map_err(|e| e.to_string())?.path;
        if !matches!(path, LyapunovPath::Stationary { .. }) {
            return Err(format!("case {case} (n={n}): Lyapunov route fell back to {path:?}, routes are not independent"));
        }
        worst = worst.max(rel(lyap, kron));
    }
    let secs = start.elapsed().as_secs_f64();
    let msg = format!("max relative difference {worst:.2e} over 50 systems in {secs:.2}s");
    if worst <= 1e-8 && secs < 60.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c02_qinv_norms(fx: &Fixtures) -> Outcome {
    let (h, f) = (fx.heat_q.clone()?, fx.flow_q.clone()?);
    let (eh, ef) = (rel(h.qinv_norm, 5.2893e-4), rel(f.qinv_norm, 1.6051e-3));
    let msg = format!(
        "||Q^-1|| heat {:.4e} (target 5.2893e-4, off {:.1}%), flow {:.4e} (target 1.6051e-3, off {:.1}%); 1/||Q|| is {:.4e} / {:.4e}",
        h.qinv_norm,
        100.0 * eh,
        f.qinv_norm,
        100.0 * ef,
        h.qhat_norm_reciprocal,
        f.qhat_norm_reciprocal
    );
    if eh <= 5e-3 && ef <= 5e-3 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c03_condition_numbers(fx: &Fixtures) -> Outcome {
    let k = |sys: &BilinearSystem, q: &Result<QHatDiagnostics, String>| -> Result<f64, String> {
        condition_number_with(sys, q.clone()?).map(|k| k.value).map_err(|e| e.to_string())
    };
    let (kh, kf) = (k(&fx.heat, &fx.heat_q), k(&fx.flow, &fx.flow_q));
    let show = |r: &Result<f64, String>| r.as_ref().map_or_else(|e| format!("unavailable ({e})"), |v| format!("{v:.4e}"));
    let msg = format!("k heat {} (target 2.6653e-2), flow {} (target 1.2125e-2)", show(&kh), show(&kf));
    match (kh, kf) {
        (Ok(a), Ok(b)) if rel(a, 2.6653e-2) <= 0.02 && rel(b, 1.2125e-2) <= 0.02 => Ok(msg),
        _ => Err(msg),
    }
}

fn c04_qhat_decouples(_: &Fixtures) -> Outcome {
    let mut g = rng(77);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let sys = random_stable_system(g.random(), g.random_range(1..=6), g.random_range(1..=3), 1);
        let q = svd_values(&assemble_qhat(&sys).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let base = svd_values(&GramianOperator::new(&sys).assemble().to_dense()).map_err(|e| e.to_string())?;
        let mut want: Vec<f64> = base.iter().flat_map(|&s| [s; 4]).collect();
        want.sort_by(|a, b| b.total_cmp(a));
        if q.len() != want.len() {
            return Err(format!("{} singular values, expected {}", q.len(), want.len()));
        }
        let gap = q.iter().zip(&want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / want[0];
        worst = worst.max(gap);
    }
    let msg = format!("max relative singular value gap {worst:.2e} over 10 systems");
    if worst <= 1e-10 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c05_bound_chain(fx: &Fixtures) -> Outcome {
    let rows: Vec<&StabilityReport> = fx.heat_runs.iter().flat_map(|(_, r)| r).collect();
    let bad = rows.iter().filter(|r| !r.bound_chain_holds()).count();
    let tightness = rows.iter().map(|r| r.f_norm_f / r.f_bound).fold(0.0, f64::max);
    let msg = format!("{bad} violations in {} iterations over 5 runs (largest ||F||_F / bound {tightness:.3})", rows.len());
    if bad == 0 && !rows.is_empty() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c06_manufactured_pg(_: &Fixtures) -> Outcome {
    let mut g = rng(6);
    let mut worst = [0.0f64; 3];
    for _ in 0..20 {
        let n = g.random_range(8..=50);
        let r = g.random_range(1..=6);
        let seed = g.random();
        let inst = pg_exact_instance(seed, n, r, 1e-4);
        let f = construct_perturbation(&inst.v, &inst.w, &inst.r_b, &inst.r_c).map_err(|e| e.to_string())?;
        let scale = f.norm_2;
        let fv = frobenius(&(f.mul(&inst.v) - &inst.r_b)) / scale;
        let wf = frobenius(&(f.tmul(&inst.w) - inst.r_c.transpose())) / scale;
        worst[0] = worst[0].max(fv.max(wf));
        worst[1] = worst[1].max(spectral_norm(&(inst.w.transpose() * f.mul(&inst.v))) / scale);
        let sys = random_stable_system(seed ^ 0x5eed, n, 2, 1);
        let d = verify_backward_stability(&sys, &inst.v, &inst.w, &f).map_err(|e| e.to_string())?;
        worst[2] = worst[2].max(d.max());
    }
    let msg = format!(
        "identity defect {:.2e}, ||W^T F V|| / ||F|| {:.2e}, reduced-matrix gap {:.2e} over 20 instances",
        worst[0], worst[1], worst[2]
    );
    if worst.iter().all(|&w| w <= 1e-10) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn final_distance(exact: &BirkaResult, inexact: &BirkaResult) -> Result<f64, String> {
    h2_error_squared(&exact.reduced, &inexact.reduced).map_err(|e| e.to_string())
}

fn c07_tolerance_drives_error(fx: &Fixtures) -> Outcome {
    let mut loose = Vec::new();
    let mut tight = Vec::new();
    for s in &fx.flow_runs {
        loose.push(final_distance(&s.exact, &s.loose)?);
        tight.push(final_distance(&s.exact, &s.tight)?);
    }
    let (ml, mt) = (median(loose), median(tight));
    let orders = (ml / mt.max(f64::MIN_POSITIVE)).log10();
    let msg = format!("median squared distance {ml:.3e} at 1e-2, {mt:.3e} at 1e-8 ({orders:.1} orders)");
    if orders >= 3.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c08_oblique_factor(fx: &Fixtures) -> Outcome {
    let mut r4 = Vec::new();
    for &seed in &SEEDS {
        let cfg = BirkaConfig::new(4).seed(seed).solver(SolverMode::bicg(1e-4));
        let res = run_birka(&fx.heat, &cfg).map_err(|e| e.to_string())?;
        r4.push(res.history.last().expect("history").oblique_factor_frobenius);
    }
    let r6: Vec<f64> = fx.heat_runs.iter().map(|(r, _)| r.history.last().expect("history").oblique_factor_frobenius).collect();
    let span = |v: &[f64]| (v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let ((a4, b4), (a6, b6)) = (span(&r4), span(&r6));
    let msg = format!("r=4 in [{a4:.4}, {b4:.4}] (want [1.95, 2.06]); r=6 in [{a6:.4}, {b6:.4}] (want [2.40, 2.51])");
    if a4 >= 1.95 && b4 <= 2.06 && a6 >= 2.40 && b6 <= 2.51 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn rerun_steps(sys: &BilinearSystem, guess: &ReducedModel) -> Result<usize, String> {
    let cfg = BirkaConfig::new(guess.order());
    run_birka_from(sys, &cfg, guess.clone()).map(|r| r.iterations).map_err(|e| e.to_string())
}

fn c09_fixed_point(fx: &Fixtures) -> Outcome {
    let heat = run_birka(&fx.heat, &BirkaConfig::new(6)).map_err(|e| e.to_string())?;
    let flow = &fx.flow_runs[0].exact;
    if !heat.converged || !flow.converged {
        return Err(format!("exact runs did not converge (heat {}, flow {})", heat.converged, flow.converged));
    }
    let (h, f) = (rerun_steps(&fx.heat, &heat.final_guess)?, rerun_steps(&fx.flow, &flow.final_guess)?);
    let msg = format!("rerun from the converged guess took {h} (heat) and {f} (flow) iterations");
    if h == 1 && f == 1 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c10_fhh(fx: &Fixtures) -> Outcome {
    let mut rows: Vec<StabilityReport> = fx.heat_runs.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    for s in &fx.flow_runs {
        for res in [&s.loose, &s.tight] {
            rows.extend(stability_history(&fx.flow, res).map_err(|e| e.to_string())?);
        }
    }
    let bad = rows.iter().filter(|r| !r.fhh_within_twice()).count();
    let one = |x: f64| Mat::from_fn(1, 1, |_, _| x);
    let f = construct_perturbation(&one(1.0), &one(1.0), &one(0.37), &one(-1.21)).map_err(|e| e.to_string())?;
    let scalar_gap = (fhh_norm(&f).map_err(|e| e.to_string())? - 2.0 * f.norm_2).abs() / f.norm_2;
    let msg = format!("{bad} violations in {} iterations; scalar case off by {scalar_gap:.1e}", rows.len());
    if bad == 0 && scalar_gap <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// `||stored - (rhs - M x)|| / ||rhs||`
fn residual_gap(report: &SolveReport, rhs: &[c64], mx: Vec<c64>) -> f64 {
    let stored = vec(&report.residual);
    let d: Vec<c64> = rhs.iter().zip(&mx).zip(&stored).map(|((b, y), s)| b - y - s).collect();
    norm2(&d) / norm2(rhs)
}

fn c11_bicg_health(fx: &Fixtures) -> Outcome {
    let (mut solves, mut good, mut worst_gap) = (0usize, 0usize, 0.0f64);
    for s in &fx.flow_runs {
        for res in [&s.loose, &s.tight] {
            let mut guess = res.initial_guess.clone();
            for h in &res.history {
                let b = h.bases.as_ref().ok_or("bases were not captured")?;
                let op = step_operator(&fx.flow, &guess).map_err(|e| e.to_string())?;
                let (bp, bd) = step_rhs(&fx.flow, &guess).map_err(|e| e.to_string())?;
                worst_gap = worst_gap
                    .max(residual_gap(&b.primal, &bp, op.apply(&vec(&b.primal.solution))))
                    .max(residual_gap(&b.dual, &bd, op.apply_transpose(&vec(&b.dual.solution))));
                for rep in [&b.primal, &b.dual] {
                    solves += 1;
                    good += usize::from(rep.converged && !rep.hit_maxit);
                }
                guess = h.reduced.clone();
            }
        }
    }
    let share = good as f64 / solves.max(1) as f64;
    let msg = format!("{good}/{solves} solves reached tol ({:.1}%), residual recomputation gap {worst_gap:.1e}", 100.0 * share);
    if share >= 0.95 && worst_gap <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: [(&str, fn(&Fixtures) -> Outcome); 11] = [
        ("c01 dual-route H2 norm", c01_h2_routes_agree),
        ("c02 ||Q^-1|| for heat and flow", c02_qinv_norms),
        ("c03 H2 condition numbers", c03_condition_numbers),
        ("c04 Q decouples into four copies", c04_qhat_decouples),
        ("c05 ||F||_2 <= ||F||_F <= bound", c05_bound_chain),
        ("c06 manufactured Petrov-Galerkin instances", c06_manufactured_pg),
        ("c07 tighter BiCG tolerance, smaller error", c07_tolerance_drives_error),
        ("c08 oblique projector norms", c08_oblique_factor),
        ("c09 exact fixed point is stationary", c09_fixed_point),
        ("c10 ||F_hat_hat|| <= 2 ||F||", c10_fhh),
        ("c11 BiCG convergence and residuals", c11_bicg_health),
    ];
    let start = Instant::now();
    let fx = fixtures();
    println!("fixtures built in {:.1}s", start.elapsed().as_secs_f64());
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| check(&fx))).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(m) => println!("PASS {name}: {m} [{secs:.1}s]"),
            Err(m) => {
                failed += 1;
                println!("FAIL {name}: {m} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
