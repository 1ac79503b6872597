use birka::birka::{run_birka, BirkaConfig, SolverMode};
use birka::experiment::{run_experiment, run_reduce, ExperimentConfig, ModelSpec, ReduceOptions};
use birka::models::{FlowModelParams, HeatModelParams};
use birka::stability::{condition_number_with, stability_history, write_stability_csv};
use birka::system::{h2_norm_kron, h2_norm_lyap, io::write_system, qhat_diagnostics};
use birka::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "birka", version, about = "H2-optimal reduction of bilinear systems with backward-stability diagnostics")]
struct Cli {
    /// Output directory; defaults to $BIRKA_OUTPUT_ROOT/<subcommand>.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, env = "BIRKA_OUTPUT_ROOT", default_value = "birka-out", global = true, hide_env_values = true)]
    output_root: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run BIRKA once; writes reduced/, history.csv, stability.csv, summary.json.
    Reduce {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Skip Q diagnostics and the condition number.
        #[arg(long)]
        no_diagnostics: bool,
    },
    /// Sweep seeds and BiCG tolerances; writes fig1.csv, fig3.csv, table1-4.csv, summary.json.
    Experiment {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_delimiter = ',', default_value = "6")]
        r: Vec<usize>,
        #[arg(long, default_value_t = 1e-6)]
        btol: f64,
        #[arg(long, default_value_t = 100)]
        max_outer: usize,
        #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-8")]
        tols: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,3,4")]
        seeds: Vec<u64>,
        #[arg(long)]
        drop_tol: Option<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        fig3_iterations: Vec<usize>,
        #[arg(long)]
        no_stability: bool,
        #[arg(long)]
        no_diagnostics: bool,
    },
    /// H2 norm by the Kronecker and Lyapunov routes.
    H2norm {
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Q diagnostics, condition number and per-iteration backward-stability table.
    Stability {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a model in the system directory format.
    ModelExport {
        #[command(flatten)]
        model: ModelArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Heat,
    Flow,
    File,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    /// Heat model grid points per side.
    #[arg(long = "K", default_value_t = 10)]
    k: usize,
    /// Flow model interior grid points.
    #[arg(long = "N", default_value_t = 10)]
    n: usize,
    #[arg(long = "L", default_value_t = 1.0)]
    l: f64,
    #[arg(long, default_value_t = 0.1)]
    nu: f64,
    /// System directory for --model file.
    #[arg(long)]
    system: Option<PathBuf>,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec, Error> {
        Ok(match self.model {
            ModelKind::Heat => ModelSpec::Heat(HeatModelParams::new(self.k)),
            ModelKind::Flow => ModelSpec::Flow(FlowModelParams { n: self.n, l: self.l, nu: self.nu }),
            ModelKind::File => ModelSpec::File {
                path: self.system.clone().ok_or_else(|| Error::Invalid("--model file needs --system <dir>".into()))?,
            },
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverKind {
    Direct,
    Bicg,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 6)]
    r: usize,
    #[arg(long, default_value_t = 1e-6)]
    btol: f64,
    #[arg(long, default_value_t = 100)]
    max_outer: usize,
    #[arg(long, value_enum, default_value = "direct")]
    solver: SolverKind,
    /// BiCG relative residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    maxit: Option<usize>,
    /// ILUT drop tolerance; no preconditioner when absent.
    #[arg(long)]
    drop_tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl RunArgs {
    fn config(&self) -> BirkaConfig {
        let solver = match self.solver {
            SolverKind::Direct => SolverMode::Direct,
            SolverKind::Bicg => SolverMode::Bicg { tol: self.tol, maxit: self.maxit, precond_drop_tol: self.drop_tol },
        };
        BirkaConfig::new(self.r).btol(self.btol).max_outer(self.max_outer).solver(solver).seed(self.seed)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let validation = e.is_validation() || matches!(e, Error::Io(_) | Error::Csv(_) | Error::Json(_));
            let kind = if validation { "validation" } else { "numerical" };
            eprintln!("{}", json!({ "error": kind, "message": e.to_string() }));
            ExitCode::from(if validation { 1 } else { 2 })
        }
    }
}

fn out_dir(cli_output: &Option<PathBuf>, root: &Path, sub: &str) -> PathBuf {
    cli_output.clone().unwrap_or_else(|| root.join(sub))
}

fn print_json(value: &impl serde::Serialize) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn run(cli: Cli) -> Result<(), Error> {
    let output = cli.output;
    let root = cli.output_root;
    match cli.command {
        Command::Reduce { model, run, no_diagnostics } => {
            let opts = ReduceOptions {
                model: model.spec()?,
                birka: run.config(),
                diagnostics: !no_diagnostics,
                output: out_dir(&output, &root, "reduce"),
            };
            let s = run_reduce(&opts)?;
            print_json(&json!({
                "output": opts.output,
                "converged": s.converged,
                "iterations": s.iterations,
                "final_h2_error": s.final_h2_error,
                "qinv_norm": s.qinv_norm,
                "condition_number": s.condition_number,
            }))
        }
        Command::Experiment { model, r, btol, max_outer, tols, seeds, drop_tol, fig3_iterations, no_stability, no_diagnostics } => {
            let cfg = ExperimentConfig {
                model: model.spec()?,
                r_values: r,
                btol,
                max_outer,
                tolerances: tols,
                seeds,
                precond_drop_tol: drop_tol,
                fig3_iterations,
                stability: !no_stability,
                diagnostics: !no_diagnostics,
                output: out_dir(&output, &root, "experiment"),
            };
            let s = run_experiment(&cfg)?;
            print_json(&json!({
                "output": cfg.output,
                "failed_cells": s.cells.iter().filter(|c| c.error.is_some()).count(),
                "median_final_h2_error_sq": s.median_final_h2_error_sq,
                "table4": s.table4,
            }))
        }
        Command::H2norm { model } => {
            let sys = model.spec()?.build()?;
            let kron = h2_norm_kron(&sys)?;
            let lyap = h2_norm_lyap(&sys)?;
            let dir = out_dir(&output, &root, "h2norm");
            std::fs::create_dir_all(&dir)?;
            let summary = json!({
                "label": sys.label,
                "n": sys.n(),
                "h2_norm_kron": kron,
                "h2_norm_lyap": lyap,
                "relative_difference": (kron - lyap).abs() / kron.max(f64::MIN_POSITIVE),
            });
            std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
            print_json(&summary)
        }
        Command::Stability { model, run } => {
            let sys = model.spec()?.build()?;
            let cfg = run.config().capture_bases(true);
            cfg.validate(sys.n())?;
            let dir = out_dir(&output, &root, "stability");
            std::fs::create_dir_all(&dir)?;
            let result = run_birka(&sys, &cfg)?;
            let rows = stability_history(&sys, &result)?;
            write_stability_csv(&rows, &dir.join("stability.csv"))?;
            let q = qhat_diagnostics(&sys)?;
            let (k, k_err) = match condition_number_with(&sys, q) {
                Ok(k) => (Some(k), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let summary = json!({
                "label": sys.label,
                "iterations": result.iterations,
                "converged": result.converged,
                "qhat": q,
                "condition_number": k.map(|k| k.value),
                "condition_factors": k,
                "condition_number_error": k_err,
                "bound_violations": rows.iter().filter(|r| !r.bound_chain_holds()).count(),
                "fhh_violations": rows.iter().filter(|r| !r.fhh_within_twice()).count(),
            });
            std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)? + "\n")?;
            print_json(&summary)
        }
        Command::ModelExport { model } => {
            let sys = model.spec()?.build()?;
            let dir = out_dir(&output, &root, "model");
            write_system(&dir, &sys)?;
            print_json(&json!({ "output": dir, "label": sys.label, "n": sys.n(), "m": sys.m(), "p": sys.p() }))
        }
    }
}
