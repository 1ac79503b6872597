use super::report::trace_defect;
use super::{IlutPreconditioner, KroneckerOperator, Preconditioner, SolveMode, SolveReport};
use crate::linalg::{c64, vecops, Scalar};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative size of a bi-orthogonality scalar below which BiCG is declared broken down.
pub const BREAKDOWN_TOL: f64 = 1e-14;
pub const MAX_RESTARTS: usize = 3;
const STAGNATION_WINDOW: usize = 50;
const STAGNATION_GAIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy)]
pub struct BicgOptions<'p> {
    /// Relative residual target for both sides.
    pub tol: f64,
    /// Defaults to `4 n r`.
    pub maxit: Option<usize>,
    pub precond: Option<&'p IlutPreconditioner>,
}

impl<'p> BicgOptions<'p> {
    pub fn new(tol: f64) -> Self {
        Self { tol, maxit: None, precond: None }
    }
}

struct Side {
    x: Vec<c64>,
    r: Vec<c64>,
    rhs_norm: f64,
    done: bool,
    iterations: usize,
    history: Vec<f64>,
    best: Vec<f64>,
    stagnated: bool,
}

impl Side {
    fn new(rhs: &[c64]) -> Self {
        let nb = vecops::norm2(rhs);
        Self {
            x: vec![c64::zero(); rhs.len()],
            r: rhs.to_vec(),
            rhs_norm: nb,
            done: false,
            iterations: 0,
            history: vec![1.0],
            best: vec![1.0],
            stagnated: false,
        }
    }

    fn record(&mut self, rel: f64) {
        self.history.push(rel);
        let best = self.best.last().copied().unwrap_or(rel).min(rel);
        self.best.push(best);
        let k = self.best.len();
        if k > STAGNATION_WINDOW && best > (1.0 - STAGNATION_GAIN) * self.best[k - 1 - STAGNATION_WINDOW] {
            self.stagnated = true;
        }
    }
}

/// Coupled BiCG for `M x = rhs_primal` and `M^T y = rhs_dual`.
///
/// The dual residual serves as the shadow residual, and both sides use the same
/// step lengths, so the two Krylov sequences are bi-orthogonal under the plain
/// bilinear form. A side whose (recomputed) residual reaches `tol` is frozen while
/// the other continues. Hitting `maxit` is reported, not an error; a fourth
/// breakdown is.
pub fn bicg_dual_solve(
    op: &KroneckerOperator<'_>,
    rhs_primal: &[c64],
    rhs_dual: &[c64],
    opts: BicgOptions<'_>,
) -> Result<(SolveReport, SolveReport)> {
    let (n, r) = (op.n(), op.r());
    let d = n * r;
    if rhs_primal.len() != d || rhs_dual.len() != d {
        return Err(Error::Dimension(format!("right-hand sides must have length {d}")));
    }
    if !(opts.tol > 0.0 && opts.tol < 1.0) {
        return Err(Error::Invalid(format!("BiCG tolerance must lie in (0, 1), got {}", opts.tol)));
    }
    let maxit = opts.maxit.unwrap_or(4 * d);
    let mut pri = Side::new(rhs_primal);
    let mut dua = Side::new(rhs_dual);
    if pri.rhs_norm == 0.0 || dua.rhs_norm == 0.0 {
        return Err(Error::Invalid("BiCG needs nonzero right-hand sides".into()));
    }
    let prec = |v: &[c64]| opts.precond.map_or_else(|| v.to_vec(), |m| m.apply(v));
    let prec_t = |v: &[c64]| opts.precond.map_or_else(|| v.to_vec(), |m| m.apply_transpose(v));

    let mut rng = ChaCha8Rng::seed_from_u64(0xb1c6);
    let mut iter = 0usize;
    let mut restarts = 0usize;
    'outer: while !(pri.done && dua.done) && iter < maxit {
        let mut p: Vec<c64> = Vec::new();
        let mut pt: Vec<c64> = Vec::new();
        let mut rho_prev = c64::zero();
        let mut first = true;
        while !(pri.done && dua.done) && iter < maxit {
            let z = prec(&pri.r);
            let zt = prec_t(&dua.r);
            let rho = vecops::dot(&dua.r, &z);
            if rho.norm() <= BREAKDOWN_TOL * vecops::norm2(&dua.r) * vecops::norm2(&z) {
                restart(op, rhs_primal, rhs_dual, &mut pri, &mut dua, &mut restarts, &mut rng, "rho")?;
                continue 'outer;
            }
            if first {
                p = z;
                pt = zt;
                first = false;
            } else {
                let beta = rho / rho_prev;
                vecops::xpby(&z, beta, &mut p);
                vecops::xpby(&zt, beta, &mut pt);
            }
            let q = op.apply(&p);
            let qt = op.apply_transpose(&pt);
            let sigma = vecops::dot(&pt, &q);
            if sigma.norm() <= BREAKDOWN_TOL * vecops::norm2(&pt) * vecops::norm2(&q) {
                restart(op, rhs_primal, rhs_dual, &mut pri, &mut dua, &mut restarts, &mut rng, "sigma")?;
                continue 'outer;
            }
            let alpha = rho / sigma;
            iter += 1;
            if !pri.done {
                vecops::axpy(alpha, &p, &mut pri.x);
            }
            if !dua.done {
                vecops::axpy(alpha, &pt, &mut dua.x);
            }
            vecops::axpy(-alpha, &q, &mut pri.r);
            vecops::axpy(-alpha, &qt, &mut dua.r);
            rho_prev = rho;
            check_side(&mut pri, iter, opts.tol, rhs_primal, |x| op.apply(x));
            check_side(&mut dua, iter, opts.tol, rhs_dual, |x| op.apply_transpose(x));
        }
    }

    let pre = match opts.precond {
        Some(m) => Preconditioner::Ilut { drop_tol: m.drop_tol },
        None => Preconditioner::None,
    };
    let finish = |side: Side, rhs: &[c64], applied: Vec<c64>| {
        let mut rep = SolveReport::new(n, r, &side.x, rhs, &applied, SolveMode::Bicg, pre, opts.tol);
        rep.iterations = if side.done { side.iterations } else { iter };
        rep.converged = side.done && rep.relative_residual <= opts.tol;
        rep.hit_maxit = !side.done;
        rep.stagnated = side.stagnated;
        rep.relative_residual_history = side.history;
        rep
    };
    let ap = op.apply(&pri.x);
    let at = op.apply_transpose(&dua.x);
    let mut primal = finish(pri, rhs_primal, ap);
    let mut dual = finish(dua, rhs_dual, at);
    primal.pg_defect = trace_defect(&dual.solution, &primal.residual);
    dual.pg_defect = trace_defect(&dual.residual, &primal.solution);
    Ok((primal, dual))
}

fn check_side(side: &mut Side, iter: usize, tol: f64, rhs: &[c64], apply: impl Fn(&[c64]) -> Vec<c64>) {
    if side.done {
        return;
    }
    let mut rel = vecops::norm2(&side.r) / side.rhs_norm;
    if rel <= tol {
        // confirm on the true residual; replace the recursive one if they drifted apart
        let truth = vecops::sub(rhs, &apply(&side.x));
        rel = vecops::norm2(&truth) / side.rhs_norm;
        if rel <= tol {
            side.done = true;
            side.iterations = iter;
        } else {
            side.r = truth;
        }
    }
    side.record(rel);
}

#[allow(clippy::too_many_arguments)]
fn restart(
    op: &KroneckerOperator<'_>,
    rhs_primal: &[c64],
    rhs_dual: &[c64],
    pri: &mut Side,
    dua: &mut Side,
    restarts: &mut usize,
    rng: &mut ChaCha8Rng,
    which: &str,
) -> Result<()> {
    *restarts += 1;
    if *restarts > MAX_RESTARTS {
        return Err(Error::Breakdown(format!(
            "bi-orthogonality scalar {which} vanished; gave up after {MAX_RESTARTS} restarts"
        )));
    }
    pri.r = vecops::sub(rhs_primal, &op.apply(&pri.x));
    dua.r = vecops::sub(rhs_dual, &op.apply_transpose(&dua.x));
    // a small random tilt of the shadow; the dual residual check later removes its effect
    let scale = 1e-8 * vecops::norm2(&dua.r).max(f64::MIN_POSITIVE) / (dua.r.len() as f64).sqrt();
    for v in dua.r.iter_mut() {
        *v += c64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * scale;
    }
    Ok(())
}
