use super::report::trace_defect;
use super::{KroneckerOperator, Preconditioner, SolveMode, SolveReport};
use crate::linalg::{c64, SparseLu};
use crate::{Error, Result};

/// Exact solves of `M x = rhs_primal` and `M^T y = rhs_dual` from one sparse LU.
pub fn direct_solve(op: &KroneckerOperator<'_>, rhs_primal: &[c64], rhs_dual: &[c64]) -> Result<(SolveReport, SolveReport)> {
    let (n, r) = (op.n(), op.r());
    if rhs_primal.len() != n * r || rhs_dual.len() != n * r {
        return Err(Error::Dimension(format!("right-hand sides must have length {}", n * r)));
    }
    let m = op.assemble();
    let lu = SparseLu::new(&m).map_err(|e| match e {
        Error::Singular(s) => Error::Assumption(format!(
            "the shifted Kronecker operator -Lambda(x)I - I(x)A - sum Ncc^T(x)N must be invertible: {s}"
        )),
        other => other,
    })?;
    let x = lu.solve(rhs_primal);
    let y = lu.solve_transpose(rhs_dual);
    let tol = 1e-12;
    let mut primal = SolveReport::new(n, r, &x, rhs_primal, &op.apply(&x), SolveMode::Direct, Preconditioner::None, tol);
    let mut dual = SolveReport::new(n, r, &y, rhs_dual, &op.apply_transpose(&y), SolveMode::Direct, Preconditioner::None, tol);
    primal.pg_defect = trace_defect(&dual.solution, &primal.residual);
    dual.pg_defect = trace_defect(&dual.residual, &primal.solution);
    Ok((primal, dual))
}
