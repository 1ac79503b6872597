mod common;

use birka::birka::{initialize_guess, step_operator, step_rhs};
use birka::linalg::{c64, vec, vecops::norm2};
use birka::solvers::{bicg_dual_solve, build_ilut, direct_solve, BicgOptions, SolveReport};
use common::random_stable_system;
use proptest::prelude::*;

/// `max |residual - (rhs - M x)| / ||rhs||` with `M` applied matrix-free.
fn recompute_gap(report: &SolveReport, rhs: &[c64], apply: impl Fn(&[c64]) -> Vec<c64>) -> f64 {
    let x = vec(&report.solution);
    let mx = apply(&x);
    let stored = vec(&report.residual);
    let diff: Vec<c64> = rhs.iter().zip(&mx).zip(&stored).map(|((b, y), s)| b - y - s).collect();
    norm2(&diff) / norm2(rhs)
}

fn case() -> impl Strategy<Value = (usize, usize, usize, u64)> {
    (4usize..12, 1usize..4, 1usize..3).prop_flat_map(|(n, r, m)| (Just(n), 1..r.min(n - 1) + 1, Just(m), any::<u64>()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bicg_agrees_with_direct((n, r, m, seed) in case()) {
        let sys = random_stable_system(seed, n, m, 1);
        let guess = initialize_guess(seed, r, m, 1).unwrap();
        let op = step_operator(&sys, &guess).unwrap();
        let (bp, bd) = step_rhs(&sys, &guess).unwrap();
        let (dp, dd) = direct_solve(&op, &bp, &bd).unwrap();
        let (ip, id) = bicg_dual_solve(&op, &bp, &bd, BicgOptions::new(1e-12)).unwrap();
        for (x, y) in [(&dp, &ip), (&dd, &id)] {
            let gap: Vec<c64> = vec(&x.solution).iter().zip(vec(&y.solution)).map(|(a, b)| a - b).collect();
            prop_assert!(norm2(&gap) <= 1e-7 * norm2(&vec(&x.solution)));
            prop_assert!(y.converged && !y.hit_maxit);
        }
    }

    #[test]
    fn stored_residuals_are_the_true_residuals((n, r, m, seed) in case(), tol in prop::sample::select(vec![1e-2, 1e-6, 1e-10])) {
        let sys = random_stable_system(seed, n, m, 1);
        let guess = initialize_guess(seed.wrapping_add(1), r, m, 1).unwrap();
        let op = step_operator(&sys, &guess).unwrap();
        let (bp, bd) = step_rhs(&sys, &guess).unwrap();
        let (p, d) = bicg_dual_solve(&op, &bp, &bd, BicgOptions::new(tol)).unwrap();
        prop_assert!(recompute_gap(&p, &bp, |x| op.apply(x)) <= 1e-12);
        prop_assert!(recompute_gap(&d, &bd, |x| op.apply_transpose(x)) <= 1e-12);
        for s in [&p, &d] {
            if s.converged {
                prop_assert!(s.relative_residual <= tol);
            }
        }
    }

    #[test]
    fn exact_ilut_makes_bicg_trivial((n, r, m, seed) in case()) {
        let sys = random_stable_system(seed, n, m, 1);
        let guess = initialize_guess(seed, r, m, 1).unwrap();
        let op = step_operator(&sys, &guess).unwrap();
        let (bp, bd) = step_rhs(&sys, &guess).unwrap();
        let pre = build_ilut(&op, 0.0).unwrap();
        let opts = BicgOptions { tol: 1e-10, maxit: None, precond: Some(&pre) };
        let (p, d) = bicg_dual_solve(&op, &bp, &bd, opts).unwrap();
        prop_assert!(p.converged && d.converged);
        prop_assert!(p.iterations <= 3 && d.iterations <= 3, "{} {}", p.iterations, d.iterations);
    }

    #[test]
    fn ilut_keeps_fewer_entries_as_drop_grows((n, r, m, seed) in case()) {
        let sys = random_stable_system(seed, n, m, 1);
        let guess = initialize_guess(seed, r, m, 1).unwrap();
        let op = step_operator(&sys, &guess).unwrap();
        let exact = build_ilut(&op, 0.0).unwrap().nnz();
        let loose = build_ilut(&op, 1e-1).unwrap().nnz();
        prop_assert!(loose <= exact);
    }
}

#[test]
fn maxit_is_reported_not_raised() {
    let sys = random_stable_system(9, 10, 2, 1);
    let guess = initialize_guess(9, 3, 2, 1).unwrap();
    let op = step_operator(&sys, &guess).unwrap();
    let (bp, bd) = step_rhs(&sys, &guess).unwrap();
    let opts = BicgOptions { tol: 1e-14, maxit: Some(1), precond: None };
    let (p, _) = bicg_dual_solve(&op, &bp, &bd, opts).unwrap();
    assert!(p.hit_maxit && !p.converged);
    assert_eq!(p.iterations, 1);
}
