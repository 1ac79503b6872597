mod common;

use birka::birka::{run_birka, sort_eigenvalues, BirkaConfig, SolverMode};
use birka::linalg::{c64, eig_dense, inverse, to_complex, Mat};
use birka::BilinearSystem;
use common::{random_stable_system, rng};
use proptest::prelude::*;
use rand::Rng;

/// `C (s I - A)^{-1} B` for a single-input single-output pair.
fn transfer(a: &Mat<f64>, b: &Mat<f64>, c: &Mat<f64>, s: c64) -> c64 {
    let n = a.nrows();
    let m = Mat::from_fn(n, n, |i, j| if i == j { s } else { c64::new(0.0, 0.0) }) - to_complex(a);
    let x = inverse(&m, "resolvent").unwrap() * to_complex(b);
    (to_complex(c) * x)[(0, 0)]
}

fn linear_siso(seed: u64, n: usize) -> BilinearSystem {
    let sys = random_stable_system(seed, n, 1, 1);
    let zero = Mat::zeros(n, n);
    BilinearSystem::from_dense(&sys.a().to_dense(), &[zero], &sys.b().to_dense(), &sys.c().to_dense()).unwrap()
}

#[test]
fn linear_fixed_point_interpolates_at_mirrored_poles() {
    // Without bilinear terms a fixed point is an H2-optimal Hermite interpolant at -lambda_i.
    let mut hits = 0;
    for seed in 0..6 {
        let sys = linear_siso(seed, 10);
        let res = run_birka(&sys, &BirkaConfig::new(3).btol(1e-12).max_outer(200).seed(seed)).unwrap();
        if !res.converged {
            continue;
        }
        hits += 1;
        let red = &res.final_guess;
        let (a, b, c) = (sys.a().to_dense(), sys.b().to_dense(), sys.c().to_dense());
        for l in eig_dense(&red.a).unwrap().values {
            let s = -l;
            let full = transfer(&a, &b, &c, s);
            let approx = transfer(&red.a, &red.b, &red.c, s);
            assert!((full - approx).norm() <= 1e-7 * full.norm().max(1e-12), "seed {seed}: {full} vs {approx}");
        }
    }
    assert!(hits >= 3, "only {hits} of 6 linear runs converged");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn history_is_consistent(n in 5usize..14, r in 1usize..4, seed in any::<u64>()) {
        let sys = random_stable_system(seed, n, 2, 1);
        let cfg = BirkaConfig::new(r).btol(1e-8).max_outer(40).seed(seed);
        let res = run_birka(&sys, &cfg).unwrap();
        prop_assert_eq!(res.history.len(), res.iterations);
        prop_assert_eq!(res.reduced.n(), r);
        prop_assert_eq!(res.final_guess.a.nrows(), r);
        for (k, h) in res.history.iter().enumerate() {
            prop_assert_eq!(h.iteration, k + 1);
            prop_assert_eq!(&h.eigenvalues, &sort_eigenvalues(&h.eigenvalues));
        }
        let last = res.history.last().unwrap();
        prop_assert_eq!(res.converged, last.relative_change < cfg.btol);
        prop_assert_eq!(&last.reduced, &res.final_guess);
    }

    #[test]
    fn rerun_from_a_converged_guess_returns_to_it(n in 6usize..12, seed in any::<u64>()) {
        // Convergence can alternate between large and small steps, so a rerun may
        // take a second step; it must still land on the same fixed point.
        let sys = random_stable_system(seed, n, 1, 1);
        let cfg = BirkaConfig::new(2).btol(1e-11).max_outer(150).seed(seed);
        let res = run_birka(&sys, &cfg).unwrap();
        prop_assume!(res.converged);
        let again = birka::birka::run_birka_from(&sys, &cfg, res.final_guess.clone()).unwrap();
        prop_assert!(again.converged);
        let (x, y) = (&res.history.last().unwrap().eigenvalues, &again.history.last().unwrap().eigenvalues);
        let d = birka::birka::relative_eigenvalue_change(x, y);
        prop_assert!(d < 1e-7, "fixed point moved by {d:e}");
    }

    #[test]
    fn inexact_solves_track_the_exact_run(n in 6usize..12, seed in any::<u64>()) {
        let sys = random_stable_system(seed, n, 1, 1);
        let tol = [1e-10, 1e-12][rng(seed).random_range(0..2)];
        let exact = run_birka(&sys, &BirkaConfig::new(2).max_outer(3).seed(seed)).unwrap();
        let inexact = run_birka(&sys, &BirkaConfig::new(2).max_outer(3).seed(seed).solver(SolverMode::bicg(tol))).unwrap();
        let (x, y) = (&exact.history[0].eigenvalues, &inexact.history[0].eigenvalues);
        let change = birka::birka::relative_eigenvalue_change(x, y);
        prop_assert!(change < 1e-5, "first-step drift {change:e} at tol {tol:e}");
    }
}
