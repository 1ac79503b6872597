mod common;

use birka::linalg::{inverse, svd_values, Mat};
use birka::system::io::{read_system, write_system};
use birka::system::{
    assemble_qhat, error_system, h2_error_squared, h2_norm_squared_kron, h2_norm_squared_lyap, qhat_diagnostics,
    solve_generalized_lyapunov, GramianOperator,
};
use birka::BilinearSystem;
use common::{gaussian, random_stable_system, rng};
use proptest::prelude::*;

fn system() -> impl Strategy<Value = BilinearSystem> {
    (1usize..9, 1usize..4, 1usize..4, any::<u64>()).prop_map(|(n, m, p, seed)| random_stable_system(seed, n, m, p))
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn both_h2_routes_agree(sys in system()) {
        let k = h2_norm_squared_kron(&sys).unwrap();
        let l = h2_norm_squared_lyap(&sys).unwrap();
        prop_assert!(close(k, l, 1e-9), "kron {k} lyap {l}");
    }

    #[test]
    fn h2_is_invariant_under_state_similarity(sys in system(), seed in any::<u64>()) {
        let n = sys.n();
        let t = gaussian(&mut rng(seed), n, n) + Mat::<f64>::identity(n, n) * 3.0;
        let ti = inverse(&t, "T").unwrap();
        let a = &t * sys.a().to_dense() * &ti;
        let ns: Vec<_> = sys.ns().iter().map(|nk| &t * nk.to_dense() * &ti).collect();
        let moved = BilinearSystem::from_dense(&a, &ns, &(&t * sys.b().to_dense()), &(sys.c().to_dense() * &ti)).unwrap();
        let (x, y) = (h2_norm_squared_kron(&sys).unwrap(), h2_norm_squared_kron(&moved).unwrap());
        prop_assert!(close(x, y, 1e-8), "{x} vs {y}");
    }

    #[test]
    fn error_against_itself_vanishes(sys in system()) {
        let e = h2_error_squared(&sys, &sys).unwrap();
        prop_assert!(e.abs() <= 1e-10 * h2_norm_squared_kron(&sys).unwrap().max(1.0));
    }

    #[test]
    fn error_system_is_symmetric_in_its_arguments(n in 2usize..6, seed in any::<u64>()) {
        let s1 = random_stable_system(seed, n, 2, 1);
        let s2 = random_stable_system(seed ^ 0xabcd, n - 1, 2, 1);
        let e12 = h2_error_squared(&s1, &s2).unwrap();
        let e21 = h2_error_squared(&s2, &s1).unwrap();
        prop_assert!(close(e12, e21, 1e-9));
        prop_assert_eq!(error_system(&s1, &s2).unwrap().n(), 2 * n - 1);
    }

    #[test]
    fn gramian_solution_has_small_residual_and_is_symmetric(sys in system()) {
        let sol = solve_generalized_lyapunov(&sys).unwrap();
        prop_assert!(sol.relative_residual <= 1e-10);
        let p = &sol.p;
        for i in 0..sys.n() {
            for j in 0..sys.n() {
                prop_assert!((p[(i, j)] - p[(j, i)]).abs() <= 1e-12 * (1.0 + p[(i, j)].abs()));
            }
        }
    }

    #[test]
    fn qhat_is_four_copies_of_the_base_operator(n in 1usize..5, m in 1usize..3, seed in any::<u64>()) {
        let sys = random_stable_system(seed, n, m, 1);
        let q = svd_values(&assemble_qhat(&sys).unwrap()).unwrap();
        let g = svd_values(&GramianOperator::new(&sys).assemble().to_dense()).unwrap();
        let mut want: Vec<f64> = g.iter().flat_map(|&s| [s; 4]).collect();
        want.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(q.len(), want.len());
        for (a, b) in q.iter().zip(&want) {
            prop_assert!((a - b).abs() <= 1e-10 * want[0]);
        }
        let d = qhat_diagnostics(&sys).unwrap();
        let smin = *want.last().unwrap();
        prop_assert!(close(d.qinv_norm, 1.0 / smin, 1e-8));
    }

    #[test]
    fn system_directory_round_trip(sys in system()) {
        let dir = tempfile::tempdir().unwrap();
        write_system(dir.path(), &sys).unwrap();
        let back = read_system(dir.path()).unwrap();
        prop_assert_eq!(back.a().to_dense(), sys.a().to_dense());
        prop_assert_eq!(back.b().to_dense(), sys.b().to_dense());
        prop_assert_eq!(back.c().to_dense(), sys.c().to_dense());
        for (x, y) in back.ns().iter().zip(sys.ns()) {
            prop_assert_eq!(x.to_dense(), y.to_dense());
        }
    }
}

#[test]
fn linear_system_matches_closed_form() {
    // A = diag(-1, -2), no bilinear part: ||H||^2 = sum_ij c_i c_j b_i b_j / (-(a_i + a_j))
    let a = Mat::from_fn(2, 2, |i, j| if i == j { -(i as f64 + 1.0) } else { 0.0 });
    let b = Mat::from_fn(2, 1, |i, _| [1.0, 2.0][i]);
    let c = Mat::from_fn(1, 2, |_, j| [3.0, -1.0][j]);
    let sys = BilinearSystem::from_dense(&a, &[Mat::zeros(2, 2)], &b, &c).unwrap();
    let (ad, bd, cd) = ([-1.0, -2.0], [1.0, 2.0], [3.0, -1.0]);
    let mut want = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            want += cd[i] * cd[j] * bd[i] * bd[j] / -(ad[i] + ad[j]);
        }
    }
    assert!(close(h2_norm_squared_kron(&sys).unwrap(), want, 1e-13));
    assert!(close(h2_norm_squared_lyap(&sys).unwrap(), want, 1e-12));
}

#[test]
fn malformed_system_directory_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("system.txt"), "n = 2\nm = x\n").unwrap();
    let err = read_system(dir.path()).unwrap_err();
    assert!(err.is_validation() || matches!(err, birka::Error::Io(_)), "{err}");
}
