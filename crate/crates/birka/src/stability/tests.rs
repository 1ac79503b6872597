use super::*;
use crate::linalg::{frobenius, inverse, spectral_norm, Mat};
use crate::BilinearSystem;

fn wavy(rows: usize, cols: usize, s: f64) -> Mat<f64> {
    Mat::from_fn(rows, cols, |i, j| ((i * 5 + j * 11) as f64 * s).sin() + if i == j { 1.5 } else { 0.0 })
}

/// `(I - W (W^T W)^{-1} W^T) X`, which `W^T` annihilates.
fn annihilated_by(w: &Mat<f64>, x: &Mat<f64>) -> Mat<f64> {
    let g = inverse(&(w.transpose() * w), "gram").unwrap();
    x - w * (&g * (w.transpose() * x))
}

#[test]
fn petrov_galerkin_exact_residuals_satisfy_both_identities() {
    let (n, r) = (12, 3);
    let (v, w) = (wavy(n, r, 0.31), wavy(n, r, 0.77));
    let r_b = annihilated_by(&w, &wavy(n, r, 1.9));
    let r_c = annihilated_by(&v, &wavy(n, r, 2.3));
    let f = construct_perturbation(&v, &w, &r_b, &r_c).unwrap();
    let scale = f.norm_2;
    assert!(frobenius(&(f.mul(&v) - &r_b)) <= 1e-12 * scale);
    assert!(frobenius(&(f.tmul(&w) - r_c.transpose())) <= 1e-12 * scale);
    assert!(spectral_norm(&(w.transpose() * f.mul(&v))) <= 1e-12 * scale);
}

#[test]
fn identity_defects_factor_through_the_pg_residuals() {
    // F V - R_B = V K (R_C^T V) and W^T F - R_C^T = (W^T R_B) K W^T for any residuals.
    let (n, r) = (10, 2);
    let (v, w, r_b, r_c) = (wavy(n, r, 0.4), wavy(n, r, 0.9), wavy(n, r, 1.7), wavy(n, r, 2.9));
    let f = construct_perturbation(&v, &w, &r_b, &r_c).unwrap();
    let k = inverse(&(w.transpose() * &v), "W^T V").unwrap();
    let lhs_b = f.mul(&v) - &r_b;
    let rhs_b = &v * &k * (r_c.transpose() * &v);
    let lhs_c = f.tmul(&w) - r_c.transpose();
    let rhs_c = (w.transpose() * &r_b) * &k * w.transpose();
    assert!(frobenius(&(lhs_b - &rhs_b)) <= 1e-12 * frobenius(&rhs_b));
    assert!(frobenius(&(lhs_c - &rhs_c)) <= 1e-12 * frobenius(&rhs_c));
}

#[test]
fn bound_chain_on_arbitrary_residuals() {
    let (n, r) = (15, 4);
    let (v, w, r_b, r_c) = (wavy(n, r, 0.2), wavy(n, r, 0.6), wavy(n, r, 1.1), wavy(n, r, 3.1));
    let f = construct_perturbation(&v, &w, &r_b, &r_c).unwrap();
    let bound = perturbation_bound(&r_b, &r_c, &v, &w).unwrap();
    assert!(f.norm_2 <= f.norm_f && f.norm_f <= bound.value);
}

#[test]
fn scalar_fhh_is_exactly_twice_the_norm() {
    let one = |x: f64| Mat::from_fn(1, 1, |_, _| x);
    let f = construct_perturbation(&one(1.0), &one(1.0), &one(0.3), &one(-0.8)).unwrap();
    let got = fhh_norm(&f).unwrap();
    assert!((got - 2.0 * f.norm_2).abs() <= 1e-12 * f.norm_2, "{got} vs {}", 2.0 * f.norm_2);
}

#[test]
fn matrix_free_fhh_matches_dense_assembly() {
    let (n, r) = (5, 2);
    let f = construct_perturbation(&wavy(n, r, 0.3), &wavy(n, r, 0.5), &wavy(n, r, 1.3), &wavy(n, r, 0.8)).unwrap();
    let dense = spectral_norm(&assemble_fhh(&f.to_dense()));
    let got = fhh_norm(&f).unwrap();
    assert!((got - dense).abs() <= 1e-9 * dense, "{got} vs {dense}");
    assert!(got <= 2.0 * f.norm_2 * (1.0 + 1e-12));
}

#[test]
fn perturbed_projection_matches_when_pg_exact() {
    let (n, r) = (9, 2);
    let a = Mat::from_fn(n, n, |i, j| if i == j { -3.0 } else { 0.1 * ((i + j) as f64).cos() });
    let n1 = wavy(n, n, 0.05) * 0.1;
    let sys = BilinearSystem::from_dense(&a, &[n1], &wavy(n, 1, 0.2), &wavy(1, n, 0.4)).unwrap();
    let (v, w) = (wavy(n, r, 0.31), wavy(n, r, 0.77));
    let r_b = annihilated_by(&w, &wavy(n, r, 1.9));
    let r_c = annihilated_by(&v, &wavy(n, r, 2.3));
    let f = construct_perturbation(&v, &w, &r_b, &r_c).unwrap();
    let d = verify_backward_stability(&sys, &v, &w, &f).unwrap();
    assert!(d.max() <= 1e-12, "{d:?}");
    assert!(d.reduced_f_defect <= 1e-12 * f.norm_2);
}
