use super::{construct_perturbation, fhh_norm, perturbation_bound, verify_backward_stability};
use crate::birka::{BirkaResult, CapturedBases};
use crate::linalg::{frobenius, spectral_norm};
use crate::{BilinearSystem, Error, Result};
use serde::Serialize;
use std::path::Path;

/// Backward-stability measurements for one BIRKA step, in orthonormal frames.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub iteration: usize,
    pub r_b_max_col: f64,
    pub r_c_max_col: f64,
    pub r_b_frobenius: f64,
    pub r_c_frobenius: f64,
    /// `||(W^T V)^{-1} W^T||_F`
    pub oblique_frobenius: f64,
    /// `||V (W^T V)^{-1}||_F`
    pub right_frobenius: f64,
    pub f_norm_2: f64,
    pub f_norm_f: f64,
    pub f_bound: f64,
    /// `||W^T R_B||_2`, `||R_C^T V||_2`
    pub pg_defect_b: f64,
    pub pg_defect_c: f64,
    /// `||F V - R_B||_2`, `||W^T F - R_C^T||_2`
    pub identity_defect_b: f64,
    pub identity_defect_c: f64,
    pub reduced_f_defect: f64,
    /// Largest relative difference between projected-perturbed and inexact reduced matrices.
    pub projection_defect: f64,
    pub fhh_norm: f64,
}

impl StabilityReport {
    pub const CSV_HEADER: [&'static str; 17] = [
        "iteration",
        "r_b_max_col",
        "r_c_max_col",
        "r_b_frobenius",
        "r_c_frobenius",
        "oblique_frobenius",
        "right_frobenius",
        "f_norm_2",
        "f_norm_f",
        "f_bound",
        "pg_defect_b",
        "pg_defect_c",
        "identity_defect_b",
        "identity_defect_c",
        "reduced_f_defect",
        "projection_defect",
        "fhh_norm",
    ];

    /// Values in [`Self::CSV_HEADER`] order, printed to round-trip exactly.
    pub fn csv_record(&self) -> Vec<String> {
        let mut out = vec![self.iteration.to_string()];
        out.extend(
            [
                self.r_b_max_col,
                self.r_c_max_col,
                self.r_b_frobenius,
                self.r_c_frobenius,
                self.oblique_frobenius,
                self.right_frobenius,
                self.f_norm_2,
                self.f_norm_f,
                self.f_bound,
                self.pg_defect_b,
                self.pg_defect_c,
                self.identity_defect_b,
                self.identity_defect_c,
                self.reduced_f_defect,
                self.projection_defect,
                self.fhh_norm,
            ]
            .iter()
            .map(f64::to_string),
        );
        out
    }

    /// `||F||_2 <= ||F||_F <= bound`, with a relative rounding allowance.
    pub fn bound_chain_holds(&self) -> bool {
        let slack = 1.0 + 1e-12;
        self.f_norm_2 <= self.f_norm_f * slack && self.f_norm_f <= self.f_bound * slack
    }

    /// `||F_hat_hat|| <= 2 ||F||_2`
    pub fn fhh_within_twice(&self) -> bool {
        self.fhh_norm <= 2.0 * self.f_norm_2 * (1.0 + 1e-12)
    }
}

pub fn stability_report(sys: &BilinearSystem, bases: &CapturedBases, iteration: usize) -> Result<StabilityReport> {
    let (v, w, r_b, r_c) = (&bases.v_r, &bases.w_r, &bases.r_b, &bases.r_c);
    let f = construct_perturbation(v, w, r_b, r_c)?;
    let bound = perturbation_bound(r_b, r_c, v, w)?;
    let defects = verify_backward_stability(sys, v, w, &f)?;
    Ok(StabilityReport {
        iteration,
        r_b_max_col: bound.max_col_r_b,
        r_c_max_col: bound.max_col_r_c,
        r_b_frobenius: frobenius(r_b),
        r_c_frobenius: frobenius(r_c),
        oblique_frobenius: bound.left_frobenius,
        right_frobenius: bound.right_frobenius,
        f_norm_2: f.norm_2,
        f_norm_f: f.norm_f,
        f_bound: bound.value,
        pg_defect_b: spectral_norm(&(w.transpose() * r_b)),
        pg_defect_c: spectral_norm(&(r_c.transpose() * v)),
        identity_defect_b: spectral_norm(&(f.mul(v) - r_b)),
        identity_defect_c: spectral_norm(&(f.tmul(w) - r_c.transpose())),
        reduced_f_defect: defects.reduced_f_defect,
        projection_defect: defects.max(),
        fhh_norm: fhh_norm(&f)?,
    })
}

/// One report per recorded iteration; the run must have captured its bases.
pub fn stability_history(sys: &BilinearSystem, result: &BirkaResult) -> Result<Vec<StabilityReport>> {
    result
        .history
        .iter()
        .map(|h| {
            let bases = h.bases.as_ref().ok_or_else(|| {
                Error::Invalid("stability reports need a BIRKA run with captured bases".into())
            })?;
            stability_report(sys, bases, h.iteration)
        })
        .collect()
}

pub fn write_stability_csv(rows: &[StabilityReport], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(StabilityReport::CSV_HEADER)?;
    for r in rows {
        w.write_record(r.csv_record())?;
    }
    w.flush()?;
    Ok(())
}
