//! Calibrated comparison of a measured grid against a model grid.
//!
//! The model is scaled by one real constant `C`, fitted by weighted least
//! squares on the calibration column (or on all columns). Per point the
//! report gives the residual `C·model − measured` and its pull
//! `|residual|/σ`; per column and overall it gives the normalized RMS
//! deviation `sqrt(Σ|residual|² / Σ|measured|²)`.

use std::fmt::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::output::{GridRow, GridTable};
use crate::error::{Error, Result};
use crate::kernel::{fit_scale, Calibration, FitPoint};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    pub calibration_gamma: Option<f64>,
    pub coverage: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions { calibration_gamma: Some(1.0), coverage: 2.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonPoint {
    pub epsilon_over_d: f64,
    pub gamma_over_d: f64,
    pub measured: Complex64,
    pub sigma: f64,
    pub model: Complex64,
    pub residual: Complex64,
    pub pull: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub gamma_over_d: f64,
    pub normalized_rms: f64,
    pub max_pull: f64,
    /// Constant fitted on this column alone.
    pub calibration: Calibration,
    /// `|C_column − C| ≤ coverage·sqrt(σ_column² + σ_C²)`
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub calibration: Calibration,
    pub calibration_gamma: Option<f64>,
    pub coverage: f64,
    pub points: Vec<ComparisonPoint>,
    pub columns: Vec<ColumnSummary>,
    pub normalized_rms: f64,
    pub max_pull: f64,
}

impl ComparisonReport {
    pub fn column(&self, gamma: f64) -> Option<&ColumnSummary> {
        self.columns.iter().find(|c| (c.gamma_over_d - gamma).abs() < 1e-12)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let c = &self.calibration;
        let _ = writeln!(
            s,
            "C = {:.6} ± {:.6}  (χ²/dof = {:.3}, {} points{}, calibration Γ↓/d = {})",
            c.constant,
            c.error,
            c.chi2_per_dof,
            c.points,
            if c.unweighted { ", unweighted" } else { "" },
            self.calibration_gamma.map_or("all".to_string(), |g| g.to_string())
        );
        let _ = writeln!(s, "normalized RMS = {:.4}   max pull = {:.3}", self.normalized_rms, self.max_pull);
        let _ = writeln!(s);
        let _ = writeln!(s, "{:>8} {:>10} {:>10} {:>12} {:>10}", "Γ↓/d", "norm.RMS", "max pull", "C(column)", "consistent");
        for col in &self.columns {
            let _ = writeln!(
                s,
                "{:>8} {:>10.4} {:>10.3} {:>12.6} {:>10}",
                col.gamma_over_d, col.normalized_rms, col.max_pull, col.calibration.constant, col.consistent
            );
        }
        let _ = writeln!(s);
        let _ = writeln!(
            s,
            "{:>8} {:>8} {:>12} {:>12} {:>12} {:>12} {:>10} {:>8}",
            "ε/d", "Γ↓/d", "Re meas", "Im meas", "Re C·model", "Im C·model", "σ", "pull"
        );
        for p in &self.points {
            let m = p.model * c.constant;
            let _ = writeln!(
                s,
                "{:>8.4} {:>8} {:>12.5} {:>12.5} {:>12.5} {:>12.5} {:>10.3e} {:>8.3}",
                p.epsilon_over_d, p.gamma_over_d, p.measured.re, p.measured.im, m.re, m.im, p.sigma, p.pull
            );
        }
        s
    }
}

fn key(r: &GridRow) -> (u64, u64) {
    (r.epsilon_over_d.to_bits(), r.gamma_over_d.to_bits())
}

fn pull(residual: Complex64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        residual.norm() / sigma
    } else if residual.norm() == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

fn nrms(points: &[&ComparisonPoint]) -> f64 {
    let num: f64 = points.iter().map(|p| p.residual.norm_sqr()).sum();
    let den: f64 = points.iter().map(|p| p.measured.norm_sqr()).sum();
    if den > 0.0 {
        (num / den).sqrt()
    } else if num == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Compares `measured` against `model`. Both tables must list the same
/// `(ε/d, Γ↓/d)` points in the same order.
pub fn compare_tables(measured: &GridTable, model: &GridTable, opts: &CompareOptions) -> Result<ComparisonReport> {
    if measured.rows.len() != model.rows.len() {
        return Err(Error::Structure(format!(
            "grids differ in size: {} measured vs {} model points",
            measured.rows.len(),
            model.rows.len()
        )));
    }
    if measured.rows.is_empty() {
        return Err(Error::Structure("empty grids".into()));
    }
    for (a, b) in measured.rows.iter().zip(&model.rows) {
        if key(a) != key(b) {
            return Err(Error::Structure(format!(
                "grid mismatch: measured point (ε/d = {}, Γ↓/d = {}) against model point (ε/d = {}, Γ↓/d = {})",
                a.epsilon_over_d, a.gamma_over_d, b.epsilon_over_d, b.gamma_over_d
            )));
        }
    }
    let fit_points = |keep: &dyn Fn(f64) -> bool| -> Vec<FitPoint> {
        measured
            .rows
            .iter()
            .zip(&model.rows)
            .filter(|(a, _)| keep(a.gamma_over_d))
            .map(|(a, b)| FitPoint { measured: a.value, sigma: a.error, model: b.value })
            .collect()
    };
    let same = |a: f64, b: f64| (a - b).abs() < 1e-12;
    let calib_points = match opts.calibration_gamma {
        Some(g) => fit_points(&|x| same(x, g)),
        None => fit_points(&|_| true),
    };
    if calib_points.is_empty() {
        return Err(Error::Structure(format!(
            "no Γ↓/d = {:?} column to calibrate against",
            opts.calibration_gamma
        )));
    }
    let calibration = fit_scale(&calib_points)?;
    let points: Vec<ComparisonPoint> = measured
        .rows
        .iter()
        .zip(&model.rows)
        .map(|(a, b)| {
            let residual = b.value * calibration.constant - a.value;
            ComparisonPoint {
                epsilon_over_d: a.epsilon_over_d,
                gamma_over_d: a.gamma_over_d,
                measured: a.value,
                sigma: a.error,
                model: b.value,
                residual,
                pull: pull(residual, a.error),
            }
        })
        .collect();
    let mut gammas: Vec<f64> = Vec::new();
    for p in &points {
        if !gammas.iter().any(|&g| same(g, p.gamma_over_d)) {
            gammas.push(p.gamma_over_d);
        }
    }
    let mut columns = Vec::new();
    for &g in &gammas {
        let col: Vec<&ComparisonPoint> = points.iter().filter(|p| same(p.gamma_over_d, g)).collect();
        let own = fit_scale(&fit_points(&|x| same(x, g)))?;
        let tolerance = opts.coverage * (own.error.powi(2) + calibration.error.powi(2)).sqrt();
        columns.push(ColumnSummary {
            gamma_over_d: g,
            normalized_rms: nrms(&col),
            max_pull: col.iter().map(|p| p.pull).fold(0.0, f64::max),
            consistent: (own.constant - calibration.constant).abs() <= tolerance,
            calibration: own,
        });
    }
    let all: Vec<&ComparisonPoint> = points.iter().collect();
    Ok(ComparisonReport {
        normalized_rms: nrms(&all),
        max_pull: points.iter().map(|p| p.pull).fold(0.0, f64::max),
        calibration,
        calibration_gamma: opts.calibration_gamma,
        coverage: opts.coverage,
        points,
        columns,
    })
}
