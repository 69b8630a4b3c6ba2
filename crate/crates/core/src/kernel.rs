//! Saddle-point prediction for the GOE parametric correlator.
//!
//! In the three "eigenvalue" coordinates `λ₁, λ₂ ∈ [0, ∞)`, `λ ∈ [0, 1]` the
//! correlator is proportional to
//!
//! ```text
//! ∭ μ(λ₁, λ₂, λ) · S² · exp(−iπ r S − D_γ),    S = λ₁ + λ₂ + 2λ,
//! μ = (1 − λ) λ |λ₁ − λ₂| / ( sqrt((1+λ₁)λ₁(1+λ₂)λ₂) (λ+λ₁)² (λ+λ₂)² )
//! ```
//!
//! with `r = ε/d` and `γ = Γ↓/d`. Two forms of the symmetry-breaking damping
//! `D_γ` are provided (see [`Damping`]). The overall constant is not part of
//! the formula; [`fit_scale`] determines it against Monte Carlo data.
//!
//! Sign convention: `exp(−iπ r S)` is analytic in the lower half `r` plane, so
//! a smoothing `η` enters as `r → r − i·regulator`. The Monte Carlo estimator
//! uses `ε = E₁ − E₂` with `E₁` on the retarded branch and is analytic in the
//! upper half plane; its value at `ε` corresponds to the conjugate of the
//! kernel at `r = ε/d` with `regulator = 2η/d`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlator::CorrelatorGrid;
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadResult, Tolerance};

/// Form of the `γ`-dependent damping in the exponent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Damping {
    /// `(πγ/4)·S·(1 + S)`, a function of `S` alone.
    #[default]
    Printed,
    /// The Efetov-coordinate exponent `(πγ/4)(2λ₁²λ₂² − λ₁² − λ₂² − λ² + 1)`
    /// rewritten in these coordinates: `(πγ/2)(S + λ₁² + λ₂² − 2λ²)`.
    EfetovMapped,
}

impl std::str::FromStr for Damping {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Damping::Printed),
            "efetov-mapped" => Ok(Damping::EfetovMapped),
            other => Err(Error::Config(format!(
                "unknown damping {other:?} (expected printed or efetov-mapped)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    /// `ε/d`
    pub r: f64,
    /// `Γ↓/d`
    pub gamma: f64,
    /// Imaginary shift of `r`.
    pub regulator: f64,
    #[serde(default)]
    pub damping: Damping,
}

impl KernelParams {
    pub fn new(r: f64, gamma: f64, regulator: f64) -> Result<Self> {
        let p = KernelParams { r, gamma, regulator, damping: Damping::Printed };
        p.validate()?;
        Ok(p)
    }

    pub fn with_damping(mut self, damping: Damping) -> Self {
        self.damping = damping;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.r.is_finite() {
            return Err(Error::Parameter("r must be finite".into()));
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::Parameter(format!("Γ↓/d must be ≥ 0, got {}", self.gamma)));
        }
        if !(self.regulator.is_finite() && self.regulator >= 0.0) {
            return Err(Error::Parameter(format!("regulator must be ≥ 0, got {}", self.regulator)));
        }
        if self.gamma == 0.0 && self.regulator == 0.0 {
            return Err(Error::Parameter("Γ↓/d = 0 requires a positive regulator".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Subdivision budget for each one-dimensional stage.
    pub max_intervals: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-6, abs_tol: 1e-12, max_intervals: 400 }
    }
}

impl QuadratureSpec {
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureSpec {
            rel_tol: self.rel_tol / factor,
            abs_tol: self.abs_tol / factor,
            max_intervals: self.max_intervals * 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

fn damping_term(l1: f64, l2: f64, l: f64, s: f64, gamma: f64, damping: Damping) -> f64 {
    if gamma == 0.0 {
        return 0.0;
    }
    match damping {
        Damping::Printed => 0.25 * PI * gamma * s * (1.0 + s),
        Damping::EfetovMapped => 0.5 * PI * gamma * (s + l1 * l1 + l2 * l2 - 2.0 * l * l),
    }
}

#[inline]
fn integrand(l1: f64, l2: f64, l: f64, p: &KernelParams) -> Complex64 {
    let numerator = (1.0 - l) * l * (l1 - l2).abs();
    if numerator == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let s = l1 + l2 + 2.0 * l;
    let log_damp = -PI * p.regulator * s - damping_term(l1, l2, l, s, p.gamma, p.damping);
    if log_damp < -700.0 {
        return Complex64::new(0.0, 0.0);
    }
    let denom = ((1.0 + l1) * l1 * (1.0 + l2) * l2).sqrt() * (l + l1).powi(2) * (l + l2).powi(2);
    let magnitude = numerator / denom * s * s * log_damp.exp();
    let (sin, cos) = (-PI * p.r * s).sin_cos();
    Complex64::new(magnitude * cos, magnitude * sin)
}

/// Full integrand at one point of the integration domain.
pub fn triple_integrand(l1: f64, l2: f64, l: f64, p: &KernelParams) -> Result<Complex64> {
    if !(l1.is_finite() && l1 >= 0.0 && l2.is_finite() && l2 >= 0.0) {
        return Err(Error::Parameter(format!("λ₁ = {l1}, λ₂ = {l2} must be finite and ≥ 0")));
    }
    if !(0.0..=1.0).contains(&l) {
        return Err(Error::Parameter(format!("λ = {l} must lie in [0, 1]")));
    }
    p.validate()?;
    Ok(integrand(l1, l2, l, p))
}

/// `iπ(ω/d)(λ − λ₁λ₂) − (πγ/4)(2λ₁²λ₂² − λ₁² − λ₂² − λ² + 1)`
pub fn efetov_exponent(l: f64, l1: f64, l2: f64, omega_over_d: f64, gamma: f64) -> Complex64 {
    let re = -0.25 * PI * gamma * (2.0 * l1 * l1 * l2 * l2 - l1 * l1 - l2 * l2 - l * l + 1.0);
    let im = PI * omega_over_d * (l - l1 * l2);
    Complex64::new(re, im)
}

/// Efetov coordinates `(λ, λ₁, λ₂)` of the point `(a, b, c)` in the
/// coordinates used here: `λ = 1 − 2c` and `cosh(θ₁ ± θ₂) = 1 + 2·{a, b}`
/// with `λ_i = cosh θ_i` (taking `a ≥ b`).
pub fn to_efetov_coordinates(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    let plus = (1.0 + 2.0 * hi).acosh();
    let minus = (1.0 + 2.0 * lo).acosh();
    let theta1 = 0.5 * (plus + minus);
    let theta2 = 0.5 * (plus - minus);
    (1.0 - 2.0 * c, theta1.cosh(), theta2.cosh())
}

/// Value of the triple integral (without the overall constant) and its
/// estimated absolute error.
///
/// The `λ₁ ↔ λ₂` symmetry restricts the domain to `λ₂ ≤ λ₁`; then
/// `λ₁ = t/(1 − t)` maps `[0, ∞)` to `[0, 1)` and `λ₂ = λ₁ v⁴` removes the
/// `λ₂^{-1/2}` endpoint singularity. Both the `t` and `v` ranges are further
/// reparametrized (`t = s²`, `w = v²`) to flatten logarithmic endpoint
/// behaviour. The innermost `λ` integral is split at
/// `λ₂` and `λ₁`, where the measure changes scale.
pub fn k_analytic(p: &KernelParams, quad: &QuadratureSpec) -> Result<KernelValue> {
    p.validate()?;
    if !(quad.rel_tol > 0.0 && quad.abs_tol >= 0.0 && quad.max_intervals > 0) {
        return Err(Error::Parameter("quadrature tolerances must be positive".into()));
    }
    // A coarse pass fixes the scale of the result; the nested stages then
    // work to absolute targets that are a fraction of the final tolerance.
    let coarse = nested(p, 1e-2, quad.abs_tol, quad.max_intervals, None);
    let scale = coarse.value.norm().max(quad.abs_tol);
    let fine = nested(p, quad.rel_tol, quad.abs_tol, quad.max_intervals, Some(scale * quad.rel_tol));
    let evaluations = coarse.evaluations + fine.evaluations;
    // Factor 2 from the λ₁ ↔ λ₂ symmetry.
    let value = fine.value * 2.0;
    let error = fine.error * 2.0;
    let tolerance = quad.abs_tol.max(quad.rel_tol * value.norm());
    if !fine.converged || error > tolerance {
        return Err(Error::NoConvergence { value, error, tolerance });
    }
    Ok(KernelValue { value, error, evaluations })
}

/// `∫₀¹ dλ` of the integrand, split at `λ₂ ≤ λ₁`. Above each break the
/// integrand falls off like `1/λ`, so those pieces are integrated in `ln λ`.
fn inner_lambda(l1: f64, l2: f64, p: &KernelParams, tol: &Tolerance) -> QuadResult {
    let piece_tol = Tolerance { abs: tol.abs / 3.0, ..*tol };
    let mut total = QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, evaluations: 0, converged: true };
    let mut add = |r: QuadResult| {
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        total.converged &= r.converged;
    };
    let first = l2.min(1.0);
    add(integrate(|l| (integrand(l1, l2, l, p), 0.0), 0.0, first, &[], &piece_tol));
    let mut log_piece = |lo: f64, hi: f64| {
        if lo < hi {
            let span = (hi / lo).ln();
            add(integrate(
                |u| {
                    let l = lo * (span * u).exp();
                    (integrand(l1, l2, l.min(1.0), p) * (l * span), 0.0)
                },
                0.0,
                1.0,
                &[],
                &piece_tol,
            ));
        }
    };
    log_piece(l2, l1.min(1.0));
    log_piece(l1.max(l2), 1.0);
    total
}

/// Relative accuracy below which the nested stages stop refining.
const NESTED_REL_FLOOR: f64 = 1e-12;

/// Integral over `λ₂ ≤ λ₁`. With `target` set, the middle and inner stages
/// aim for absolute errors of `0.3·target` and `0.1·target` in the final
/// value; otherwise they use `rel` as well.
fn nested(p: &KernelParams, rel: f64, abs: f64, max_intervals: usize, target: Option<f64>) -> QuadResult {
    let outer_tol = Tolerance { abs, rel, max_intervals };
    let mut evaluations = 0usize;
    let mut outer = integrate(
        |s| {
            let t = s * s;
            let one_minus = 1.0 - t;
            let l1 = t / one_minus;
            let jac1 = 2.0 * s / (one_minus * one_minus);
            if !l1.is_finite() || -PI * p.regulator * l1 - damping_term(l1, 0.0, 0.0, l1, p.gamma, p.damping) < -700.0 {
                return (Complex64::new(0.0, 0.0), 0.0);
            }
            let middle_tol = match target {
                Some(t) => Tolerance { abs: 0.3 * t / jac1, rel: NESTED_REL_FLOOR, max_intervals },
                None => Tolerance { abs, rel, max_intervals },
            };
            let middle = integrate(
                |v| {
                    let w = v * v;
                    let l2 = l1 * w * w;
                    let jac2 = 4.0 * w * v * l1;
                    if jac2 == 0.0 {
                        return (Complex64::new(0.0, 0.0), 0.0);
                    }
                    let inner_tol = match target {
                        Some(t) => Tolerance { abs: 0.1 * t / (jac1 * jac2), rel: NESTED_REL_FLOOR, max_intervals },
                        None => Tolerance { abs, rel, max_intervals },
                    };
                    let inner = inner_lambda(l1, l2, p, &inner_tol);
                    evaluations += inner.evaluations;
                    (inner.value * jac2, inner.error * jac2)
                },
                0.0,
                1.0,
                &[if l1 > 1.0 { l1.powf(-0.25) } else { 1.0 }],
                &middle_tol,
            );
            (middle.value * jac1, middle.error * jac1)
        },
        0.0,
        1.0,
        &[std::f64::consts::FRAC_1_SQRT_2],
        &outer_tol,
    );
    outer.evaluations = evaluations;
    outer
}

/// Kernel value in the sign convention of the Monte Carlo estimator: the
/// conjugate of [`k_analytic`] at `r = ε/d` with regulator `2η/d`.
pub fn k_estimator_convention(
    epsilon_over_d: f64,
    gamma: f64,
    eta_over_d: f64,
    damping: Damping,
    quad: &QuadratureSpec,
) -> Result<KernelValue> {
    if !(eta_over_d.is_finite() && eta_over_d >= 0.0) {
        return Err(Error::Parameter(format!("η/d must be ≥ 0, got {eta_over_d}")));
    }
    let p = KernelParams::new(epsilon_over_d, gamma, 2.0 * eta_over_d)?.with_damping(damping);
    let k = k_analytic(&p, quad)?;
    Ok(KernelValue { value: k.value.conj(), ..k })
}

/// Analytic values on an `ε/d × Γ↓/d` grid (row-major, `ε` outermost), in the
/// estimator convention.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticGrid {
    pub epsilon_over_d: Vec<f64>,
    pub gamma_over_d: Vec<f64>,
    pub eta_over_d: f64,
    pub damping: Damping,
    pub quadrature: QuadratureSpec,
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    /// `false` where the quadrature missed its tolerance; the value is then
    /// the partial result.
    pub converged: Vec<bool>,
}

impl AnalyticGrid {
    pub fn index(&self, eps: usize, gamma: usize) -> usize {
        eps * self.gamma_over_d.len() + gamma
    }

    pub fn value(&self, eps: usize, gamma: usize) -> Complex64 {
        self.values[self.index(eps, gamma)]
    }
}

/// Evaluates every grid point. Points whose quadrature does not converge are
/// kept with their partial value and flagged; other errors abort.
pub fn analytic_grid(
    epsilon_over_d: &[f64],
    gamma_over_d: &[f64],
    eta_over_d: f64,
    damping: Damping,
    quad: &QuadratureSpec,
) -> Result<AnalyticGrid> {
    let cells: Vec<(f64, f64)> = epsilon_over_d
        .iter()
        .flat_map(|&e| gamma_over_d.iter().map(move |&g| (e, g)))
        .collect();
    let eval = |&(e, g): &(f64, f64)| match k_estimator_convention(e, g, eta_over_d, damping, quad) {
        Ok(k) => Ok((k.value, k.error, true)),
        Err(Error::NoConvergence { value, error, .. }) => Ok((value.conj(), error, false)),
        Err(other) => Err(other),
    };
    #[cfg(feature = "parallel")]
    let results: Result<Vec<_>> = {
        use rayon::prelude::*;
        cells.par_iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Result<Vec<_>> = cells.iter().map(eval).collect();
    let results = results?;
    Ok(AnalyticGrid {
        epsilon_over_d: epsilon_over_d.to_vec(),
        gamma_over_d: gamma_over_d.to_vec(),
        eta_over_d,
        damping,
        quadrature: *quad,
        values: results.iter().map(|r| r.0).collect(),
        errors: results.iter().map(|r| r.1).collect(),
        converged: results.iter().map(|r| r.2).collect(),
    })
}

/// One complex data point for a scale fit: measured value, its standard error
/// (zero for exact data) and the model value it is compared with.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitPoint {
    pub measured: Complex64,
    pub sigma: f64,
    pub model: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// Real constant `C` minimizing `Σ |C·model − measured|² / σ²`.
    pub constant: f64,
    /// Standard error of `C`, inflated by `sqrt(χ²/dof)` when that exceeds one.
    pub error: f64,
    pub chi2_per_dof: f64,
    pub points: usize,
    /// Whether the fit used unit weights (no point carried `σ > 0`).
    pub unweighted: bool,
}

/// Weighted least-squares fit of a real scale. If no point carries `σ > 0`
/// the fit is unweighted.
pub fn fit_scale(points: &[FitPoint]) -> Result<Calibration> {
    if points.is_empty() {
        return Err(Error::IllConditioned("no points to calibrate against".into()));
    }
    let weighted = points.iter().any(|p| p.sigma > 0.0);
    let used: Vec<&FitPoint> = points.iter().filter(|p| !weighted || p.sigma > 0.0).collect();
    // Each complex point contributes two real residuals with variance σ²/2.
    let weight = |p: &FitPoint| if weighted { 2.0 / (p.sigma * p.sigma) } else { 1.0 };
    let sxx: f64 = used.iter().map(|p| weight(p) * p.model.norm_sqr()).sum();
    let sxy: f64 = used.iter().map(|p| weight(p) * (p.model.conj() * p.measured).re).sum();
    let syy: f64 = used.iter().map(|p| weight(p) * p.measured.norm_sqr()).sum();
    if !(sxx.is_finite() && sxx > 1e-300) || sxx <= 1e-24 * syy {
        return Err(Error::IllConditioned(format!(
            "model values are too small to fix the scale (Σw|model|² = {sxx:.3e})"
        )));
    }
    let constant = sxy / sxx;
    let chi2: f64 = used.iter().map(|p| weight(p) * (p.model * constant - p.measured).norm_sqr()).sum();
    let dof = (2 * used.len()).saturating_sub(1).max(1);
    let chi2_per_dof = chi2 / dof as f64;
    let base_error = if weighted { (1.0 / sxx).sqrt() } else { (chi2_per_dof / sxx).sqrt() };
    let error = if weighted { base_error * chi2_per_dof.max(1.0).sqrt() } else { base_error };
    Ok(Calibration { constant, error, chi2_per_dof, points: used.len(), unweighted: !weighted })
}

/// Fits the overall constant against a Monte Carlo grid, using the points at
/// `gamma` only when given. The analytic side is evaluated at the grid's own
/// `η`, so both sides carry the same smoothing.
pub fn calibrate_constant(
    reference: &CorrelatorGrid,
    gamma: Option<f64>,
    damping: Damping,
    quad: &QuadratureSpec,
) -> Result<Calibration> {
    reference.validate()?;
    let columns: Vec<usize> = (0..reference.gamma_over_d.len())
        .filter(|&g| gamma.is_none_or(|want| (reference.gamma_over_d[g] - want).abs() < 1e-12))
        .collect();
    if columns.is_empty() {
        return Err(Error::Structure(format!("reference grid has no Γ↓/d = {gamma:?} column")));
    }
    let mut points = Vec::new();
    for (e, &r) in reference.epsilon_over_d.iter().enumerate() {
        for &g in &columns {
            let k = k_estimator_convention(r, reference.gamma_over_d[g], reference.meta.eta_over_d, damping, quad)?;
            points.push(FitPoint { measured: reference.value(e, g), sigma: reference.error(e, g), model: k.value });
        }
    }
    fit_scale(&points)
}
