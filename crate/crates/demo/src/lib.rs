//! Browser bindings for the static demo page in `www/`.
//!
//! Every export returns a flat `Float64Array`; the layout is given per
//! function. Errors surface as JavaScript exceptions carrying the message.

use levelcorr::correlator::{estimate_k, CorrelatorConfig};
use levelcorr::kernel::{k_estimator_convention, Damping, QuadratureSpec};
use levelcorr::rmt::{sample, semicircle_count, EnsembleSpec, SymmetryClass};
use levelcorr::spectral::eigenvalues;
use wasm_bindgen::prelude::*;

fn spec(class: &str, n: usize) -> Result<EnsembleSpec, String> {
    let class: SymmetryClass = class.parse().map_err(|e: levelcorr::Error| e.to_string())?;
    EnsembleSpec::new(class, n, 1.0).map_err(|e| e.to_string())
}

fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Level density of `samples` matrices against the semicircle, in units
/// of `E/2λ` over `[-1.2, 1.2]`. Layout: `[centre, empirical, semicircle]`
/// per bin, densities normalized to unit area.
pub fn histogram(class: &str, n: usize, samples: usize, seed: u64, bins: usize) -> Result<Vec<f64>, String> {
    let spec = spec(class, n)?;
    if bins == 0 || samples == 0 {
        return Err("bins and samples must be positive".into());
    }
    let (lo, hi) = (-1.2, 1.2);
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for i in 0..samples {
        let levels = eigenvalues(&sample(&spec, seed.wrapping_add(i as u64))).map_err(|e| e.to_string())?;
        for e in levels.eigenvalues {
            let u = e / 2.0;
            if u >= lo && u < hi {
                counts[((u - lo) / width) as usize] += 1;
            }
        }
    }
    let total = (samples * n) as f64;
    let cdf = |u: f64| u.signum() * 0.5 * semicircle_count(2.0 * u.abs(), &spec) / n as f64;
    let mut out = Vec::with_capacity(3 * bins);
    for (k, &c) in counts.iter().enumerate() {
        let a = lo + k as f64 * width;
        out.push(a + 0.5 * width);
        out.push(c as f64 / (total * width));
        out.push((cdf(a + width) - cdf(a)) / width);
    }
    Ok(out)
}

/// Analytic `k` (up to the calibration constant) along `ε/d`, in the sign
/// convention of the Monte Carlo estimator. Layout: `[ε/d, re, im, error]`
/// per point.
pub fn analytic(gamma: f64, eta_over_d: f64, mapped: bool, r_max: f64, points: usize, rel_tol: f64) -> Result<Vec<f64>, String> {
    let damping = if mapped { Damping::EfetovMapped } else { Damping::Printed };
    let quad = QuadratureSpec { rel_tol, ..QuadratureSpec::default() };
    let mut out = Vec::with_capacity(4 * points);
    for r in linspace(0.0, r_max, points) {
        let (v, e) = match k_estimator_convention(r, gamma, eta_over_d, damping, &quad) {
            Ok(k) => (k.value, k.error),
            Err(levelcorr::Error::NoConvergence { value, error, .. }) => (value.conj(), error),
            Err(e) => return Err(e.to_string()),
        };
        out.extend([r, v.re, v.im, e]);
    }
    Ok(out)
}

/// Monte Carlo `k_c·d²` along `ε/d` for GOE at one `Γ↓/d`. Layout:
/// `[ε/d, re, im, std_err]` per point.
pub fn monte_carlo(n: usize, samples: usize, seed: u64, gamma: f64, eta_over_d: f64, r_max: f64, points: usize) -> Result<Vec<f64>, String> {
    let grid = linspace(0.0, r_max, points);
    let cfg = CorrelatorConfig {
        epsilon_grid: grid.clone(),
        gamma_grid: vec![gamma],
        samples,
        seed,
        eta_over_d,
        bootstrap: 50,
        ..CorrelatorConfig::new(spec("GOE", n)?)
    };
    let k = estimate_k(&cfg).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(4 * points);
    for (i, r) in grid.into_iter().enumerate() {
        let v = k.value(i, 0);
        out.extend([r, v.re, v.im, k.error(i, 0)]);
    }
    Ok(out)
}

#[wasm_bindgen(js_name = semicircleHistogram)]
pub fn semicircle_histogram(class: &str, n: usize, samples: usize, seed: u64, bins: usize) -> Result<Vec<f64>, JsError> {
    histogram(class, n, samples, seed, bins).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = analyticCurve)]
pub fn analytic_curve(gamma: f64, eta_over_d: f64, mapped: bool, r_max: f64, points: usize, rel_tol: f64) -> Result<Vec<f64>, JsError> {
    analytic(gamma, eta_over_d, mapped, r_max, points, rel_tol).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = monteCarloCurve)]
pub fn monte_carlo_curve(n: usize, samples: usize, seed: u64, gamma: f64, eta_over_d: f64, r_max: f64, points: usize) -> Result<Vec<f64>, JsError> {
    monte_carlo(n, samples, seed, gamma, eta_over_d, r_max, points).map_err(|e| JsError::new(&e))
}
