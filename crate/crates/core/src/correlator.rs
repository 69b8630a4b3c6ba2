//! Monte Carlo estimate of the connected parametric correlator
//!
//! ```text
//! k_c(ε, δx) = <g⁺(E + ε/2; X) g⁻(E − ε/2; X')> − <g⁺(E + ε/2; X)><g⁻(E − ε/2; X')>
//! ```
//!
//! with `g± = tr (E ± iη − H)⁻¹`, `X − X' = δx` and `X₀ = (X + X')/2`. The
//! brackets are ensemble averages; the subtraction is taken at each centre
//! energy `E`, and the result is then averaged over a grid of `E` in a window
//! around the band centre. Values are reported as `k_c·d²`.
//!
//! Realization `i` draws `H₁` and then `H₂` from stream `i` of the seed, so the
//! same matrices are reused across the whole `δx` grid and across modes.
//! Error bars come from a bootstrap over realizations.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parametric::{delta_x_for_gamma, gamma_over_d, ParametricPair};
use crate::rmt::{mean_level_spacing, sample_with, stream_rng, EnsembleSpec, Hamiltonian, GAUSSIAN_METHOD, RNG_NAME};
use crate::spectral::{eigenvalues, resolvent_trace};

/// Stream reserved for bootstrap resampling; realizations use streams
/// `0..samples`.
pub const BOOTSTRAP_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `H(X)`, `H(X')` from the full trigonometric family.
    #[default]
    Exact,
    /// `H₀ ± (δx/2)·V`.
    Linearized,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "linearized" => Ok(Mode::Linearized),
            other => Err(Error::Config(format!("unknown mode {other:?} (expected exact or linearized)"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Linearized => "linearized",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorConfig {
    pub spec: EnsembleSpec,
    /// `η/d`
    pub eta_over_d: f64,
    /// Half-width of the centre-energy window in units of `2λ`.
    pub window_fraction: f64,
    /// Explicit window `[lo, hi]` in units of `2λ`; overrides
    /// `window_fraction`.
    pub window: Option<[f64; 2]>,
    /// Step of the centre-energy grid in units of `d`.
    pub energy_step_over_d: f64,
    pub epsilon_grid: Vec<f64>,
    pub gamma_grid: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub mode: Mode,
    pub x0: f64,
    pub bootstrap: usize,
    /// Fixed-order reductions, so output is bit-identical for any thread count.
    pub reproducible: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl CorrelatorConfig {
    pub fn new(spec: EnsembleSpec) -> Self {
        CorrelatorConfig {
            spec,
            eta_over_d: 0.5,
            window_fraction: 0.2,
            window: None,
            energy_step_over_d: 1.0,
            epsilon_grid: vec![0.0],
            gamma_grid: vec![0.0],
            samples: 500,
            seed: 0,
            mode: Mode::Exact,
            x0: 0.0,
            bootstrap: 200,
            reproducible: true,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::Parameter(format!("need at least 2 samples, got {}", self.samples)));
        }
        if !(self.eta_over_d.is_finite() && self.eta_over_d > 0.0) {
            return Err(Error::Parameter(format!("η/d must be positive, got {}", self.eta_over_d)));
        }
        if !(self.energy_step_over_d.is_finite() && self.energy_step_over_d > 0.0) {
            return Err(Error::Parameter("energy step must be positive".into()));
        }
        if !(self.window_fraction > 0.0 && self.window_fraction <= 1.0) {
            return Err(Error::Parameter(format!(
                "window fraction must lie in (0, 1], got {}",
                self.window_fraction
            )));
        }
        if let Some([lo, hi]) = self.window {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::Parameter(format!("window [{lo}, {hi}] is not an interval")));
            }
        }
        if self.epsilon_grid.is_empty() || self.epsilon_grid.iter().any(|e| !e.is_finite()) {
            return Err(Error::Parameter("ε grid must be non-empty and finite".into()));
        }
        if self.gamma_grid.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::Parameter("Γ↓/d grid must be finite and ≥ 0".into()));
        }
        if !self.x0.is_finite() {
            return Err(Error::Parameter("X₀ must be finite".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Parameter("thread count must be positive".into()));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        mean_level_spacing(&self.spec)
    }

    pub fn eta(&self) -> f64 {
        self.eta_over_d * self.spacing()
    }

    /// Window `[lo, hi]` in energy units.
    pub fn window_bounds(&self) -> [f64; 2] {
        let scale = 2.0 * self.spec.lambda();
        match self.window {
            Some([lo, hi]) => [lo * scale, hi * scale],
            None => [-self.window_fraction * scale, self.window_fraction * scale],
        }
    }

    /// Centre energies: the midpoints of the `⌊(hi − lo)/step⌋` cells that fit
    /// in the window, centred in it.
    pub fn energy_grid(&self) -> Result<Vec<f64>> {
        let [lo, hi] = self.window_bounds();
        let step = self.energy_step_over_d * self.spacing();
        let count = ((hi - lo) / step).floor() as usize;
        if count == 0 {
            return Err(Error::EmptyWindow(format!(
                "window [{lo:.4e}, {hi:.4e}] is narrower than one energy step {step:.4e}"
            )));
        }
        let start = 0.5 * (lo + hi) - 0.5 * (count as f64 - 1.0) * step;
        Ok((0..count).map(|j| start + j as f64 * step).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorMeta {
    pub spec: EnsembleSpec,
    pub eta_over_d: f64,
    pub window: [f64; 2],
    pub energy_points: usize,
    pub samples: usize,
    pub seed: u64,
    pub mode: Mode,
    pub x0: f64,
    pub bootstrap: usize,
    pub rng: String,
    pub gaussian: String,
    pub warnings: Vec<String>,
}

/// Estimates on an `ε × γ` grid, stored row-major with `ε` outermost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorGrid {
    pub epsilon_over_d: Vec<f64>,
    pub gamma_over_d: Vec<f64>,
    pub delta_x: Vec<f64>,
    /// `k_c·d²`
    pub values: Vec<Complex64>,
    pub std_err: Vec<f64>,
    pub meta: CorrelatorMeta,
}

impl CorrelatorGrid {
    pub fn index(&self, eps: usize, gamma: usize) -> usize {
        eps * self.gamma_over_d.len() + gamma
    }

    pub fn value(&self, eps: usize, gamma: usize) -> Complex64 {
        self.values[self.index(eps, gamma)]
    }

    pub fn error(&self, eps: usize, gamma: usize) -> f64 {
        self.std_err[self.index(eps, gamma)]
    }

    pub fn validate(&self) -> Result<()> {
        let cells = self.epsilon_over_d.len() * self.gamma_over_d.len();
        if self.values.len() != cells || self.std_err.len() != cells || self.delta_x.len() != self.gamma_over_d.len() {
            return Err(Error::Structure(format!(
                "grid {}×{} holds {} values and {} errors",
                self.epsilon_over_d.len(),
                self.gamma_over_d.len(),
                self.values.len(),
                self.std_err.len()
            )));
        }
        Ok(())
    }
}

/// Per-realization sums: for each offset, `ε` and centre energy the triple
/// `(g⁺g⁻, g⁺, g⁻)`, all scaled by `d`.
struct Records {
    offsets: usize,
    eps: usize,
    energies: usize,
    data: Vec<Vec<Complex64>>,
}

impl Records {
    fn cells(&self) -> usize {
        self.offsets * self.eps * self.energies
    }

    /// Connected estimate for each `(offset, ε)` from realization weights
    /// `counts` (how often each realization is drawn), output `[ε][offset]`.
    fn connected(&self, counts: Option<&[u32]>) -> Vec<Complex64> {
        let n: f64 = match counts {
            Some(c) => c.iter().map(|&x| x as f64).sum(),
            None => self.data.len() as f64,
        };
        let mut sums = vec![Complex64::new(0.0, 0.0); 3 * self.cells()];
        for (i, rec) in self.data.iter().enumerate() {
            let w = counts.map_or(1.0, |c| c[i] as f64);
            if w == 0.0 {
                continue;
            }
            for (s, v) in sums.iter_mut().zip(rec) {
                *s += v * w;
            }
        }
        self.finish(&sums, n)
    }

    fn finish(&self, sums: &[Complex64], n: f64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.offsets * self.eps];
        for o in 0..self.offsets {
            for e in 0..self.eps {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..self.energies {
                    let base = 3 * ((o * self.eps + e) * self.energies + j);
                    let prod = sums[base] / n;
                    let plus = sums[base + 1] / n;
                    let minus = sums[base + 2] / n;
                    acc += prod - plus * minus;
                }
                out[e * self.offsets + o] = acc / self.energies as f64;
            }
        }
        out
    }

    #[cfg(feature = "parallel")]
    fn connected_unordered(&self) -> Vec<Complex64> {
        use rayon::prelude::*;
        let len = 3 * self.cells();
        let sums = self
            .data
            .par_iter()
            .fold(
                || vec![Complex64::new(0.0, 0.0); len],
                |mut acc, rec| {
                    for (s, v) in acc.iter_mut().zip(rec) {
                        *s += v;
                    }
                    acc
                },
            )
            .reduce(
                || vec![Complex64::new(0.0, 0.0); len],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        self.finish(&sums, self.data.len() as f64)
    }
}

fn pair_spectra(h1: &Hamiltonian, h2: &Hamiltonian, mode: Mode, x0: f64, delta_x: f64) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    let pair = ParametricPair::centred(h1.clone(), h2.clone(), x0, delta_x)?;
    let (a, b) = match mode {
        Mode::Exact => (pair.h_at_x(), pair.h_at_x_prime()),
        Mode::Linearized => {
            let lin = pair.linearize();
            (lin.approx_at_x(), lin.approx_at_x_prime())
        }
    };
    let ea = eigenvalues(&a)?.eigenvalues;
    if delta_x == 0.0 {
        return Ok((ea, None));
    }
    Ok((ea, Some(eigenvalues(&b)?.eigenvalues)))
}

fn push_cells(out: &mut Vec<Complex64>, a: &[f64], b: &[f64], eps: &[f64], energies: &[f64], eta: f64, d: f64) {
    for &e in eps {
        for &centre in energies {
            let plus = resolvent_trace(a, Complex64::new(centre + 0.5 * e, eta)) * d;
            let minus = resolvent_trace(b, Complex64::new(centre - 0.5 * e, -eta)) * d;
            out.push(plus * minus);
            out.push(plus);
            out.push(minus);
        }
    }
}

fn realization(cfg: &CorrelatorConfig, modes: &[Mode], offsets: &[f64], eps: &[f64], energies: &[f64], index: usize) -> Result<Vec<Vec<Complex64>>> {
    let mut rng = stream_rng(cfg.seed, index as u64);
    let h1 = sample_with(&cfg.spec, &mut rng);
    let h2 = sample_with(&cfg.spec, &mut rng);
    let d = cfg.spacing();
    let eta = cfg.eta();
    let mut per_mode = Vec::with_capacity(modes.len());
    for &mode in modes {
        let mut out = Vec::with_capacity(3 * offsets.len() * eps.len() * energies.len());
        for &dx in offsets {
            let (a, b) = pair_spectra(&h1, &h2, mode, cfg.x0, dx)?;
            push_cells(&mut out, &a, b.as_deref().unwrap_or(&a), eps, energies, eta, d);
        }
        per_mode.push(out);
    }
    Ok(per_mode)
}

pub(crate) fn map_indices<T, F>(cfg: &CorrelatorConfig, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || (0..count).into_par_iter().map(&f).collect::<Result<Vec<T>>>();
        match cfg.threads {
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {k} worker threads: {e}")))?
                .install(run),
            None => run(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = cfg;
        (0..count).map(f).collect()
    }
}

/// Realization multiplicities for each bootstrap replicate.
fn bootstrap_counts(seed: u64, samples: usize, replicates: usize) -> Vec<Vec<u32>> {
    let mut rng = stream_rng(seed, BOOTSTRAP_STREAM);
    (0..replicates)
        .map(|_| {
            let mut counts = vec![0u32; samples];
            for _ in 0..samples {
                counts[rng.random_range(0..samples)] += 1;
            }
            counts
        })
        .collect()
}

fn spread(replicates: &[Vec<Complex64>], cell: usize) -> f64 {
    let n = replicates.len();
    if n < 2 {
        return 0.0;
    }
    let mean = replicates.iter().map(|r| r[cell]).sum::<Complex64>() / n as f64;
    let var: f64 = replicates.iter().map(|r| (r[cell] - mean).norm_sqr()).sum::<f64>() / (n - 1) as f64;
    var.sqrt()
}

struct Sampled {
    records: Vec<Records>,
    energies: usize,
    window: [f64; 2],
}

fn run(cfg: &CorrelatorConfig, modes: &[Mode], offsets: &[f64]) -> Result<Sampled> {
    cfg.validate()?;
    if offsets.is_empty() || offsets.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parameter("offset grid must be non-empty and finite".into()));
    }
    let energies = cfg.energy_grid()?;
    let d = cfg.spacing();
    let eps: Vec<f64> = cfg.epsilon_grid.iter().map(|r| r * d).collect();
    let per_realization = map_indices(cfg, cfg.samples, |i| realization(cfg, modes, offsets, &eps, &energies, i))?;
    let mut records: Vec<Records> = modes
        .iter()
        .map(|_| Records {
            offsets: offsets.len(),
            eps: eps.len(),
            energies: energies.len(),
            data: Vec::with_capacity(cfg.samples),
        })
        .collect();
    for per_mode in per_realization {
        for (r, data) in records.iter_mut().zip(per_mode) {
            r.data.push(data);
        }
    }
    Ok(Sampled { records, energies: energies.len(), window: cfg.window_bounds() })
}

fn central(cfg: &CorrelatorConfig, records: &Records) -> Vec<Complex64> {
    #[cfg(feature = "parallel")]
    if !cfg.reproducible {
        return records.connected_unordered();
    }
    let _ = cfg;
    records.connected(None)
}

fn replicates(cfg: &CorrelatorConfig, records: &Records, counts: &[Vec<u32>]) -> Result<Vec<Vec<Complex64>>> {
    map_indices(cfg, counts.len(), |b| Ok(records.connected(Some(&counts[b]))))
}

fn meta(cfg: &CorrelatorConfig, sampled: &Sampled, mode: Mode, gammas: &[f64]) -> CorrelatorMeta {
    let mut warnings = Vec::new();
    for &g in gammas {
        if g > 10.0 {
            warnings.push(format!(
                "Γ↓/d = {g} needs (X − X')² = {:.3e}; beyond O(10) the first-order expansion in X − X' is no longer controlled at N = {}",
                std::f64::consts::PI * g / (2.0 * cfg.spec.n() as f64),
                cfg.spec.n()
            ));
        }
    }
    CorrelatorMeta {
        spec: cfg.spec,
        eta_over_d: cfg.eta_over_d,
        window: sampled.window,
        energy_points: sampled.energies,
        samples: cfg.samples,
        seed: cfg.seed,
        mode,
        x0: cfg.x0,
        bootstrap: cfg.bootstrap,
        rng: RNG_NAME.into(),
        gaussian: GAUSSIAN_METHOD.into(),
        warnings,
    }
}

/// Estimates `k_c·d²` at explicit offsets `δx = X − X'`.
pub fn estimate_at_offsets(cfg: &CorrelatorConfig, offsets: &[f64]) -> Result<CorrelatorGrid> {
    let sampled = run(cfg, &[cfg.mode], offsets)?;
    let records = &sampled.records[0];
    let values = central(cfg, records);
    let counts = bootstrap_counts(cfg.seed, cfg.samples, cfg.bootstrap);
    let reps = replicates(cfg, records, &counts)?;
    let std_err = (0..values.len()).map(|c| spread(&reps, c)).collect();
    let gammas: Vec<f64> = offsets.iter().map(|&dx| gamma_over_d(dx, &cfg.spec)).collect();
    Ok(CorrelatorGrid {
        epsilon_over_d: cfg.epsilon_grid.clone(),
        meta: meta(cfg, &sampled, cfg.mode, &gammas),
        gamma_over_d: gammas,
        delta_x: offsets.to_vec(),
        values,
        std_err,
    })
}

/// Estimates `k_c·d²` on the configured `ε/d × Γ↓/d` grid, with
/// `δx = sqrt(πγ/(2N))` for each `γ`.
pub fn estimate_k(cfg: &CorrelatorConfig) -> Result<CorrelatorGrid> {
    if cfg.gamma_grid.is_empty() {
        return Err(Error::Parameter("Γ↓/d grid is empty".into()));
    }
    let offsets = cfg
        .gamma_grid
        .iter()
        .map(|&g| delta_x_for_gamma(g, &cfg.spec))
        .collect::<Result<Vec<_>>>()?;
    let mut grid = estimate_at_offsets(cfg, &offsets)?;
    grid.gamma_over_d = cfg.gamma_grid.clone();
    Ok(grid)
}

/// Ordinary two-point estimate `<g⁺(E + ε/2) g⁻(E − ε/2)>` − disconnected
/// part for a single matrix per realization (the first draw of each stream).
/// Returned as a grid with the single column `Γ↓/d = 0`.
pub fn two_point(cfg: &CorrelatorConfig) -> Result<CorrelatorGrid> {
    cfg.validate()?;
    let energies = cfg.energy_grid()?;
    let d = cfg.spacing();
    let eta = cfg.eta();
    let eps: Vec<f64> = cfg.epsilon_grid.iter().map(|r| r * d).collect();
    let data = map_indices(cfg, cfg.samples, |i| {
        let mut rng = stream_rng(cfg.seed, i as u64);
        let levels = eigenvalues(&sample_with(&cfg.spec, &mut rng))?.eigenvalues;
        let mut out = Vec::with_capacity(3 * eps.len() * energies.len());
        push_cells(&mut out, &levels, &levels, &eps, &energies, eta, d);
        Ok(out)
    })?;
    let records = Records { offsets: 1, eps: eps.len(), energies: energies.len(), data };
    let values = central(cfg, &records);
    let counts = bootstrap_counts(cfg.seed, cfg.samples, cfg.bootstrap);
    let reps = replicates(cfg, &records, &counts)?;
    let std_err = (0..values.len()).map(|c| spread(&reps, c)).collect();
    let sampled = Sampled { records: Vec::new(), energies: energies.len(), window: cfg.window_bounds() };
    Ok(CorrelatorGrid {
        epsilon_over_d: cfg.epsilon_grid.clone(),
        gamma_over_d: vec![0.0],
        delta_x: vec![0.0],
        values,
        std_err,
        meta: meta(cfg, &sampled, cfg.mode, &[0.0]),
    })
}

/// Exact-family and linearized estimates from the same matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearizationComparison {
    pub exact: CorrelatorGrid,
    pub linearized: CorrelatorGrid,
    /// `exact − linearized` per cell.
    pub difference: Vec<Complex64>,
    /// Bootstrap error of the difference, resampling both modes together.
    pub difference_err: Vec<f64>,
}

impl LinearizationComparison {
    /// Largest `|difference| / difference_err` over cells with a nonzero error.
    pub fn max_pull(&self) -> f64 {
        self.difference
            .iter()
            .zip(&self.difference_err)
            .filter(|(_, &s)| s > 0.0)
            .map(|(d, s)| d.norm() / s)
            .fold(0.0, f64::max)
    }

    /// `sqrt(Σ|difference|² / Σ|exact|²)`.
    pub fn relative_discrepancy(&self) -> f64 {
        let num: f64 = self.difference.iter().map(|d| d.norm_sqr()).sum();
        let den: f64 = self.exact.values.iter().map(|d| d.norm_sqr()).sum();
        (num / den).sqrt()
    }
}

/// Runs both modes on paired matrices and bootstrap indices.
pub fn compare_exact_vs_linearized(cfg: &CorrelatorConfig) -> Result<LinearizationComparison> {
    if cfg.gamma_grid.is_empty() {
        return Err(Error::Parameter("Γ↓/d grid is empty".into()));
    }
    let offsets = cfg
        .gamma_grid
        .iter()
        .map(|&g| delta_x_for_gamma(g, &cfg.spec))
        .collect::<Result<Vec<_>>>()?;
    let modes = [Mode::Exact, Mode::Linearized];
    let sampled = run(cfg, &modes, &offsets)?;
    let counts = bootstrap_counts(cfg.seed, cfg.samples, cfg.bootstrap);
    let mut grids = Vec::new();
    let mut reps = Vec::new();
    for (records, &mode) in sampled.records.iter().zip(&modes) {
        let values = central(cfg, records);
        let r = replicates(cfg, records, &counts)?;
        let std_err = (0..values.len()).map(|c| spread(&r, c)).collect();
        grids.push(CorrelatorGrid {
            epsilon_over_d: cfg.epsilon_grid.clone(),
            gamma_over_d: cfg.gamma_grid.clone(),
            delta_x: offsets.clone(),
            values,
            std_err,
            meta: meta(cfg, &sampled, mode, &cfg.gamma_grid),
        });
        reps.push(r);
    }
    let linearized = grids.pop().expect("two modes");
    let exact = grids.pop().expect("two modes");
    let difference: Vec<Complex64> = exact.values.iter().zip(&linearized.values).map(|(a, b)| a - b).collect();
    let diff_reps: Vec<Vec<Complex64>> = reps[0]
        .iter()
        .zip(&reps[1])
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
        .collect();
    let difference_err = (0..difference.len()).map(|c| spread(&diff_reps, c)).collect();
    Ok(LinearizationComparison { exact, linearized, difference, difference_err })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub gamma_over_d: f64,
    pub magnitude: f64,
    /// Bootstrap error of the magnitude.
    pub std_err: f64,
}

/// `|k_c·d²|` at fixed `ε/d` along the configured `Γ↓/d` grid.
pub fn decorrelation_profile(cfg: &CorrelatorConfig, epsilon_over_d: f64) -> Result<Vec<ProfilePoint>> {
    let cfg = CorrelatorConfig { epsilon_grid: vec![epsilon_over_d], ..cfg.clone() };
    let offsets = cfg
        .gamma_grid
        .iter()
        .map(|&g| delta_x_for_gamma(g, &cfg.spec))
        .collect::<Result<Vec<_>>>()?;
    let sampled = run(&cfg, &[cfg.mode], &offsets)?;
    let records = &sampled.records[0];
    let values = central(&cfg, records);
    let counts = bootstrap_counts(cfg.seed, cfg.samples, cfg.bootstrap);
    let reps = replicates(&cfg, records, &counts)?;
    Ok(cfg
        .gamma_grid
        .iter()
        .enumerate()
        .map(|(g, &gamma)| {
            let mags: Vec<f64> = reps.iter().map(|r| r[g].norm()).collect();
            let mean = mags.iter().sum::<f64>() / mags.len().max(1) as f64;
            let var = mags.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (mags.len().max(2) - 1) as f64;
            ProfilePoint { gamma_over_d: gamma, magnitude: values[g].norm(), std_err: var.sqrt() }
        })
        .collect())
}
