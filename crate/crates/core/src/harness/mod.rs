//! Batch runs: configuration, persistence and the comparison report.
//!
//! Each `run_*` function reads a [`RunConfig`], writes its results into
//! `run.out` (CSV plus a JSON sidecar echoing the effective configuration)
//! and returns the written paths with a short human-readable summary.

pub mod compare;
pub mod config;
pub mod output;
pub mod plot;
pub mod symbreak;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::correlator::{estimate_k, map_indices};
use crate::error::{Error, Result};
use crate::kernel::analytic_grid;
use crate::parametric::ParametricPair;
use crate::rmt::{sample_with, stream_rng, GAUSSIAN_METHOD, RNG_NAME};
use crate::spectral::eigenvalues;

pub use compare::{compare_tables, CompareOptions, ComparisonReport};
pub use config::{Grid, Overrides, RunConfig};
pub use output::{GridTable, Metadata, TableKind};
pub use symbreak::{symbreak_report, SymbreakReport};

/// Number of random saddle-point surrogates in the symbreak report.
pub const SYMBREAK_SURROGATES: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn metadata(kind: &str, cfg: &RunConfig, eta_over_d: Option<f64>, details: serde_json::Value) -> Metadata {
    Metadata {
        kind: kind.into(),
        config: serde_json::to_value(cfg).expect("config serializes"),
        seed: cfg.run.seed,
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: output::timestamp(),
        host: output::host(),
        rng: RNG_NAME.into(),
        gaussian: GAUSSIAN_METHOD.into(),
        eta_over_d,
        details,
    }
}

fn write_with_sidecar(dir: &Path, name: &str, csv: &[u8], meta: &Metadata) -> Result<Vec<PathBuf>> {
    let path = dir.join(format!("{name}.csv"));
    output::write_atomic(&path, csv)?;
    let side = output::sidecar_path(&path);
    output::write_atomic(&side, &meta.to_bytes())?;
    Ok(vec![path, side])
}

fn write_plot(dir: &Path, name: &str, title: &str, table: &GridTable) -> Result<PathBuf> {
    let path = dir.join(format!("{name}.svg"));
    let svg = plot::render(title, "ε/d", "k·d²", &plot::table_series(table));
    output::write_atomic(&path, svg.as_bytes())?;
    Ok(path)
}

/// Spectra of `H(X₀)` for each realization, one row per realization.
pub fn run_sample(cfg: &RunConfig) -> Result<RunOutput> {
    let corr = cfg.correlator_config()?;
    let spec = corr.spec;
    let rows = map_indices(&corr, corr.samples, |i| {
        let mut rng = stream_rng(corr.seed, i as u64);
        let h1 = sample_with(&spec, &mut rng);
        let h2 = sample_with(&spec, &mut rng);
        let h = ParametricPair::new(h1, h2, corr.x0, corr.x0)?.h_at_x();
        let levels = eigenvalues(&h)?.eigenvalues;
        let mut row = vec![corr.seed.to_string(), i.to_string(), corr.x0.to_string()];
        row.extend(levels.iter().map(|e| e.to_string()));
        Ok(row)
    })?;
    let names: Vec<String> = (0..spec.n()).map(|k| format!("e{k}")).collect();
    let mut header = vec!["seed", "realization", "x"];
    header.extend(names.iter().map(String::as_str));
    let csv = output::csv_bytes("spectra", &header, rows)?;
    let meta = metadata("spectra", cfg, None, json!({ "spec": spec, "realizations": corr.samples }));
    let files = write_with_sidecar(&cfg.run.out, "spectra", &csv, &meta)?;
    Ok(RunOutput {
        summary: format!("{} spectra of {} {}×{} matrices (seed {})\n", corr.samples, spec.class(), spec.n(), spec.n(), corr.seed),
        files,
    })
}

pub fn run_correlate(cfg: &RunConfig) -> Result<RunOutput> {
    let corr = cfg.correlator_config()?;
    let grid = estimate_k(&corr)?;
    let table = GridTable::from_correlator(&grid);
    let meta = metadata("correlator", cfg, Some(corr.eta_over_d), json!({ "grid": grid.meta, "delta_x": grid.delta_x }));
    let mut files = write_with_sidecar(&cfg.run.out, "correlator", &table.to_csv()?, &meta)?;
    if cfg.run.plot {
        files.push(write_plot(&cfg.run.out, "correlator", "Monte Carlo k·d²", &table)?);
    }
    let mut summary = format!(
        "{} × {} grid, {} samples, {} centre energies, mode {}\n",
        grid.epsilon_over_d.len(),
        grid.gamma_over_d.len(),
        corr.samples,
        grid.meta.energy_points,
        corr.mode
    );
    for w in &grid.meta.warnings {
        let _ = writeln!(summary, "warning: {w}");
    }
    Ok(RunOutput { files, summary })
}

pub fn run_analytic(cfg: &RunConfig) -> Result<RunOutput> {
    let eps = cfg.correlator.epsilon_grid.values()?;
    let gammas = cfg.correlator.gamma_grid.values()?;
    let eta = 0.5 * cfg.regulator();
    let quad = cfg.quadrature();
    let grid = analytic_grid(&eps, &gammas, eta, cfg.analytic.damping, &quad)?;
    let failures: Vec<_> = grid
        .converged
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| json!({ "epsilon_over_d": eps[i / gammas.len()], "gamma_over_d": gammas[i % gammas.len()] }))
        .collect();
    let mut details = json!({
        "damping": grid.damping,
        "regulator": cfg.regulator(),
        "quadrature": quad,
        "unconverged": failures,
        "convention": "conjugate of the kernel at r = ε/d with regulator 2η/d",
    });
    let mut summary = format!(
        "{} × {} analytic grid, damping {:?}, {} unconverged point(s)\n",
        eps.len(),
        gammas.len(),
        grid.damping,
        failures.len()
    );
    if cfg.analytic.conjugation_check {
        let neg: Vec<f64> = eps.iter().map(|e| -e).collect();
        let mirror = analytic_grid(&neg, &gammas, eta, cfg.analytic.damping, &quad)?;
        let mut worst: f64 = 0.0;
        for i in 0..grid.values.len() {
            let dev = (grid.values[i] - mirror.values[i].conj()).norm();
            worst = worst.max(dev / (grid.errors[i] + mirror.errors[i]).max(f64::MIN_POSITIVE));
        }
        let passed = worst <= 1.0;
        details["conjugation_check"] = json!({ "max_deviation_over_error": worst, "passed": passed });
        let _ = writeln!(summary, "conjugation check: max |k(−r) − conj k(r)| / error = {worst:.3e} ({})", if passed { "pass" } else { "FAIL" });
    }
    let table = GridTable::from_analytic(&grid);
    let meta = metadata("analytic", cfg, Some(eta), details);
    let mut files = write_with_sidecar(&cfg.run.out, "analytic", &table.to_csv()?, &meta)?;
    if cfg.run.plot {
        files.push(write_plot(&cfg.run.out, "analytic", "Analytic k (unnormalized)", &table)?);
    }
    Ok(RunOutput { files, summary })
}

/// Reads a grid table and its sidecar.
pub fn read_table(path: &Path) -> Result<(GridTable, Metadata)> {
    let table = GridTable::read(path)?;
    let meta = Metadata::read(&output::sidecar_path(path))?;
    Ok((table, meta))
}

/// Compares a measured table against a model table and writes
/// `compare.json` and `compare.txt`. Both sidecars must record the same
/// smoothing `η/d`.
pub fn run_compare(cfg: &RunConfig, measured: &Path, model: &Path) -> Result<(RunOutput, ComparisonReport)> {
    let (mt, mm) = read_table(measured)?;
    let (at, am) = read_table(model)?;
    match (mm.eta_over_d, am.eta_over_d) {
        (Some(a), Some(b)) if (a - b).abs() <= 1e-12 * a.abs().max(1.0) => {}
        (a, b) => {
            return Err(Error::Config(format!(
                "smoothing mismatch: {} records η/d = {a:?}, {} records η/d = {b:?}",
                measured.display(),
                model.display()
            )))
        }
    }
    let opts = CompareOptions { calibration_gamma: cfg.compare.calibration_gamma, coverage: cfg.compare.coverage };
    let report = compare_tables(&mt, &at, &opts)?;
    let dir = &cfg.run.out;
    let text = report.to_text();
    let json_path = dir.join("compare.json");
    let mut body = serde_json::to_value(&report).expect("report serializes");
    body["measured"] = json!(measured.display().to_string());
    body["model"] = json!(model.display().to_string());
    body["eta_over_d"] = json!(mm.eta_over_d);
    body["metadata"] = serde_json::to_value(metadata("compare", cfg, mm.eta_over_d, json!({}))).expect("metadata serializes");
    let mut bytes = serde_json::to_vec_pretty(&body).expect("report serializes");
    bytes.push(b'\n');
    output::write_atomic(&json_path, &bytes)?;
    let txt_path = dir.join("compare.txt");
    output::write_atomic(&txt_path, text.as_bytes())?;
    let mut files = vec![json_path, txt_path];
    if cfg.run.plot {
        let mut series = plot::table_series(&mt);
        let mut scaled = at.clone();
        for r in &mut scaled.rows {
            r.value *= report.calibration.constant;
        }
        for mut s in plot::table_series(&scaled) {
            s.label = format!("C·model {}", s.label);
            s.colour += 3;
            series.push(s);
        }
        let path = dir.join("compare.svg");
        output::write_atomic(&path, plot::render("measured vs calibrated model", "ε/d", "k·d²", &series).as_bytes())?;
        files.push(path);
    }
    Ok((RunOutput { files, summary: text }, report))
}

pub fn run_symbreak(cfg: &RunConfig) -> Result<(RunOutput, SymbreakReport)> {
    let report = symbreak_report(cfg.run.seed, SYMBREAK_SURROGATES)?;
    let path = cfg.run.out.join("symbreak.json");
    let mut body = serde_json::to_value(&report).expect("report serializes");
    body["metadata"] = serde_json::to_value(metadata("symbreak", cfg, None, json!({}))).expect("metadata serializes");
    let mut bytes = serde_json::to_vec_pretty(&body).expect("report serializes");
    bytes.push(b'\n');
    output::write_atomic(&path, &bytes)?;
    let mut summary = String::new();
    for c in &report.catalog {
        let diag: Vec<String> = c.diagonal.iter().map(|x| format!("{x}")).collect();
        let _ = writeln!(summary, "T[{}] = diag({})  S(σ_D⁰, T) = {}", c.case, diag.join(", "), c.s_diagonal_saddle);
    }
    let _ = writeln!(
        summary,
        "symmetry-breaking identity: max relative residual {:.3e} over {} surrogates",
        report.max_identity_residual, report.surrogates
    );
    let _ = writeln!(summary, "commutator-square identity: max relative violation {:.3e}", report.max_commutator_identity);
    let _ = writeln!(summary, "saddle equation: max residual {:.3e}", report.max_saddle_residual);
    let _ = writeln!(summary, "S(iii) vs S(iv): min relative separation {:.3e}", report.min_iii_iv_separation);
    let _ = writeln!(summary, "{}", if report.passed { "all checks pass" } else { "CHECKS FAILED" });
    Ok((RunOutput { files: vec![path], summary }, report))
}
