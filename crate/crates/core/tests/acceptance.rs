//! Acceptance run: one PASS/FAIL line per criterion, then a nonzero exit if
//! any criterion failed.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use levelcorr::correlator::{decorrelation_profile, estimate_k, two_point, CorrelatorConfig};
use levelcorr::harness::{
    compare_tables, run_correlate, symbreak_report, CompareOptions, ComparisonReport, GridTable, RunConfig,
};
use levelcorr::kernel::{analytic_grid, triple_integrand, AnalyticGrid, Damping, KernelParams, QuadratureSpec};
use levelcorr::parametric::{gamma_over_d, gamma_over_d_via_width, ParametricPair};
use levelcorr::rmt::{mean_level_spacing, sample_with, semicircle_count, stream_rng, EnsembleSpec};
use levelcorr::spectral::{central_window, eigenvalues, mean_spacing, SampleMeta};
use rand::Rng;

const SEED: u64 = 1;

struct Outcome {
    name: String,
    passed: bool,
    detail: String,
}

fn record(results: &mut Vec<Outcome>, name: &str, passed: bool, detail: String) {
    println!("{} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    results.push(Outcome { name: name.into(), passed, detail });
}

fn goe200() -> EnsembleSpec {
    EnsembleSpec::goe(200, 1.0).unwrap()
}

fn normalization() -> (bool, String) {
    let t = Instant::now();
    let spec = goe200();
    let n = spec.n();
    let realizations = 200;
    let bins = 10;
    let (lo, hi) = (-spec.lambda(), spec.lambda());
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    let (mut sum_sq, mut entries) = (0.0, 0usize);
    let mut spacing = 0.0;
    for i in 0..realizations {
        let h = sample_with(&spec, &mut stream_rng(SEED, i as u64));
        for a in 0..n {
            for b in a + 1..n {
                sum_sq += h.entry(a, b).norm_sqr();
                entries += 1;
            }
        }
        let s = eigenvalues(&h).unwrap().with_meta(SampleMeta { spec: Some(spec), ..Default::default() });
        for &e in &s.eigenvalues {
            if e >= lo && e < hi {
                counts[((e - lo) / width) as usize] += 1;
            }
        }
        spacing += mean_spacing(&s, central_window(&s, 0.2).unwrap()).unwrap();
    }
    let variance_dev = (sum_sq / entries as f64) / spec.off_diagonal_variance() - 1.0;
    let cdf = |x: f64| x.signum() * 0.5 * semicircle_count(x.abs(), &spec);
    let worst_bin = (0..bins)
        .map(|k| {
            let a = lo + k as f64 * width;
            let expected = realizations as f64 * (cdf(a + width) - cdf(a));
            (counts[k] as f64 / expected - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let spacing_dev = (spacing / realizations as f64) / mean_level_spacing(&spec) - 1.0;
    let elapsed = t.elapsed().as_secs_f64();
    let passed = variance_dev.abs() < 0.05 && worst_bin < 0.05 && spacing_dev.abs() < 0.05 && elapsed < 60.0;
    (
        passed,
        format!(
            "off-diagonal variance {:+.2}%, worst central bin {:.2}%, central spacing {:+.2}% (limit 5%), {elapsed:.1} s (limit 60 s)",
            100.0 * variance_dev,
            100.0 * worst_bin,
            100.0 * spacing_dev
        ),
    )
}

fn decorrelation_statistics() -> (bool, String) {
    let spec = EnsembleSpec::goe(20, 1.0).unwrap();
    let draws = 10_000;
    let x0 = 0.7;
    let pairs = [(0, 1), (3, 3)];
    let mut worst_z: f64 = 0.0;
    for (mu, nu) in pairs {
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for i in 0..draws {
            let mut rng = stream_rng(SEED + 1, i as u64);
            let h1 = sample_with(&spec, &mut rng);
            let h2 = sample_with(&spec, &mut rng);
            let lin = ParametricPair::centred(h1, h2, x0, 0.0).unwrap().linearize();
            let v = (lin.h0.entry(mu, nu) * lin.v.entry(nu, mu)).re;
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / draws as f64;
        let err = ((sum_sq / draws as f64 - mean * mean) / (draws - 1) as f64).sqrt();
        worst_z = worst_z.max(mean.abs() / err);
    }

    let mut rng = stream_rng(SEED + 2, 0);
    let h1 = sample_with(&spec, &mut rng);
    let h2 = sample_with(&spec, &mut rng);
    let steps = [1e-1, 1e-2, 1e-3];
    let remainders: Vec<f64> = steps
        .iter()
        .map(|&dx| {
            let pair = ParametricPair::centred(h1.clone(), h2.clone(), x0, dx).unwrap();
            let lin = pair.linearize();
            let exact = pair.h_at_x();
            let approx = lin.approx_at_x();
            let mut s = 0.0;
            for a in 0..spec.n() {
                for b in 0..spec.n() {
                    s += (exact.entry(a, b) - approx.entry(a, b)).norm_sqr();
                }
            }
            s.sqrt()
        })
        .collect();
    let ratios: Vec<f64> = remainders.windows(2).map(|w| w[0] / w[1]).collect();
    let worst_ratio = ratios.iter().map(|r| (r / 100.0 - 1.0).abs()).fold(0.0, f64::max);
    let passed = worst_z < 4.0 && worst_ratio < 0.05;
    (
        passed,
        format!(
            "max |<H0 V>|/σ = {worst_z:.2} over {draws} draws (limit 4); remainder ratios {:.2}, {:.2} (expected 100 ± 5%)",
            ratios[0], ratios[1]
        ),
    )
}

fn strength_identities() -> (bool, String) {
    let mut rng = stream_rng(SEED + 3, 0);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(2..5000);
        let lambda = 10f64.powf(rng.random_range(-2.0..2.0));
        let dx = rng.random_range(-1.0..1.0);
        let spec = EnsembleSpec::goe(n, lambda).unwrap();
        let a = gamma_over_d(dx, &spec);
        let b = gamma_over_d_via_width(dx, &spec);
        if a != 0.0 {
            worst = worst.max((a - b).abs() / a.abs());
        }
    }
    let spec = EnsembleSpec::goe(100, 1.0).unwrap();
    let unit = gamma_over_d((PI / 200.0).sqrt(), &spec);
    let passed = worst <= 4.0 * f64::EPSILON && unit == 1.0;
    (passed, format!("max relative gap {worst:.2e} over 1000 draws (limit 4ε); γ(N=100, δx=√(π/200)) = {unit:?}"))
}

fn superalgebra_suite() -> (bool, String) {
    let t = Instant::now();
    let r = symbreak_report(SEED, 100).unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let zero = r.catalog.iter().all(|c| c.s_diagonal_saddle.norm() == 0.0);
    let passed = r.max_identity_residual < 1e-12 && r.max_commutator_identity < 1e-12 && zero && elapsed < 10.0;
    (
        passed,
        format!(
            "identity residual {:.2e}, commutator-square {:.2e} (limit 1e-12), S(σ_D⁰, T) = 0 in all cases: {zero}, {elapsed:.2} s",
            r.max_identity_residual, r.max_commutator_identity
        ),
    )
}

fn headline_config() -> CorrelatorConfig {
    let eps: Vec<f64> = (0..10).map(|i| 0.1 + 2.9 * i as f64 / 9.0).collect();
    CorrelatorConfig {
        epsilon_grid: eps,
        gamma_grid: vec![0.5, 1.0, 2.0],
        samples: 500,
        seed: SEED,
        eta_over_d: 0.5,
        window_fraction: 0.2,
        ..CorrelatorConfig::new(goe200())
    }
}

fn judge_headline(r: &ComparisonReport) -> (bool, String) {
    let c05 = r.column(0.5).unwrap();
    let c2 = r.column(2.0).unwrap();
    let passed = r.normalized_rms < 0.10 && r.max_pull <= 3.0 && c05.consistent && c2.consistent;
    (
        passed,
        format!(
            "C = {:.3} ± {:.3} at γ = 1; normalized RMS {:.3} (limit 0.10); max pull {:.2} (limit 3); C(0.5) = {:.3} ± {:.3}, C(2) = {:.3} ± {:.3}, consistent: {}/{}",
            r.calibration.constant,
            r.calibration.error,
            r.normalized_rms,
            r.max_pull,
            c05.calibration.constant,
            c05.calibration.error,
            c2.calibration.constant,
            c2.calibration.error,
            c05.consistent,
            c2.consistent
        ),
    )
}

fn profile() -> (bool, String) {
    let cfg = CorrelatorConfig { gamma_grid: vec![0.0, 0.5, 1.0, 2.0, 4.0], ..headline_config() };
    let p = decorrelation_profile(&cfg, 0.0).unwrap();
    let monotone = p.windows(2).all(|w| w[1].magnitude <= w[0].magnitude + (w[0].std_err.powi(2) + w[1].std_err.powi(2)).sqrt());
    let ratio = p[4].magnitude / p[0].magnitude;
    let curve: Vec<String> = p.iter().map(|q| format!("γ={}: {:.4}±{:.4}", q.gamma_over_d, q.magnitude, q.std_err)).collect();
    (monotone && ratio < 0.25, format!("|k_c·d²| at ε = 0: {}; γ=4/γ=0 = {ratio:.3} (limit 0.25); monotone: {monotone}", curve.join(", ")))
}

fn reduction() -> (bool, String) {
    let cfg = CorrelatorConfig { gamma_grid: vec![0.0], samples: 100, ..headline_config() };
    let a = estimate_k(&cfg).unwrap();
    let b = two_point(&cfg).unwrap();
    let same = |x: &[f64], y: &[f64]| x.iter().zip(y).all(|(p, q)| p.to_bits() == q.to_bits());
    let values = a.values.len() == b.values.len()
        && a.values.iter().zip(&b.values).all(|(p, q)| p.re.to_bits() == q.re.to_bits() && p.im.to_bits() == q.im.to_bits());
    let errors = same(&a.std_err, &b.std_err);
    (values && errors, format!("{} values bitwise identical: {values}; errors bitwise identical: {errors}", a.values.len()))
}

fn convergence(grid: &AnalyticGrid) -> (bool, String) {
    let eps = &grid.epsilon_over_d;
    let gammas = &grid.gamma_over_d;
    let tight = analytic_grid(eps, gammas, grid.eta_over_d, grid.damping, &grid.quadrature.tightened(10.0)).unwrap();
    let worst = grid
        .values
        .iter()
        .zip(&tight.values)
        .zip(&grid.errors)
        .map(|((a, b), e)| (a - b).norm() / e)
        .fold(0.0, f64::max);
    let mut rng = stream_rng(SEED + 4, 0);
    let mut asym: f64 = 0.0;
    for _ in 0..10_000 {
        let p = KernelParams::new(rng.random_range(-5.0..5.0), rng.random_range(0.0..4.0), 1.0).unwrap();
        let l1 = 10f64.powf(rng.random_range(-4.0..4.0));
        let l2 = 10f64.powf(rng.random_range(-4.0..4.0));
        let l = rng.random_range(0.0..1.0);
        let a = triple_integrand(l1, l2, l, &p).unwrap();
        let b = triple_integrand(l2, l1, l, &p).unwrap();
        if a.norm() > 0.0 {
            asym = asym.max((a - b).norm() / a.norm());
        }
    }
    let passed = worst < 1.0 && asym <= 4.0 * f64::EPSILON && grid.converged.iter().all(|&c| c);
    (
        passed,
        format!(
            "max |Δk|/error after 10× tightening = {worst:.2e} over {} points (limit 1); λ₁↔λ₂ max relative asymmetry {asym:.2e} (limit 4ε)",
            grid.values.len()
        ),
    )
}

fn reproducibility() -> (bool, String) {
    let mut identical = true;
    let mut checked = 0;
    for seed in [0u64, 7, 123_456_789] {
        let mut bytes = Vec::new();
        for threads in [1usize, 4, 1] {
            let dir = tempfile::tempdir().unwrap();
            let mut cfg = RunConfig::from_toml_str(
                "[ensemble]\nn = 80\n[run]\nsamples = 40\n[correlator]\nepsilon_grid = [0.0, 0.5, 2.0]\ngamma_grid = [0.0, 1.0, 3.0]\nbootstrap = 50\n",
            )
            .unwrap();
            cfg.run.seed = seed;
            cfg.run.threads = Some(threads);
            cfg.run.out = dir.path().to_path_buf();
            let out = run_correlate(&cfg).unwrap();
            bytes.push(std::fs::read(&out.files[0]).unwrap());
        }
        identical &= bytes.windows(2).all(|w| w[0] == w[1]);
        checked += bytes.len();
    }
    (identical, format!("{checked} correlator CSVs over 3 seeds and 1/4 threads bitwise identical: {identical}"))
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let t = Instant::now();

    let (p, d) = normalization();
    record(&mut results, "1 normalization chain", p, d);
    let (p, d) = decorrelation_statistics();
    record(&mut results, "2 decorrelation statistics", p, d);
    let (p, d) = strength_identities();
    record(&mut results, "3 strength-parameter identities", p, d);
    let (p, d) = superalgebra_suite();
    record(&mut results, "4 superalgebra suite", p, d);

    let t5 = Instant::now();
    let cfg = headline_config();
    let mc = GridTable::from_correlator(&estimate_k(&cfg).unwrap());
    let quad = QuadratureSpec::default();
    let printed = analytic_grid(&cfg.epsilon_grid, &cfg.gamma_grid, cfg.eta_over_d, Damping::Printed, &quad).unwrap();
    let opts = CompareOptions { calibration_gamma: Some(1.0), coverage: 2.0 };
    let report = compare_tables(&mc, &GridTable::from_analytic(&printed), &opts).unwrap();
    let (p, d) = judge_headline(&report);
    record(&mut results, "5 headline cross-validation", p, format!("{d}, {:.0} s", t5.elapsed().as_secs_f64()));
    let mapped = analytic_grid(&cfg.epsilon_grid, &cfg.gamma_grid, cfg.eta_over_d, Damping::EfetovMapped, &quad).unwrap();
    let mapped_report = compare_tables(&mc, &GridTable::from_analytic(&mapped), &opts).unwrap();
    let (p, d) = judge_headline(&mapped_report);
    println!("INFO 5 with efetov-mapped damping: {} {d}", if p { "would pass," } else { "would fail," });

    let (p, d) = profile();
    record(&mut results, "6 monotone decorrelation", p, d);
    let (p, d) = reduction();
    record(&mut results, "7 X = X' reduction", p, d);
    let (p, d) = convergence(&printed);
    record(&mut results, "8 quadrature convergence", p, d);
    let (p, d) = reproducibility();
    record(&mut results, "9 reproducibility", p, d);

    let k = |gamma: f64, reg: f64| {
        levelcorr::kernel::k_analytic(&KernelParams::new(1.0, gamma, reg).unwrap(), &quad).unwrap().value.norm()
    };
    let ratio = k(50.0, 0.0) / k(0.5, 0.0);
    record(
        &mut results,
        "supplementary γ = 50 suppression",
        ratio < 1e-3,
        format!("|k(r=1, γ=50)| / |k(r=1, γ=0.5)| = {ratio:.3e} (limit 1e-3), printed damping, no regulator"),
    );

    let failed: Vec<&Outcome> = results.iter().filter(|o| !o.passed).collect();
    println!("{} of {} criteria passed in {:.0} s", results.len() - failed.len(), results.len(), t.elapsed().as_secs_f64());
    for o in &failed {
        println!("failed: {} ({})", o.name, o.detail);
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
