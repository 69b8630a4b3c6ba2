//! Verification report for the graded-matrix identities.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::parametric::delta_x_for_gamma;
use crate::rmt::{stream_rng, EnsembleSpec};
use crate::superalgebra::{
    build_t_matrix, parametric_correlator_s, random_saddle_surrogate, saddle_residual, saddle_sigma, supertrace,
    verify_symmetry_breaking_term, Grading, SuperMatrix, SymmetryBreakingCase,
};

/// Relative tolerance for identities that hold exactly in exact arithmetic.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub case: String,
    pub dim: usize,
    pub diagonal: Vec<f64>,
    /// `trg([σ_D⁰, T]²)` at `E = 0`.
    pub s_diagonal_saddle: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbreakReport {
    pub seed: u64,
    pub surrogates: usize,
    pub catalog: Vec<CatalogEntry>,
    /// Largest `|LHS − RHS| / max(|LHS|, 1)` of the symmetry-breaking
    /// identity over the surrogates.
    pub max_identity_residual: f64,
    /// Largest `|trg σ²|` over the surrogates.
    pub max_trg_sigma_sq: f64,
    /// Largest saddle-equation residual of `σ_D⁰` over the sampled energies.
    pub max_saddle_residual: f64,
    /// Largest relative violation of `trg([σ,T]²) = 2trg((σT)²) − 2trg(σ²)`
    /// for random `σ` and the involutions among the `T` matrices.
    pub max_commutator_identity: f64,
    /// Smallest `|S(σ, T_iii) − S(σ, T_iv)| / |S(σ, T_iv)|` over the surrogates.
    pub min_iii_iv_separation: f64,
    pub passed: bool,
}

fn random_matrix<R: Rng + ?Sized>(grading: &Grading, rng: &mut R) -> Result<SuperMatrix> {
    let n = grading.len();
    let entries = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    SuperMatrix::new(entries, grading.clone())
}

/// Runs every check; `surrogates` random saddle-point surrogates are drawn
/// for the residual and separation checks, with energies inside `|E| < 1.8λ`.
pub fn symbreak_report(seed: u64, surrogates: usize) -> Result<SymbreakReport> {
    let spec = EnsembleSpec::goe(200, 1.0)?;
    let delta_x = delta_x_for_gamma(1.0, &spec)?;
    let mut rng = stream_rng(seed, 0);

    let mut catalog = Vec::new();
    for case in SymmetryBreakingCase::ALL {
        let t = build_t_matrix(case);
        let sigma0 = saddle_sigma(0.0, spec.lambda(), case.dim())?;
        catalog.push(CatalogEntry {
            case: case.label().to_string(),
            dim: case.dim(),
            diagonal: t.diagonal().iter().map(|z| z.re).collect(),
            s_diagonal_saddle: parametric_correlator_s(&sigma0, &t)?,
        });
    }

    let t_iii = build_t_matrix(SymmetryBreakingCase::III);
    let t_iv = build_t_matrix(SymmetryBreakingCase::IV);
    let mut max_identity_residual: f64 = 0.0;
    let mut max_trg_sigma_sq: f64 = 0.0;
    let mut max_saddle_residual: f64 = 0.0;
    let mut min_sep = f64::INFINITY;
    for _ in 0..surrogates {
        let energy = rng.random_range(-1.8..1.8) * spec.lambda();
        max_saddle_residual = max_saddle_residual.max(saddle_residual(&saddle_sigma(energy, spec.lambda(), 8)?, energy, spec.lambda()));
        let sigma = random_saddle_surrogate(energy, spec.lambda(), 8, &mut rng)?;
        let r = verify_symmetry_breaking_term(&spec, delta_x, &sigma)?;
        max_identity_residual = max_identity_residual.max(r.residual / r.lhs.norm().max(1.0));
        max_trg_sigma_sq = max_trg_sigma_sq.max(r.trg_sigma_sq.norm());
        let s3 = parametric_correlator_s(&sigma, &t_iii)?;
        let s4 = parametric_correlator_s(&sigma, &t_iv)?;
        min_sep = min_sep.min((s3 - s4).norm() / s4.norm().max(f64::MIN_POSITIVE));
    }

    let mut max_commutator_identity: f64 = 0.0;
    for case in [SymmetryBreakingCase::I, SymmetryBreakingCase::II, SymmetryBreakingCase::IV] {
        let t = build_t_matrix(case);
        for _ in 0..surrogates.max(1) {
            let s = random_matrix(t.grading(), &mut rng)?;
            let lhs = parametric_correlator_s(&s, &t)?;
            let rhs = supertrace(&(&s * &t).square()) * 2.0 - supertrace(&s.square()) * 2.0;
            let scale = s.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().max(1.0);
            max_commutator_identity = max_commutator_identity.max((lhs - rhs).norm() / scale);
        }
    }
    if surrogates == 0 {
        min_sep = 0.0;
    }

    let passed = max_identity_residual <= IDENTITY_TOLERANCE
        && max_saddle_residual <= IDENTITY_TOLERANCE
        && max_commutator_identity <= IDENTITY_TOLERANCE
        && catalog.iter().all(|c| c.s_diagonal_saddle.norm() == 0.0)
        && (surrogates == 0 || min_sep > 1e-6);
    Ok(SymbreakReport {
        seed,
        surrogates,
        catalog,
        max_identity_residual,
        max_trg_sigma_sq,
        max_saddle_residual,
        max_commutator_identity,
        min_iii_iv_separation: min_sep,
        passed,
    })
}
