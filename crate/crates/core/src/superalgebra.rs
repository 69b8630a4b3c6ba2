//! Graded matrices with numeric entries.
//!
//! A [`Grading`] assigns `+1` to commuting and `−1` to anticommuting indices;
//! the supertrace is `trg M = Σ_α s_α M_αα`. Entries are ordinary complex
//! numbers, which is enough for every identity checked here: the
//! symmetry-breaking matrices are diagonal with entries in `{0, ±1, ±2}` and
//! never require Grassmann-valued blocks.
//!
//! Index orderings follow the retarded/advanced block layout: GOE
//! `(c, c, a, a, c, c, a, a)` in dimension 8 and GUE `(c, a, c, a)` in
//! dimension 4.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::parametric::spreading_width;
use crate::rmt::{mean_level_spacing, EnsembleSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Grading {
    signs: Vec<i8>,
}

impl Grading {
    /// Signs must be ±1 with as many `+1` as `−1`.
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Parameter("grading signs must be ±1".into()));
        }
        let balance: i32 = signs.iter().map(|&s| s as i32).sum();
        if balance != 0 {
            return Err(Error::Parameter(format!(
                "grading must be balanced, got {} more commuting than anticommuting indices",
                balance
            )));
        }
        Ok(Grading { signs })
    }

    /// `(c, c, a, a, c, c, a, a)`
    pub fn goe() -> Self {
        Grading { signs: vec![1, 1, -1, -1, 1, 1, -1, -1] }
    }

    /// `(c, a, c, a)`
    pub fn gue() -> Self {
        Grading { signs: vec![1, -1, 1, -1] }
    }

    /// Standard grading for dimension 8 (GOE) or 4 (GUE).
    pub fn for_dim(dim: usize) -> Result<Self> {
        match dim {
            8 => Ok(Self::goe()),
            4 => Ok(Self::gue()),
            _ => Err(Error::Parameter(format!("graded dimension must be 4 or 8, got {dim}"))),
        }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuperMatrix {
    entries: DMatrix<Complex64>,
    grading: Grading,
}

impl SuperMatrix {
    pub fn new(entries: DMatrix<Complex64>, grading: Grading) -> Result<Self> {
        if !entries.is_square() || entries.nrows() != grading.len() {
            return Err(Error::Structure(format!(
                "{}x{} entries do not match grading of length {}",
                entries.nrows(),
                entries.ncols(),
                grading.len()
            )));
        }
        Ok(SuperMatrix { entries, grading })
    }

    pub fn identity(grading: Grading) -> Self {
        let n = grading.len();
        SuperMatrix { entries: DMatrix::identity(n, n), grading }
    }

    pub fn from_diagonal(diag: &[f64], grading: Grading) -> Result<Self> {
        let entries = DMatrix::from_fn(diag.len(), diag.len(), |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::new(entries, grading)
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn dim(&self) -> usize {
        self.grading.len()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        self.entries.diagonal().iter().copied().collect()
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.entries[(i, j)] == Complex64::new(0.0, 0.0)))
    }

    fn check_compatible(&self, other: &SuperMatrix) -> Result<()> {
        if self.grading != other.grading {
            return Err(Error::Structure(format!(
                "grading mismatch: {:?} vs {:?}",
                self.grading.signs, other.grading.signs
            )));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.check_compatible(other)?;
        Ok(SuperMatrix { entries: &self.entries * &other.entries, grading: self.grading.clone() })
    }

    pub fn try_add(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.check_compatible(other)?;
        Ok(SuperMatrix { entries: &self.entries + &other.entries, grading: self.grading.clone() })
    }

    pub fn scale(&self, c: Complex64) -> SuperMatrix {
        SuperMatrix { entries: self.entries.map(|z| z * c), grading: self.grading.clone() }
    }

    /// `[A, B] = AB − BA`
    pub fn commutator(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.check_compatible(other)?;
        Ok(SuperMatrix {
            entries: &self.entries * &other.entries - &other.entries * &self.entries,
            grading: self.grading.clone(),
        })
    }

    pub fn square(&self) -> SuperMatrix {
        SuperMatrix { entries: &self.entries * &self.entries, grading: self.grading.clone() }
    }

    pub fn try_inverse(&self) -> Result<SuperMatrix> {
        let inv = self
            .entries
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Parameter("matrix is singular".into()))?;
        Ok(SuperMatrix { entries: inv, grading: self.grading.clone() })
    }
}

impl Add for &SuperMatrix {
    type Output = SuperMatrix;
    fn add(self, rhs: Self) -> SuperMatrix {
        self.try_add(rhs).expect("gradings must match")
    }
}

impl Sub for &SuperMatrix {
    type Output = SuperMatrix;
    fn sub(self, rhs: Self) -> SuperMatrix {
        self.try_add(&rhs.scale(Complex64::new(-1.0, 0.0))).expect("gradings must match")
    }
}

impl Mul for &SuperMatrix {
    type Output = SuperMatrix;
    fn mul(self, rhs: Self) -> SuperMatrix {
        self.try_mul(rhs).expect("gradings must match")
    }
}

/// `trg M = Σ_α s_α M_αα`
pub fn supertrace(m: &SuperMatrix) -> Complex64 {
    m.grading
        .signs
        .iter()
        .enumerate()
        .map(|(a, &s)| m.entries[(a, a)] * s as f64)
        .sum()
}

/// Retarded/advanced splitting matrix: `+1` on the first half, `−1` on the
/// second.
pub fn l_matrix(dim: usize) -> Result<SuperMatrix> {
    let grading = Grading::for_dim(dim)?;
    let half = dim / 2;
    let diag: Vec<f64> = (0..dim).map(|i| if i < half { 1.0 } else { -1.0 }).collect();
    SuperMatrix::from_diagonal(&diag, grading)
}

/// `T₃ = diag(+1, −1, +1, −1; +1, −1, +1, −1)` with GOE grading.
pub fn t3_matrix() -> SuperMatrix {
    SuperMatrix::from_diagonal(&[1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0], Grading::goe())
        .expect("dimension 8")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SymmetryBreakingCase {
    /// GOE ↔ GOE
    I,
    /// GUE ↔ GUE
    II,
    /// GOE ↔ GUE
    III,
    /// GOE → GUE crossover of the two-point function
    IV,
}

impl SymmetryBreakingCase {
    pub const ALL: [SymmetryBreakingCase; 4] = [
        SymmetryBreakingCase::I,
        SymmetryBreakingCase::II,
        SymmetryBreakingCase::III,
        SymmetryBreakingCase::IV,
    ];

    /// Graded dimension of the saddle point paired with this case.
    pub fn dim(self) -> usize {
        match self {
            SymmetryBreakingCase::II => 4,
            _ => 8,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SymmetryBreakingCase::I => "i: GOE<->GOE",
            SymmetryBreakingCase::II => "ii: GUE<->GUE",
            SymmetryBreakingCase::III => "iii: GOE<->GUE",
            SymmetryBreakingCase::IV => "iv: GOE->GUE transition",
        }
    }
}

/// The diagonal symmetry-breaking matrix `T_x` of each case:
/// `L₈`, `L₄`, `(1₈ − L₈)·T₃` and `T₃`.
pub fn build_t_matrix(case: SymmetryBreakingCase) -> SuperMatrix {
    match case {
        SymmetryBreakingCase::I => l_matrix(8).expect("dimension 8"),
        SymmetryBreakingCase::II => l_matrix(4).expect("dimension 4"),
        SymmetryBreakingCase::III => {
            let one = SuperMatrix::identity(Grading::goe());
            let l = l_matrix(8).expect("dimension 8");
            &(&one - &l) * &t3_matrix()
        }
        SymmetryBreakingCase::IV => t3_matrix(),
    }
}

/// Diagonal saddle point `σ_D⁰ = (E/2λ)·1 − iΔ₀·L` with `Δ₀ = sqrt(1 − (E/2λ)²)`.
pub fn saddle_sigma(energy: f64, lambda: f64, dim: usize) -> Result<SuperMatrix> {
    if !(lambda > 0.0) {
        return Err(Error::Parameter(format!("lambda must be positive, got {lambda}")));
    }
    let x = energy / (2.0 * lambda);
    if !(x.abs() < 1.0) {
        return Err(Error::Parameter(format!(
            "E = {energy} lies outside the spectrum (|E| < 2λ = {})",
            2.0 * lambda
        )));
    }
    let delta0 = (1.0 - x * x).sqrt();
    let l = l_matrix(dim)?;
    let entries = DMatrix::from_fn(dim, dim, |i, j| {
        if i == j {
            Complex64::new(x, -delta0 * l.entries[(i, i)].re)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    SuperMatrix::new(entries, l.grading.clone())
}

/// Residual of the saddle equation `σ(E − λσ) − λ = 0`.
pub fn saddle_residual(sigma: &SuperMatrix, energy: f64, lambda: f64) -> f64 {
    let n = sigma.dim();
    let e = DMatrix::<Complex64>::identity(n, n) * Complex64::new(energy, 0.0);
    let lhs = &sigma.entries * (e - sigma.entries.map(|z| z * lambda))
        - DMatrix::<Complex64>::identity(n, n) * Complex64::new(lambda, 0.0);
    lhs.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `S = trg([σ, T]²)`
pub fn parametric_correlator_s(sigma: &SuperMatrix, t: &SuperMatrix) -> Result<Complex64> {
    let c = sigma.commutator(t)?;
    Ok(supertrace(&c.square()))
}

/// Random invertible matrix that only mixes indices of equal grading sign.
pub fn random_grading_block_matrix<R: Rng + ?Sized>(grading: &Grading, spread: f64, rng: &mut R) -> SuperMatrix {
    let n = grading.len();
    let s = grading.signs();
    let entries = DMatrix::from_fn(n, n, |i, j| {
        let base = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        if s[i] == s[j] {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            base + Complex64::new(re, im) * spread
        } else {
            base
        }
    });
    SuperMatrix { entries, grading: grading.clone() }
}

/// `A·σ_D⁰·A⁻¹` for a random grading-block-diagonal `A`. Such similarities
/// keep both `trg σ` and `trg σ²` equal to their saddle-point values.
pub fn random_saddle_surrogate<R: Rng + ?Sized>(energy: f64, lambda: f64, dim: usize, rng: &mut R) -> Result<SuperMatrix> {
    let sigma0 = saddle_sigma(energy, lambda, dim)?;
    let a = random_grading_block_matrix(sigma0.grading(), 0.4, rng);
    let a_inv = a.try_inverse()?;
    Ok(&(&a * &sigma0) * &a_inv)
}

/// Both sides of the identity
/// `(N/16)·δx²·trg[(σL)²] = (πΓ↓/(64d))·trg[([σ, L])²]`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SymmetryBreakingResidual {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    /// `trg σ²`; the identity requires it to vanish.
    pub trg_sigma_sq: Complex64,
}

impl SymmetryBreakingResidual {
    /// `residual ≤ 1e-12·max(|LHS|, 1)`
    pub fn passes(&self) -> bool {
        self.residual <= 1e-12 * self.lhs.norm().max(1.0)
    }
}

/// Evaluates the symmetry-breaking exponent in its `(σL)²` and commutator
/// forms, with `Γ↓ = 2δx²λ` and `d = πλ/N`.
pub fn verify_symmetry_breaking_term(spec: &EnsembleSpec, delta_x: f64, sigma: &SuperMatrix) -> Result<SymmetryBreakingResidual> {
    if sigma.dim() != 8 || sigma.grading() != &Grading::goe() {
        return Err(Error::Structure("σ must be 8-dimensional with GOE grading".into()));
    }
    let n = spec.n() as f64;
    let l = l_matrix(8)?;
    let sl = sigma.try_mul(&l)?;
    let lhs = supertrace(&sl.square()) * (n / 16.0 * delta_x * delta_x);
    let gamma = spreading_width(delta_x, spec);
    let d = mean_level_spacing(spec);
    let rhs = parametric_correlator_s(sigma, &l)? * (PI * gamma / (64.0 * d));
    Ok(SymmetryBreakingResidual {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        trg_sigma_sq: supertrace(&sigma.square()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::stream_rng;
    use proptest::prelude::{prop_assert, proptest};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_matrix<R: Rng>(grading: &Grading, rng: &mut R) -> SuperMatrix {
        let n = grading.len();
        let entries = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        SuperMatrix::new(entries, grading.clone()).unwrap()
    }

    #[test]
    fn grading_validation() {
        assert!(Grading::new(vec![1, 1, -1]).is_err());
        assert!(Grading::new(vec![1, 2, -1, -1]).is_err());
        assert!(Grading::new(vec![1, -1]).is_ok());
        assert!(Grading::for_dim(6).is_err());
        assert!(SuperMatrix::new(DMatrix::identity(3, 3), Grading::gue()).is_err());
    }

    #[test]
    fn supertrace_examples() {
        assert_eq!(supertrace(&SuperMatrix::identity(Grading::goe())), c(0.0));
        assert_eq!(supertrace(&SuperMatrix::identity(Grading::gue())), c(0.0));
        assert_eq!(supertrace(&l_matrix(8).unwrap()), c(0.0));
        let m = SuperMatrix::from_diagonal(&[2.0, 0.0, 0.0, 0.0], Grading::gue()).unwrap();
        assert_eq!(supertrace(&m), c(2.0));
    }

    #[test]
    fn t_matrix_catalog() {
        let diag = |case| -> Vec<f64> { build_t_matrix(case).diagonal().iter().map(|z| z.re).collect() };
        assert_eq!(diag(SymmetryBreakingCase::I), vec![1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]);
        assert_eq!(diag(SymmetryBreakingCase::II), vec![1.0, 1.0, -1.0, -1.0]);
        assert_eq!(diag(SymmetryBreakingCase::III), vec![0.0, 0.0, 0.0, 0.0, 2.0, -2.0, 2.0, -2.0]);
        assert_eq!(diag(SymmetryBreakingCase::IV), vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
        for case in SymmetryBreakingCase::ALL {
            let t = build_t_matrix(case);
            assert!(t.is_diagonal());
            assert_eq!(t.dim(), case.dim());
        }
    }

    #[test]
    fn saddle_point_properties() {
        let s = saddle_sigma(0.0, 1.3, 8).unwrap();
        let minus_i_l = l_matrix(8).unwrap().scale(Complex64::new(0.0, -1.0));
        assert_eq!(s, minus_i_l);
        assert!(saddle_sigma(2.0, 1.0, 8).is_err());
        assert!(saddle_sigma(-2.5, 1.0, 4).is_err());
        assert!(saddle_sigma(0.0, 1.0, 6).is_err());

        let edge = saddle_sigma(2.0 * (1.0 - 1e-12), 1.0, 4).unwrap();
        let delta0 = -edge.entries()[(0, 0)].im;
        assert!((delta0 - (2e-12f64).sqrt()).abs() < 1e-9, "{delta0}");

        for e in [-1.9, -0.7, 0.0, 0.4, 1.5] {
            for dim in [4, 8] {
                let s = saddle_sigma(e, 1.0, dim).unwrap();
                assert!(saddle_residual(&s, e, 1.0) < 1e-12);
                assert!(supertrace(&s.square()).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn diagonal_saddle_gives_zero_correlator() {
        for case in SymmetryBreakingCase::ALL {
            let s = saddle_sigma(0.3, 1.0, case.dim()).unwrap();
            assert_eq!(parametric_correlator_s(&s, &build_t_matrix(case)).unwrap(), c(0.0));
        }
        let s = saddle_sigma(0.0, 1.0, 8).unwrap();
        let t = SuperMatrix::identity(Grading::goe()).scale(c(3.0));
        assert_eq!(parametric_correlator_s(&s, &t).unwrap(), c(0.0));
    }

    #[test]
    fn grading_mismatch_is_structural() {
        let a = saddle_sigma(0.0, 1.0, 4).unwrap();
        let b = l_matrix(8).unwrap();
        assert!(matches!(parametric_correlator_s(&a, &b), Err(Error::Structure(_))));
        let spec = EnsembleSpec::goe(10, 1.0).unwrap();
        assert!(verify_symmetry_breaking_term(&spec, 0.1, &a).is_err());
    }

    #[test]
    fn symmetry_breaking_identity_on_saddle() {
        let spec = EnsembleSpec::goe(100, 1.0).unwrap();
        let s = saddle_sigma(0.0, 1.0, 8).unwrap();
        let r = verify_symmetry_breaking_term(&spec, 0.2, &s).unwrap();
        assert_eq!(r.lhs, c(0.0));
        assert!(r.passes());
        let mut rng = stream_rng(3, 0);
        let s = random_saddle_surrogate(0.5, 1.0, 8, &mut rng).unwrap();
        let r = verify_symmetry_breaking_term(&spec, 0.0, &s).unwrap();
        assert_eq!(r.lhs, c(0.0));
        assert_eq!(r.rhs, c(0.0));
    }

    #[test]
    fn identity_needs_vanishing_trg_sigma_sq() {
        // A generic σ with trg σ² ≠ 0 must violate the identity.
        let spec = EnsembleSpec::goe(100, 1.0).unwrap();
        let mut rng = stream_rng(9, 0);
        let s = random_matrix(&Grading::goe(), &mut rng);
        let r = verify_symmetry_breaking_term(&spec, 0.3, &s).unwrap();
        assert!(r.trg_sigma_sq.norm() > 1e-3);
        assert!(!r.passes());
    }

    #[test]
    fn cases_iii_and_iv_differ() {
        let mut rng = stream_rng(17, 0);
        for _ in 0..10 {
            let s = random_saddle_surrogate(0.2, 1.0, 8, &mut rng).unwrap();
            let a = parametric_correlator_s(&s, &build_t_matrix(SymmetryBreakingCase::III)).unwrap();
            let b = parametric_correlator_s(&s, &build_t_matrix(SymmetryBreakingCase::IV)).unwrap();
            assert!((a - b).norm() > 1e-6 * (a.norm() + b.norm()));
        }
    }

    proptest! {
        #[test]
        fn supertrace_is_linear(seed in 0u64..1000, re in -5.0f64..5.0, im in -5.0f64..5.0) {
            let mut rng = stream_rng(seed, 0);
            let g = Grading::goe();
            let a = random_matrix(&g, &mut rng);
            let b = random_matrix(&g, &mut rng);
            let k = Complex64::new(re, im);
            let sum = supertrace(&(&a + &b)) - supertrace(&a) - supertrace(&b);
            prop_assert!(sum.norm() <= 1e-13 * (1.0 + supertrace(&a).norm() + supertrace(&b).norm()));
            prop_assert!((supertrace(&a.scale(k)) - supertrace(&a) * k).norm() <= 1e-13 * (1.0 + supertrace(&a).norm() * k.norm()));
        }

        #[test]
        fn commutator_square_identity(seed in 0u64..1000, case_idx in 0usize..4) {
            // For diagonal T with T² = 1: trg([σ,T]²) = 2 trg((σT)²) − 2 trg(σ²).
            let case = [SymmetryBreakingCase::I, SymmetryBreakingCase::II, SymmetryBreakingCase::IV, SymmetryBreakingCase::I][case_idx];
            let t = build_t_matrix(case);
            let mut rng = stream_rng(seed, 1);
            let s = random_matrix(t.grading(), &mut rng);
            let lhs = parametric_correlator_s(&s, &t).unwrap();
            let rhs = supertrace(&(&s * &t).square()) * 2.0 - supertrace(&s.square()) * 2.0;
            let scale = s.entries().iter().map(|z| z.norm_sqr()).sum::<f64>();
            prop_assert!((lhs - rhs).norm() <= 1e-13 * scale.max(1.0));
        }

        #[test]
        fn block_similarity_preserves_supertrace(seed in 0u64..1000) {
            let mut rng = stream_rng(seed, 2);
            let g = Grading::goe();
            let m = random_matrix(&g, &mut rng);
            let a = random_grading_block_matrix(&g, 0.4, &mut rng);
            let conj = &(&a * &m) * &a.try_inverse().unwrap();
            prop_assert!((supertrace(&conj) - supertrace(&m)).norm() <= 1e-12 * (1.0 + supertrace(&m).norm()));
        }

        #[test]
        fn symmetry_breaking_identity_on_surrogates(seed in 0u64..1000, e in -1.5f64..1.5, dx in 0.0f64..0.5) {
            let spec = EnsembleSpec::goe(200, 1.0).unwrap();
            let mut rng = stream_rng(seed, 3);
            let s = random_saddle_surrogate(e, 1.0, 8, &mut rng).unwrap();
            let r = verify_symmetry_breaking_term(&spec, dx, &s).unwrap();
            prop_assert!(r.passes(), "{:?}", r);
        }
    }
}
