//! Gaussian orthogonal and unitary ensembles.
//!
//! Off-diagonal elements satisfy `<H_μν H_νμ> = λ²/N`, which puts the
//! semicircle edge at `±2λ` and the band-centre spacing at `d = πλ/N`.
//! Diagonal variances are `2λ²/N` (GOE) and `λ²/N` (GUE), the values that make
//! the measure invariant under orthogonal or unitary rotations.
//!
//! Randomness comes from ChaCha8 with a 64-bit seed; independent realizations
//! of one run use distinct ChaCha streams of the same key, so any realization
//! can be regenerated from `(seed, index)` alone. Normal deviates use the
//! ziggurat sampler of `rand_distr::StandardNormal`.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};

/// Name of the generator recorded in run metadata.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha), one stream per realization";
/// Name of the normal transform recorded in run metadata.
pub const GAUSSIAN_METHOD: &str = "ziggurat (rand_distr::StandardNormal)";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryClass {
    #[serde(rename = "GOE", alias = "goe")]
    Goe,
    #[serde(rename = "GUE", alias = "gue")]
    Gue,
}

impl FromStr for SymmetryClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "GOE" => Ok(SymmetryClass::Goe),
            "GUE" => Ok(SymmetryClass::Gue),
            other => Err(Error::Config(format!(
                "unknown symmetry class {other:?} (expected GOE or GUE)"
            ))),
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryClass::Goe => "GOE",
            SymmetryClass::Gue => "GUE",
        })
    }
}

/// Symmetry class, dimension `N` and semicircle scale `λ` of an ensemble.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsembleSpec")]
pub struct EnsembleSpec {
    class: SymmetryClass,
    n: usize,
    lambda: f64,
}

#[derive(Deserialize)]
struct RawEnsembleSpec {
    class: SymmetryClass,
    n: usize,
    lambda: f64,
}

impl TryFrom<RawEnsembleSpec> for EnsembleSpec {
    type Error = Error;

    fn try_from(raw: RawEnsembleSpec) -> Result<Self> {
        EnsembleSpec::new(raw.class, raw.n, raw.lambda)
    }
}

impl EnsembleSpec {
    pub fn new(class: SymmetryClass, n: usize, lambda: f64) -> Result<Self> {
        if n < 2 {
            return param(format!("matrix dimension must be at least 2, got {n}"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return param(format!("lambda must be positive and finite, got {lambda}"));
        }
        Ok(EnsembleSpec { class, n, lambda })
    }

    pub fn goe(n: usize, lambda: f64) -> Result<Self> {
        Self::new(SymmetryClass::Goe, n, lambda)
    }

    pub fn gue(n: usize, lambda: f64) -> Result<Self> {
        Self::new(SymmetryClass::Gue, n, lambda)
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Variance `<H_μν H_νμ>` of an off-diagonal element, `λ²/N`.
    pub fn off_diagonal_variance(&self) -> f64 {
        self.lambda * self.lambda / self.n as f64
    }

    pub fn diagonal_variance(&self) -> f64 {
        match self.class {
            SymmetryClass::Goe => 2.0 * self.off_diagonal_variance(),
            SymmetryClass::Gue => self.off_diagonal_variance(),
        }
    }
}

/// Mean level spacing at the band centre, `d = πλ/N`.
pub fn mean_level_spacing(spec: &EnsembleSpec) -> f64 {
    PI * spec.lambda / spec.n as f64
}

/// Semicircle level density normalized to `N` states.
pub fn semicircle_density(energy: f64, spec: &EnsembleSpec) -> f64 {
    let lambda = spec.lambda;
    let radicand = 4.0 * lambda * lambda - energy * energy;
    if radicand <= 0.0 {
        return 0.0;
    }
    spec.n as f64 / (2.0 * PI * lambda * lambda) * radicand.sqrt()
}

/// Number of semicircle states with `|E| ≤ half_width`, in closed form.
pub fn semicircle_count(half_width: f64, spec: &EnsembleSpec) -> f64 {
    let x = (half_width / (2.0 * spec.lambda)).clamp(0.0, 1.0);
    // ∫_{-x}^{x} (2/π) sqrt(1 - u²) du
    spec.n as f64 * (2.0 / PI) * (x * (1.0 - x * x).sqrt() + x.asin())
}

/// Generator for stream `stream` of the run keyed by `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealSymmetricMatrix(DMatrix<f64>);

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(DMatrix<Complex64>);

const ASYMMETRY_TOLERANCE: f64 = 1e-12;

impl RealSymmetricMatrix {
    /// Wraps a dense matrix after checking `max|H − Hᵀ| ≤ 1e-12·max|H|`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Structure(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.amax().max(f64::MIN_POSITIVE);
        let asym = (&m - m.transpose()).amax();
        if asym > ASYMMETRY_TOLERANCE * scale {
            return Err(Error::Structure(format!(
                "matrix is not symmetric (relative asymmetry {:.3e})",
                asym / scale
            )));
        }
        Ok(RealSymmetricMatrix(m))
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl HermitianMatrix {
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Structure(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.iter().map(|z| z.norm()).fold(f64::MIN_POSITIVE, f64::max);
        let asym = (&m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if asym > ASYMMETRY_TOLERANCE * scale {
            return Err(Error::Structure(format!(
                "matrix is not Hermitian (relative asymmetry {:.3e})",
                asym / scale
            )));
        }
        Ok(HermitianMatrix(m))
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }
}

/// One ensemble member: real symmetric (GOE) or complex Hermitian (GUE).
#[derive(Clone, Debug, PartialEq)]
pub enum Hamiltonian {
    Real(RealSymmetricMatrix),
    Complex(HermitianMatrix),
}

impl From<RealSymmetricMatrix> for Hamiltonian {
    fn from(m: RealSymmetricMatrix) -> Self {
        Hamiltonian::Real(m)
    }
}

impl From<HermitianMatrix> for Hamiltonian {
    fn from(m: HermitianMatrix) -> Self {
        Hamiltonian::Complex(m)
    }
}

impl Hamiltonian {
    pub fn dim(&self) -> usize {
        match self {
            Hamiltonian::Real(m) => m.0.nrows(),
            Hamiltonian::Complex(m) => m.0.nrows(),
        }
    }

    pub fn class(&self) -> SymmetryClass {
        match self {
            Hamiltonian::Real(_) => SymmetryClass::Goe,
            Hamiltonian::Complex(_) => SymmetryClass::Gue,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        match self {
            Hamiltonian::Real(m) => Complex64::new(m.0[(i, j)], 0.0),
            Hamiltonian::Complex(m) => m.0[(i, j)],
        }
    }

    /// `a·A + b·B` for two members of the same class and dimension.
    ///
    /// Symmetry is preserved exactly because both operands are combined
    /// entry by entry with the same scalars.
    pub fn combine(a: f64, lhs: &Hamiltonian, b: f64, rhs: &Hamiltonian) -> Result<Hamiltonian> {
        if lhs.dim() != rhs.dim() {
            return Err(Error::Structure(format!(
                "dimension mismatch: {} vs {}",
                lhs.dim(),
                rhs.dim()
            )));
        }
        match (lhs, rhs) {
            (Hamiltonian::Real(x), Hamiltonian::Real(y)) => Ok(Hamiltonian::Real(
                RealSymmetricMatrix(x.0.map(|v| a * v) + y.0.map(|v| b * v)),
            )),
            (Hamiltonian::Complex(x), Hamiltonian::Complex(y)) => Ok(Hamiltonian::Complex(
                HermitianMatrix(x.0.map(|v| v * a) + y.0.map(|v| v * b)),
            )),
            _ => Err(Error::Structure(format!(
                "symmetry class mismatch: {} vs {}",
                lhs.class(),
                rhs.class()
            ))),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entry(i, i).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        match self {
            Hamiltonian::Real(m) => m.0.norm(),
            Hamiltonian::Complex(m) => m.0.norm(),
        }
    }

    /// `max|H − H†|`; zero for every matrix built by this crate.
    pub fn max_asymmetry(&self) -> f64 {
        match self {
            Hamiltonian::Real(m) => (&m.0 - m.0.transpose()).amax(),
            Hamiltonian::Complex(m) => (&m.0 - m.0.adjoint())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max),
        }
    }

    /// Adds `shift` to every diagonal element.
    pub fn shifted(&self, shift: f64) -> Hamiltonian {
        let mut out = self.clone();
        match &mut out {
            Hamiltonian::Real(m) => {
                for i in 0..m.0.nrows() {
                    m.0[(i, i)] += shift;
                }
            }
            Hamiltonian::Complex(m) => {
                for i in 0..m.0.nrows() {
                    m.0[(i, i)] += shift;
                }
            }
        }
        out
    }

    /// Row-major CSV dump preceded by a `# n=…,class=…,lambda=…,seed=…` line.
    /// Complex entries are written as adjacent `re,im` columns.
    pub fn write_csv<W: Write>(&self, w: &mut W, spec: &EnsembleSpec, seed: u64) -> std::io::Result<()> {
        writeln!(
            w,
            "# n={},class={},lambda={},seed={}",
            self.dim(),
            spec.class(),
            spec.lambda(),
            seed
        )?;
        let n = self.dim();
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| match self {
                    Hamiltonian::Real(m) => format!("{:e}", m.0[(i, j)]),
                    Hamiltonian::Complex(m) => format!("{:e},{:e}", m.0[(i, j)].re, m.0[(i, j)].im),
                })
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Draws one member of the ensemble using `rng`.
pub fn sample_with<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Hamiltonian {
    let n = spec.n;
    let sigma = spec.off_diagonal_variance().sqrt();
    let sigma_diag = spec.diagonal_variance().sqrt();
    match spec.class {
        SymmetryClass::Goe => {
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = sigma_diag * rng.sample::<f64, _>(StandardNormal);
                for j in (i + 1)..n {
                    let v = sigma * rng.sample::<f64, _>(StandardNormal);
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            Hamiltonian::Real(RealSymmetricMatrix(m))
        }
        SymmetryClass::Gue => {
            let half = sigma * std::f64::consts::FRAC_1_SQRT_2;
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = Complex64::new(sigma_diag * rng.sample::<f64, _>(StandardNormal), 0.0);
                for j in (i + 1)..n {
                    let re = half * rng.sample::<f64, _>(StandardNormal);
                    let im = half * rng.sample::<f64, _>(StandardNormal);
                    m[(i, j)] = Complex64::new(re, im);
                    m[(j, i)] = Complex64::new(re, -im);
                }
            }
            Hamiltonian::Complex(HermitianMatrix(m))
        }
    }
}

/// One draw, deterministic in `seed` (stream 0 of that key).
pub fn sample(spec: &EnsembleSpec, seed: u64) -> Hamiltonian {
    sample_with(spec, &mut stream_rng(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(EnsembleSpec::goe(1, 1.0).is_err());
        assert!(EnsembleSpec::goe(4, 0.0).is_err());
        assert!(EnsembleSpec::gue(4, f64::NAN).is_err());
        assert!("xyz".parse::<SymmetryClass>().is_err());
        assert_eq!("gue".parse::<SymmetryClass>().unwrap(), SymmetryClass::Gue);
    }

    #[test]
    fn goe_two_by_two_is_exactly_symmetric() {
        let spec = EnsembleSpec::goe(2, 1.0).unwrap();
        for seed in 0..20 {
            let h = sample(&spec, seed);
            assert_eq!(h.entry(0, 1), h.entry(1, 0));
        }
    }

    #[test]
    fn sampled_matrices_are_exactly_hermitian() {
        for spec in [EnsembleSpec::goe(17, 1.3).unwrap(), EnsembleSpec::gue(17, 0.7).unwrap()] {
            let h = sample(&spec, 99);
            assert_eq!(h.max_asymmetry(), 0.0);
            assert_eq!(h.class(), spec.class());
        }
    }

    #[test]
    fn repeated_seed_is_bitwise_identical() {
        let spec = EnsembleSpec::gue(9, 1.0).unwrap();
        assert_eq!(sample(&spec, 7), sample(&spec, 7));
        assert_ne!(sample(&spec, 7), sample(&spec, 8));
    }

    #[test]
    fn spacing_and_density() {
        let a = EnsembleSpec::goe(100, 1.0).unwrap();
        let b = EnsembleSpec::goe(200, 2.0).unwrap();
        assert!((mean_level_spacing(&a) - PI / 100.0).abs() < 1e-15);
        assert!((mean_level_spacing(&b) - PI / 100.0).abs() < 1e-15);
        assert_eq!(semicircle_density(2.0, &a), 0.0);
        assert_eq!(semicircle_density(-3.0, &a), 0.0);
        assert!((semicircle_density(0.0, &a) - 100.0 / PI).abs() < 1e-12);
        assert!((semicircle_density(0.0, &a) * mean_level_spacing(&a) - 1.0).abs() < 1e-14);
        assert!((semicircle_count(2.0, &a) - 100.0).abs() < 1e-10);
    }

    #[test]
    fn off_diagonal_variance_matches_normalization() {
        // 10⁵ draws of H₁₂ for GOE(n=100, λ=1); tolerance 3σ of the sample variance.
        let spec = EnsembleSpec::goe(100, 1.0).unwrap();
        let sigma = spec.off_diagonal_variance().sqrt();
        let mut rng = stream_rng(2024, 0);
        let draws = 100_000;
        let mut sum2 = 0.0;
        // Draw only the element itself; the full sampler uses the same transform.
        for _ in 0..draws {
            let v = sigma * rng.sample::<f64, _>(StandardNormal);
            sum2 += v * v;
        }
        let var = sum2 / draws as f64;
        let target = 0.01;
        let se = target * (2.0 / draws as f64).sqrt();
        assert!((var - target).abs() < 3.0 * se, "var {var}");
    }

    #[test]
    fn full_sampler_element_variances() {
        let spec = EnsembleSpec::gue(40, 1.5).unwrap();
        let mut rng = stream_rng(5, 3);
        let (mut off, mut diag) = (0.0, 0.0);
        let (mut n_off, mut n_diag) = (0usize, 0usize);
        for _ in 0..300 {
            let h = sample_with(&spec, &mut rng);
            for i in 0..spec.n() {
                diag += h.entry(i, i).re.powi(2);
                n_diag += 1;
                for j in (i + 1)..spec.n() {
                    off += (h.entry(i, j) * h.entry(j, i)).re;
                    n_off += 1;
                }
            }
        }
        let off = off / n_off as f64;
        let diag = diag / n_diag as f64;
        assert!((off / spec.off_diagonal_variance() - 1.0).abs() < 0.02, "{off}");
        assert!((diag / spec.diagonal_variance() - 1.0).abs() < 0.05, "{diag}");
    }

    #[test]
    fn csv_dump_has_documented_header() {
        let spec = EnsembleSpec::gue(3, 1.0).unwrap();
        let h = sample(&spec, 1);
        let mut buf = Vec::new();
        h.write_csv(&mut buf, &spec, 1).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "# n=3,class=GUE,lambda=1,seed=1");
        assert_eq!(lines.next().unwrap().split(',').count(), 6);
    }

    #[test]
    fn wrapping_checks_symmetry() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.5, 1.0]);
        assert!(RealSymmetricMatrix::new(m).is_err());
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(RealSymmetricMatrix::new(m).is_ok());
    }
}
