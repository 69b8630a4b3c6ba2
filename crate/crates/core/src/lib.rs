//! Parametric level correlations in Gaussian random-matrix ensembles.
//!
//! The crate estimates the correlator
//! `k(ε, X − X') = <tr G⁺(E₁; X) tr G⁻(E₂; X')>` for the family
//! `H(X) = H₁ cos X + H₂ sin X`, evaluates the saddle-point triple integral
//! that predicts it for the orthogonal ensemble, and checks the graded-matrix
//! algebra behind the symmetry-breaking term.
//!
//! Module map:
//!
//! - [`rmt`]: seeded GOE/GUE sampling and the semicircle normalization.
//! - [`parametric`]: the `H(X)` family, its midpoint linearization and the
//!   strength parameter `Γ↓/d`.
//! - [`spectral`]: dense Hermitian eigensolver and resolvent traces.
//! - [`correlator`]: Monte Carlo estimation of the connected correlator.
//! - [`quadrature`] and [`kernel`]: nested adaptive Gauss–Kronrod evaluation
//!   of the analytic correlator.
//! - [`superalgebra`]: supermatrices, supertrace and the symmetry-breaking
//!   catalog.
//! - [`harness`]: run configuration, CSV/JSON persistence and the
//!   Monte-Carlo-versus-analytic comparison (feature `harness`).

pub mod correlator;
pub mod error;
#[cfg(feature = "harness")]
pub mod harness;
pub mod kernel;
pub mod parametric;
pub mod quadrature;
pub mod rmt;
pub mod spectral;
pub mod superalgebra;

pub use error::{Error, Result};
pub use num_complex::Complex64;
