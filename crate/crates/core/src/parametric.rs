//! The one-parameter family `H(X) = H₁ cos X + H₂ sin X` and its expansion
//! about the midpoint `X₀ = (X + X')/2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rmt::{mean_level_spacing, EnsembleSpec, Hamiltonian};

/// Two independent ensemble members together with the parameter values `X`
/// and `X'` at which the correlator is taken.
#[derive(Clone, Debug)]
pub struct ParametricPair {
    h1: Hamiltonian,
    h2: Hamiltonian,
    x: f64,
    x_prime: f64,
}

/// `H₀ = H(X₀)`, the first-order direction `V` and the offset `δx = X − X'`.
#[derive(Clone, Debug)]
pub struct LinearizedPair {
    pub h0: Hamiltonian,
    pub v: Hamiltonian,
    pub delta_x: f64,
}

impl ParametricPair {
    pub fn new(h1: Hamiltonian, h2: Hamiltonian, x: f64, x_prime: f64) -> Result<Self> {
        if h1.dim() != h2.dim() || h1.class() != h2.class() {
            return Err(Error::Structure(format!(
                "H1 ({} {}) and H2 ({} {}) must share class and dimension",
                h1.class(),
                h1.dim(),
                h2.class(),
                h2.dim()
            )));
        }
        if !(x.is_finite() && x_prime.is_finite()) {
            return Err(Error::Parameter("parameter values must be finite".into()));
        }
        Ok(ParametricPair { h1, h2, x, x_prime })
    }

    /// Pair centred on `x0` with `X − X' = delta_x`.
    pub fn centred(h1: Hamiltonian, h2: Hamiltonian, x0: f64, delta_x: f64) -> Result<Self> {
        Self::new(h1, h2, x0 + 0.5 * delta_x, x0 - 0.5 * delta_x)
    }

    pub fn h1(&self) -> &Hamiltonian {
        &self.h1
    }

    pub fn h2(&self) -> &Hamiltonian {
        &self.h2
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn x_prime(&self) -> f64 {
        self.x_prime
    }

    pub fn x0(&self) -> f64 {
        0.5 * (self.x + self.x_prime)
    }

    pub fn delta_x(&self) -> f64 {
        self.x - self.x_prime
    }

    /// `H₁ cos(at) + H₂ sin(at)`.
    pub fn build_h(&self, at: f64) -> Hamiltonian {
        let (s, c) = at.sin_cos();
        Hamiltonian::combine(c, &self.h1, s, &self.h2).expect("pair validated at construction")
    }

    pub fn h_at_x(&self) -> Hamiltonian {
        self.build_h(self.x)
    }

    pub fn h_at_x_prime(&self) -> Hamiltonian {
        self.build_h(self.x_prime)
    }

    /// `H₀ = H(X₀)` and `V = H₂ cos X₀ − H₁ sin X₀`.
    pub fn linearize(&self) -> LinearizedPair {
        let x0 = self.x0();
        let (s, c) = x0.sin_cos();
        let v = Hamiltonian::combine(-s, &self.h1, c, &self.h2).expect("pair validated at construction");
        LinearizedPair {
            h0: self.build_h(x0),
            v,
            delta_x: self.delta_x(),
        }
    }
}

impl LinearizedPair {
    /// First-order approximation `H₀ + (δx/2)·V` of `H(X)`.
    pub fn approx_at_x(&self) -> Hamiltonian {
        Hamiltonian::combine(1.0, &self.h0, 0.5 * self.delta_x, &self.v).expect("same shape")
    }

    /// First-order approximation `H₀ − (δx/2)·V` of `H(X')`.
    pub fn approx_at_x_prime(&self) -> Hamiltonian {
        Hamiltonian::combine(1.0, &self.h0, -0.5 * self.delta_x, &self.v).expect("same shape")
    }
}

/// `Γ↓ = 2·δx²·λ`.
pub fn spreading_width(delta_x: f64, spec: &EnsembleSpec) -> f64 {
    2.0 * delta_x * delta_x * spec.lambda()
}

/// `Γ↓ = 2π·δx²·<V²>/d` written in terms of the second moment of `V` and the
/// spacing `d`; reduces to [`spreading_width`] for `<V²> = λ²/N`, `d = πλ/N`.
pub fn spreading_width_from_moment(delta_x: f64, v_second_moment: f64, spacing: f64) -> f64 {
    2.0 * PI * delta_x * delta_x * v_second_moment / spacing
}

/// `Γ↓/d = (2/π)·N·δx²`.
pub fn gamma_over_d(delta_x: f64, spec: &EnsembleSpec) -> f64 {
    2.0 / PI * spec.n() as f64 * delta_x * delta_x
}

/// Non-negative `δx` with `gamma_over_d(δx) = gamma`, i.e. `sqrt(πγ/(2N))`.
pub fn delta_x_for_gamma(gamma: f64, spec: &EnsembleSpec) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::Parameter(format!("Γ↓/d must be finite and ≥ 0, got {gamma}")));
    }
    Ok((PI * gamma / (2.0 * spec.n() as f64)).sqrt())
}

/// `spreading_width / mean_level_spacing`, the same quantity as
/// [`gamma_over_d`] reached through the two separate formulas.
pub fn gamma_over_d_via_width(delta_x: f64, spec: &EnsembleSpec) -> f64 {
    spreading_width(delta_x, spec) / mean_level_spacing(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmt::{sample, stream_rng, sample_with, EnsembleSpec};
    use proptest::prelude::*;

    fn pair(seed: u64, x: f64, xp: f64) -> ParametricPair {
        let spec = EnsembleSpec::goe(12, 1.0).unwrap();
        let mut rng = stream_rng(seed, 0);
        let h1 = sample_with(&spec, &mut rng);
        let h2 = sample_with(&spec, &mut rng);
        ParametricPair::new(h1, h2, x, xp).unwrap()
    }

    #[test]
    fn build_h_special_angles() {
        let p = pair(1, 0.3, 0.1);
        assert_eq!(p.build_h(0.0), *p.h1());
        let at_half_pi = p.build_h(PI / 2.0);
        // cos(π/2) is 6e-17, not zero.
        let diff = Hamiltonian::combine(1.0, &at_half_pi, -1.0, p.h2()).unwrap();
        assert!(diff.frobenius_norm() < 1e-15 * p.h2().frobenius_norm());
        let quarter = p.build_h(PI / 4.0);
        for i in 0..12 {
            for j in 0..12 {
                let want = (p.h1().entry(i, j) + p.h2().entry(i, j)) / 2f64.sqrt();
                assert!((quarter.entry(i, j) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let a = sample(&EnsembleSpec::goe(4, 1.0).unwrap(), 1);
        let b = sample(&EnsembleSpec::goe(5, 1.0).unwrap(), 1);
        let c = sample(&EnsembleSpec::gue(4, 1.0).unwrap(), 1);
        assert!(matches!(ParametricPair::new(a.clone(), b, 0.0, 0.0), Err(Error::Structure(_))));
        assert!(matches!(ParametricPair::new(a, c, 0.0, 0.0), Err(Error::Structure(_))));
    }

    #[test]
    fn zero_offset_linearization_is_exact() {
        let p = pair(3, 0.7, 0.7);
        let lin = p.linearize();
        assert_eq!(lin.delta_x, 0.0);
        assert_eq!(p.h_at_x(), lin.h0);
        assert_eq!(lin.approx_at_x(), lin.h0);
    }

    #[test]
    fn remainder_is_second_order() {
        // ‖H(X) − H₀ − (δx/2)V‖ / ‖H₀‖ = δx²/8 + O(δx³): the Taylor remainder of
        // cos and sin about X₀ at step δx/2.
        let base = pair(4, 0.0, 0.0);
        let mut ratios = Vec::new();
        for dx in [1e-1, 1e-2, 1e-3] {
            let p = ParametricPair::centred(base.h1().clone(), base.h2().clone(), 0.4, dx).unwrap();
            let lin = p.linearize();
            let rem = Hamiltonian::combine(1.0, &p.h_at_x(), -1.0, &lin.approx_at_x()).unwrap();
            ratios.push(rem.frobenius_norm() / lin.h0.frobenius_norm() / (dx * dx));
        }
        for r in &ratios {
            assert!((r - 0.125).abs() < 0.01, "{ratios:?}");
        }
    }

    #[test]
    fn strength_parameters() {
        let spec = EnsembleSpec::goe(100, 1.0).unwrap();
        assert_eq!(spreading_width(0.0, &spec), 0.0);
        assert!((spreading_width(0.1, &spec) - 0.02).abs() < 1e-17);
        assert_eq!(gamma_over_d(0.0, &spec), 0.0);
        assert!((gamma_over_d((PI / 200.0).sqrt(), &spec) - 1.0).abs() < 1e-15);
        let dx = delta_x_for_gamma(2.5, &spec).unwrap();
        assert!((gamma_over_d(dx, &spec) - 2.5).abs() < 1e-14);
        assert!(delta_x_for_gamma(-1.0, &spec).is_err());
    }

    #[test]
    fn moment_form_of_width_agrees() {
        let spec = EnsembleSpec::goe(64, 1.7).unwrap();
        let a = spreading_width(0.05, &spec);
        let b = spreading_width_from_moment(0.05, spec.off_diagonal_variance(), mean_level_spacing(&spec));
        assert!((a - b).abs() < 1e-15 * a);
    }

    proptest! {
        #[test]
        fn gamma_identity_holds(n in 2usize..2000, lambda in 0.01f64..50.0, dx in -1.0f64..1.0) {
            let spec = EnsembleSpec::goe(n, lambda).unwrap();
            let direct = gamma_over_d(dx, &spec);
            let via = gamma_over_d_via_width(dx, &spec);
            prop_assert!((direct - via).abs() <= 4.0 * f64::EPSILON * direct.abs().max(f64::MIN_POSITIVE));
            prop_assert_eq!(gamma_over_d(dx, &spec), gamma_over_d(-dx, &spec));
        }

        #[test]
        fn family_stays_hermitian(at in -10.0f64..10.0, seed in 0u64..50) {
            let spec = EnsembleSpec::gue(6, 1.0).unwrap();
            let mut rng = stream_rng(seed, 1);
            let p = ParametricPair::new(sample_with(&spec, &mut rng), sample_with(&spec, &mut rng), 0.0, 0.0).unwrap();
            prop_assert_eq!(p.build_h(at).max_asymmetry(), 0.0);
        }
    }
}
