//! Run configuration: a TOML file with one section per stage. Every key has
//! a default, so an empty file is a valid configuration.
//!
//! ```toml
//! [ensemble]
//! class = "GOE"
//! n = 200
//! lambda = 1.0
//!
//! [run]
//! seed = 1
//! samples = 500
//! mode = "exact"
//!
//! [correlator]
//! eta_over_d = 0.5
//! window_fraction = 0.2
//! epsilon_grid = { start = 0.1, stop = 3.0, count = 10 }
//! gamma_grid = [0.5, 1.0, 2.0]
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::correlator::{CorrelatorConfig, Mode};
use crate::error::{Error, Result};
use crate::kernel::{Damping, QuadratureSpec};
use crate::rmt::{EnsembleSpec, SymmetryClass};

/// A grid given either as explicit values or as `count` evenly spaced points
/// from `start` to `stop` inclusive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Linear { start: f64, stop: f64, count: usize },
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            Grid::List(v) => v.clone(),
            Grid::Linear { start, stop, count } => match count {
                0 => Vec::new(),
                1 => vec![*start],
                n => (0..*n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
            },
        };
        if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config(format!("grid {self:?} must contain finite values")));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleSection {
    pub class: SymmetryClass,
    pub n: usize,
    pub lambda: f64,
}

impl Default for EnsembleSection {
    fn default() -> Self {
        EnsembleSection { class: SymmetryClass::Goe, n: 200, lambda: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub seed: u64,
    pub samples: usize,
    pub mode: Mode,
    pub reproducible: bool,
    pub threads: Option<usize>,
    pub out: PathBuf,
    /// Also write an SVG rendering next to each CSV.
    pub plot: bool,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            seed: 0,
            samples: 500,
            mode: Mode::Exact,
            reproducible: true,
            threads: None,
            out: PathBuf::from("out"),
            plot: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorrelatorSection {
    pub eta_over_d: f64,
    pub window_fraction: f64,
    pub window: Option<[f64; 2]>,
    pub energy_step_over_d: f64,
    pub epsilon_grid: Grid,
    pub gamma_grid: Grid,
    pub bootstrap: usize,
    pub x0: f64,
}

impl Default for CorrelatorSection {
    fn default() -> Self {
        CorrelatorSection {
            eta_over_d: 0.5,
            window_fraction: 0.2,
            window: None,
            energy_step_over_d: 1.0,
            epsilon_grid: Grid::Linear { start: 0.1, stop: 3.0, count: 10 },
            gamma_grid: Grid::List(vec![0.5, 1.0, 2.0]),
            bootstrap: 200,
            x0: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticSection {
    /// Imaginary shift of `ε/d`; must equal `2·eta_over_d` when set.
    pub regulator: Option<f64>,
    pub damping: Damping,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
    /// Also evaluate at `−ε/d` and report the largest deviation from
    /// conjugation symmetry.
    pub conjugation_check: bool,
}

impl Default for AnalyticSection {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        AnalyticSection {
            regulator: None,
            damping: Damping::Printed,
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_intervals: q.max_intervals,
            conjugation_check: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareSection {
    /// Column used to fit the constant; `None` fits all columns together.
    pub calibration_gamma: Option<f64>,
    /// Coverage factor for "within fit error".
    pub coverage: f64,
}

impl Default for CompareSection {
    fn default() -> Self {
        CompareSection { calibration_gamma: Some(1.0), coverage: 2.0 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub ensemble: EnsembleSection,
    pub run: RunSection,
    pub correlator: CorrelatorSection,
    pub analytic: AnalyticSection,
    pub compare: CompareSection,
}

/// Command-line values that replace the corresponding config keys.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub reproducible: bool,
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn apply(mut self, o: &Overrides) -> Result<Self> {
        if let Some(seed) = o.seed {
            self.run.seed = seed;
        }
        if let Some(out) = &o.out {
            self.run.out = out.clone();
        }
        if o.threads.is_some() {
            self.run.threads = o.threads;
        }
        if o.reproducible {
            self.run.reproducible = true;
        }
        self.validate()?;
        Ok(self)
    }

    pub fn spec(&self) -> Result<EnsembleSpec> {
        EnsembleSpec::new(self.ensemble.class, self.ensemble.n, self.ensemble.lambda)
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn regulator(&self) -> f64 {
        self.analytic.regulator.unwrap_or(2.0 * self.correlator.eta_over_d)
    }

    pub fn quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: self.analytic.rel_tol,
            abs_tol: self.analytic.abs_tol,
            max_intervals: self.analytic.max_intervals,
        }
    }

    pub fn correlator_config(&self) -> Result<CorrelatorConfig> {
        let c = &self.correlator;
        Ok(CorrelatorConfig {
            spec: self.spec()?,
            eta_over_d: c.eta_over_d,
            window_fraction: c.window_fraction,
            window: c.window,
            energy_step_over_d: c.energy_step_over_d,
            epsilon_grid: c.epsilon_grid.values()?,
            gamma_grid: c.gamma_grid.values()?,
            samples: self.run.samples,
            seed: self.run.seed,
            mode: self.run.mode,
            x0: c.x0,
            bootstrap: c.bootstrap,
            reproducible: self.run.reproducible,
            threads: self.run.threads,
        })
    }

    /// Checks everything that can be checked without running; all failures
    /// are configuration errors.
    pub fn validate(&self) -> Result<()> {
        let cfg = self.correlator_config()?;
        cfg.validate().map_err(|e| Error::Config(e.to_string()))?;
        if let Some(reg) = self.analytic.regulator {
            if (reg - 2.0 * self.correlator.eta_over_d).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "analytic regulator {reg} does not match 2·eta_over_d = {}; the two sides would carry different smoothing",
                    2.0 * self.correlator.eta_over_d
                )));
            }
        }
        let q = self.quadrature();
        if !(q.rel_tol > 0.0 && q.abs_tol >= 0.0 && q.max_intervals > 0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if !(self.compare.coverage > 0.0) {
            return Err(Error::Config("coverage factor must be positive".into()));
        }
        Ok(())
    }
}
