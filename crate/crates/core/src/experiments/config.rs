use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coupling::{positive, SlabParams};
use crate::error::{Error, Result};
use crate::gates::{GateContext, DEFAULT_GATE_LENGTH};
use crate::propagator::{Method, DEFAULT_RECORDED_SAMPLES, MIN_STEPS};

pub const DEFAULT_SWEEP_LADDER: [f64; 5] = [5.0, 10.0, 20.0, 50.0, 100.0];

/// Settings shared by every command. Loaded from TOML; every key is
/// optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub omega_max: f64,
    pub beta0: f64,
    /// Length of one device or gate, in `1 / omega_max`.
    pub z_max: f64,
    /// Steps per device; unset scales with the length.
    pub steps: Option<usize>,
    pub method: Method,
    /// Bus propagation-constant offset.
    pub bus_detuning: f64,
    pub out: PathBuf,
    /// Network description for `cnot`; the built-in CNOT when unset.
    pub network: Option<PathBuf>,
    /// Reflectivity for `gate` and `geometry`.
    pub ratio: f64,
    /// Overrides `ratio` when set.
    pub alpha: Option<f64>,
    /// Waveguide the `gate` photon starts in (1 or 2).
    pub input_mode: usize,
    pub lengths: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    pub oracle_only: bool,
    /// Also dump amplitudes as re/im pairs.
    pub amplitudes: bool,
    pub recorded_samples: usize,
    pub path_samples: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            omega_max: 1.0,
            beta0: 1.0,
            z_max: DEFAULT_GATE_LENGTH,
            steps: None,
            method: Method::Rk4,
            bus_detuning: 0.0,
            out: PathBuf::from("out"),
            network: None,
            ratio: 0.5,
            alpha: None,
            input_mode: 1,
            lengths: DEFAULT_SWEEP_LADDER.to_vec(),
            samples: 100,
            seed: 7,
            oracle_only: false,
            amplitudes: false,
            recorded_samples: DEFAULT_RECORDED_SAMPLES,
            path_samples: crate::coupling::DEFAULT_PATH_SAMPLES,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Relative paths inside the file resolve against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_toml_str(&std::fs::read_to_string(path)?)?;
        if let Some(dir) = path.parent() {
            if cfg.out.is_relative() && cfg.out != Self::default().out {
                cfg.out = dir.join(&cfg.out);
            }
            if let Some(net) = cfg.network.as_mut().filter(|n| n.is_relative()) {
                *net = dir.join(&*net);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega_max", self.omega_max)?;
        positive("beta0", self.beta0)?;
        positive("z_max", self.z_max)?;
        if let Some(a) = self.alpha {
            positive("alpha", a)?;
        }
        if let Some(n) = self.steps {
            if n < MIN_STEPS {
                return Err(Error::TooFewSteps(n));
            }
        }
        if !(0.0..1.0).contains(&self.ratio) {
            return Err(Error::InvalidReflectivity(self.ratio));
        }
        if !matches!(self.input_mode, 1 | 2) {
            return Err(Error::Config(format!("input_mode must be 1 or 2, got {}", self.input_mode)));
        }
        for &l in &self.lengths {
            positive("sweep length", l)?;
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be at least 1".into()));
        }
        if !self.bus_detuning.is_finite() {
            return Err(Error::Config("bus_detuning must be finite".into()));
        }
        Ok(())
    }

    pub fn slab(&self) -> Result<SlabParams> {
        SlabParams::new(self.beta0, self.omega_max)
    }

    pub fn gate_context(&self) -> Result<GateContext> {
        Ok(GateContext {
            slab: self.slab()?,
            method: self.method,
            steps: self.steps,
            bus_detuning: self.bus_detuning,
            recorded_samples: self.recorded_samples,
            ..GateContext::default()
        })
    }
}
