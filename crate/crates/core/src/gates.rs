//! USB gates: two adiabatic passages through the bus with a sign change on
//! the auxiliary coupling between them.

use nalgebra::{DVector, Matrix2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::coupling::{positive, CouplingSchedule, SlabParams};
use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::hamiltonian::{HamiltonianModel, BUS};
use crate::oracle::ModeUnitary;
use crate::propagator::{evolve, EvolutionTrace, IntegratorConfig, Method};

/// Adiabatic length used when nothing else is configured, in units of
/// `1 / omega_max`.
pub const DEFAULT_GATE_LENGTH: f64 = 300.0;

/// Sign of the second waveguide's coupling relative to the first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Sign {
    #[default]
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            _ => Err(format!("sign must be 1 or -1, got {v}")),
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// `G = [[a^2 - 1, -2 s a], [-2 s a, 1 - a^2]] / (1 + a^2)`.
pub fn gate_matrix(alpha: f64, sign: Sign) -> Matrix2<f64> {
    let a2 = alpha * alpha;
    let off = -2.0 * alpha * sign.value();
    Matrix2::new(a2 - 1.0, off, off, 1.0 - a2) / (1.0 + a2)
}

/// Coupling ratio whose gate leaves a photon in its input mode with
/// probability `r`.
pub fn alpha_for_reflectivity(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidReflectivity(r));
    }
    let theta = r.sqrt().acos();
    Ok((theta / 2.0).tan())
}

/// Inverse of [`alpha_for_reflectivity`].
pub fn reflectivity(alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    ((1.0 - a2) / (1.0 + a2)).powi(2)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub alpha: f64,
    pub sign: Sign,
    /// Qubit modes; the first is driven by the reference coupling.
    pub modes: [usize; 2],
    pub aux: usize,
    pub z_max: f64,
}

impl GateSpec {
    pub fn new(alpha: f64, sign: Sign, modes: [usize; 2], aux: usize, z_max: f64) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("z_max", z_max)?;
        let all = [BUS, modes[0], modes[1], aux];
        for (i, a) in all.iter().enumerate() {
            if all[i + 1..].contains(a) {
                return Err(Error::SameMode(*a));
            }
        }
        Ok(Self { alpha, sign, modes, aux, z_max })
    }

    pub fn from_reflectivity(r: f64, sign: Sign, modes: [usize; 2], aux: usize, z_max: f64) -> Result<Self> {
        Self::new(alpha_for_reflectivity(r)?, sign, modes, aux, z_max)
    }

    pub fn reflectivity(&self) -> f64 {
        reflectivity(self.alpha)
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        gate_matrix(self.alpha, self.sign)
    }

    /// Gate schedule over all `mode_count` modes, everything else decoupled.
    pub fn schedule(&self, mode_count: usize, slab: &SlabParams) -> Result<CouplingSchedule> {
        CouplingSchedule::usb_gate(self.alpha, self.sign.value(), self.z_max, slab)?
            .embed(mode_count, &[self.modes[0], self.modes[1], self.aux])
    }

    /// Analytic mode transformation: `G` on the qubit pair, identity on
    /// every other mode.
    pub fn mode_unitary(&self, mode_count: usize) -> Result<ModeUnitary> {
        ModeUnitary::embed(&self.matrix(), self.modes[0], self.modes[1], mode_count)
    }
}

/// Everything a gate run needs besides the gate itself.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateContext {
    pub slab: SlabParams,
    pub method: Method,
    /// Step count per gate; `None` scales with the gate length.
    pub steps: Option<usize>,
    pub bus_detuning: f64,
    /// Largest bus or aux photon number accepted at gate start.
    pub occupancy_tolerance: f64,
    pub recorded_samples: usize,
}

impl Default for GateContext {
    fn default() -> Self {
        Self {
            slab: SlabParams::default(),
            method: Method::Rk4,
            steps: None,
            bus_detuning: 0.0,
            occupancy_tolerance: 1e-2,
            recorded_samples: crate::propagator::DEFAULT_RECORDED_SAMPLES,
        }
    }
}

impl GateContext {
    pub fn integrator(&self, z_max: f64) -> Result<IntegratorConfig> {
        let cfg = match self.steps {
            Some(n) => IntegratorConfig::new(self.method, n)?,
            None => IntegratorConfig::for_length(self.method, z_max, self.slab.omega_max),
        };
        Ok(cfg.with_recorded_samples(self.recorded_samples))
    }

    pub fn model(&self, gate: &GateSpec, basis: &FockBasis) -> Result<HamiltonianModel> {
        let schedule = gate.schedule(basis.mode_count(), &self.slab)?;
        HamiltonianModel::new(basis.clone(), schedule)?.with_bus_detuning(self.bus_detuning)
    }
}

/// Propagate `state` through the full adiabatic gate.
pub fn run_gate(
    state: &DVector<C64>,
    basis: &FockBasis,
    gate: &GateSpec,
    ctx: &GateContext,
) -> Result<EvolutionTrace> {
    if state.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), found: state.len() });
    }
    for (mode, name) in [(BUS, "bus"), (gate.aux, "aux")] {
        let n = basis.mode_population(state, mode);
        if n > ctx.occupancy_tolerance {
            return Err(Error::ProtocolViolation(format!(
                "{name} mode {mode} holds {n:.3e} photons at gate start"
            )));
        }
    }
    let model = ctx.model(gate, basis)?;
    let psi0 = state / C64::new(state.norm(), 0.0);
    evolve(&model, &psi0, &ctx.integrator(gate.z_max)?)
}
