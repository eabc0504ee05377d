//! One function per experiment. Each returns a [`ComparisonReport`] and its
//! CSV artifacts without touching the filesystem; [`ExperimentOutput::write`]
//! puts them on disk.

mod cnot;
mod config;
mod geometry;
mod nullcheck;
mod output;
mod report;
mod single;
mod sweep;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DVector, Matrix2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockState};
use crate::gates::{run_gate, GateContext, GateSpec};

pub use cnot::{cnot, TableRow, REFERENCE_TABLE};
pub use config::{ExperimentConfig, DEFAULT_SWEEP_LADDER};
pub use geometry::geometry;
pub use nullcheck::nullcheck;
pub use output::{amplitude_csv, geometry_csv, schedule_csv, trace_csv, Artifact, ExperimentOutput};
pub use report::{Check, CheckKind, ComparisonReport, Note};
pub use single::{divider, divider_infidelity, gate, hom};
pub use sweep::{gate_process_infidelity, sweep, SweepRow};

/// Population and table tolerance for single devices.
pub const POPULATION_TOLERANCE: f64 = 1e-3;
/// Table tolerance after the five CNOT gates.
pub const TABLE_TOLERANCE: f64 = 1e-2;
pub const ORACLE_TABLE_TOLERANCE: f64 = 1e-10;
pub const MIN_ORACLE_FIDELITY: f64 = 0.999;
pub const MAX_NORM_DRIFT: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Divider,
    Gate,
    Hom,
    Cnot,
    Sweep,
    Nullcheck,
    Geometry,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Divider,
        Experiment::Gate,
        Experiment::Hom,
        Experiment::Cnot,
        Experiment::Sweep,
        Experiment::Nullcheck,
        Experiment::Geometry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Divider => "divider",
            Experiment::Gate => "gate",
            Experiment::Hom => "hom",
            Experiment::Cnot => "cnot",
            Experiment::Sweep => "sweep",
            Experiment::Nullcheck => "nullcheck",
            Experiment::Geometry => "geometry",
        }
    }

    pub fn run(self, cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
        cfg.validate()?;
        match self {
            Experiment::Divider => divider(cfg),
            Experiment::Gate => gate(cfg),
            Experiment::Hom => hom(cfg),
            Experiment::Cnot => cnot(cfg),
            Experiment::Sweep => sweep(cfg),
            Experiment::Nullcheck => nullcheck(cfg),
            Experiment::Geometry => geometry(cfg),
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment {s:?}")))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn photon_in(basis: &FockBasis, modes: &[usize]) -> Result<FockState> {
    FockState::with_photons_in(basis.mode_count(), modes)
}

/// Population of the state with photons in `modes`.
fn population(basis: &FockBasis, amps: &DVector<C64>, modes: &[usize]) -> Result<f64> {
    Ok(amps[basis.require(&photon_in(basis, modes)?)?].norm_sqr())
}

/// One-photon transfer block of a gate on its qubit pair, from two runs,
/// and the largest bus population seen in either.
fn gate_block(gate: &GateSpec, ctx: &GateContext) -> Result<(Matrix2<C64>, f64)> {
    let basis = FockBasis::enumerate(4, 1)?;
    let mut block = Matrix2::zeros();
    let mut bus: f64 = 0.0;
    for (c, &mode) in gate.modes.iter().enumerate() {
        let psi0 = basis.basis_vector(&photon_in(&basis, &[mode])?)?;
        let trace = run_gate(&psi0, &basis, gate, ctx)?;
        for (r, &out) in gate.modes.iter().enumerate() {
            block[(r, c)] = trace.final_state()[basis.require(&photon_in(&basis, &[out])?)?];
        }
        bus = bus.max(trace.max_bus_population());
    }
    Ok((block, bus))
}

/// `|Tr(G^T U)|^2 / 4` for a real target `G`.
fn process_fidelity(u: &Matrix2<C64>, g: &Matrix2<f64>) -> f64 {
    let overlap: C64 = g.iter().zip(u.iter()).map(|(a, b)| b * *a).sum();
    overlap.norm_sqr() / 4.0
}

/// Largest entry deviation of `u` from `g` after removing the best global
/// phase.
fn phase_aligned_deviation(u: &Matrix2<C64>, g: &Matrix2<f64>) -> f64 {
    let overlap: C64 = g.iter().zip(u.iter()).map(|(a, b)| b * *a).sum();
    let phase = if overlap.norm() > 0.0 { overlap.conj() / overlap.norm() } else { C64::new(1.0, 0.0) };
    u.iter()
        .zip(g.iter())
        .map(|(a, b)| (a * phase - b).norm())
        .fold(0.0, f64::max)
}

fn coupling_lengths(z_max: f64, omega_max: f64) -> f64 {
    z_max * omega_max / std::f64::consts::PI
}
