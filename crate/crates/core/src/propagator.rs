//! Integration of `i dψ/dz = H(z) ψ` along the device.
//!
//! Two independent schemes are provided so every run can be cross-checked:
//!
//! * [`Method::Rk4`]: classical fixed-step fourth-order Runge-Kutta.
//! * [`Method::Expm`]: products of exact exponentials of piecewise-constant
//!   Hamiltonians. Each step applies two exponentials of real-symmetric
//!   combinations of `H` sampled at the two Gauss points (the fourth-order
//!   commutator-free Magnus scheme), each evaluated through a symmetric
//!   eigendecomposition. The scheme is exactly unitary.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::FockBasis;
use crate::hamiltonian::{HamiltonianModel, NULL_THRESHOLD};

pub const MIN_STEPS: usize = 100;

/// Default resolution: steps per unit of `z * omega_max`.
pub const STEPS_PER_UNIT_LENGTH: f64 = 80.0;

pub const DEFAULT_RECORDED_SAMPLES: usize = 2000;

/// Norm drift beyond which a run is rejected.
pub const MAX_NORM_DRIFT: f64 = 1e-6;

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Rk4,
    Expm,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rk4" => Ok(Method::Rk4),
            "expm" => Ok(Method::Expm),
            other => Err(Error::Config(format!("unknown integration method {other:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Rk4 => "rk4",
            Method::Expm => "expm",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub steps: usize,
    /// Upper bound on the number of samples kept in a trace (the final
    /// point is always kept). Diagnostics use every step regardless.
    pub recorded_samples: usize,
}

impl IntegratorConfig {
    pub fn new(method: Method, steps: usize) -> Result<Self> {
        if steps < MIN_STEPS {
            return Err(Error::TooFewSteps(steps));
        }
        Ok(Self { method, steps, recorded_samples: DEFAULT_RECORDED_SAMPLES })
    }

    /// Default resolution for a device of length `z_max`.
    pub fn for_length(method: Method, z_max: f64, omega_max: f64) -> Self {
        let steps = (STEPS_PER_UNIT_LENGTH * z_max * omega_max).ceil() as usize;
        Self {
            method,
            steps: steps.max(MIN_STEPS),
            recorded_samples: DEFAULT_RECORDED_SAMPLES,
        }
    }

    pub fn with_recorded_samples(mut self, samples: usize) -> Self {
        self.recorded_samples = samples.max(1);
        self
    }

    fn stride(&self) -> usize {
        self.steps.div_ceil(self.recorded_samples.max(1)).max(1)
    }
}

/// Amplitudes along the device plus per-step diagnostics.
#[derive(Clone, Debug)]
pub struct EvolutionTrace {
    basis: FockBasis,
    pub z: Vec<f64>,
    pub amplitudes: Vec<DVector<C64>>,
    pub norm: Vec<f64>,
    /// Expected photon number in the bus at each recorded sample.
    pub bus_population: Vec<f64>,
    max_bus_population: f64,
    max_norm_drift: f64,
    max_populations: Vec<f64>,
    steps: usize,
}

impl EvolutionTrace {
    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn final_state(&self) -> &DVector<C64> {
        self.amplitudes.last().expect("trace holds the initial state")
    }

    pub fn populations_at(&self, sample: usize) -> Vec<f64> {
        self.amplitudes[sample].iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn final_populations(&self) -> Vec<f64> {
        self.populations_at(self.amplitudes.len() - 1)
    }

    /// Recorded sample nearest to `z`.
    pub fn sample_near(&self, z: f64) -> usize {
        self.z
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).abs().total_cmp(&(b.1 - z).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }

    /// Largest bus population over every integration step.
    pub fn max_bus_population(&self) -> f64 {
        self.max_bus_population
    }

    /// Largest `| |ψ| - 1 |` over every integration step.
    pub fn max_norm_drift(&self) -> f64 {
        self.max_norm_drift
    }

    /// Largest population of basis state `index` over every step.
    pub fn max_population(&self, index: usize) -> f64 {
        self.max_populations[index]
    }

    /// Join consecutive traces, shifting each one's `z` to start where the
    /// previous ended.
    pub fn concat(traces: &[EvolutionTrace]) -> Option<EvolutionTrace> {
        let first = traces.first()?;
        let mut out = first.clone();
        for t in &traces[1..] {
            let offset = *out.z.last().unwrap_or(&0.0);
            out.z.extend(t.z.iter().skip(1).map(|z| z + offset));
            out.amplitudes.extend(t.amplitudes.iter().skip(1).cloned());
            out.norm.extend(t.norm.iter().skip(1));
            out.bus_population.extend(t.bus_population.iter().skip(1));
            out.max_bus_population = out.max_bus_population.max(t.max_bus_population);
            out.max_norm_drift = out.max_norm_drift.max(t.max_norm_drift);
            for (m, v) in out.max_populations.iter_mut().zip(&t.max_populations) {
                *m = m.max(*v);
            }
            out.steps += t.steps;
        }
        Some(out)
    }
}

fn to_complex(h: &DMatrix<f64>) -> DMatrix<C64> {
    h.map(|x| C64::new(x, 0.0))
}

/// `-i * h * psi`
fn derivative(h: &DMatrix<C64>, psi: &DMatrix<C64>) -> DMatrix<C64> {
    (h * psi).map(|a| C64::new(a.im, -a.re))
}

/// `exp(-i dz S) psi` for real symmetric `S`.
fn apply_exponential(s: DMatrix<f64>, dz: f64, psi: &DMatrix<C64>) -> DMatrix<C64> {
    let eig = s.symmetric_eigen();
    let v = to_complex(&eig.eigenvectors);
    let mut w = v.adjoint() * psi;
    for (r, lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = C64::from_polar(1.0, -lambda * dz);
        for c in 0..w.ncols() {
            w[(r, c)] *= phase;
        }
    }
    v * w
}

const CF4_NODE_LO: f64 = 0.5 - 0.288_675_134_594_812_9; // 1/2 - sqrt(3)/6
const CF4_NODE_HI: f64 = 0.5 + 0.288_675_134_594_812_9;
const CF4_WEIGHT_BIG: f64 = 0.25 + 0.288_675_134_594_812_9; // 1/4 + sqrt(3)/6
const CF4_WEIGHT_SMALL: f64 = 0.25 - 0.288_675_134_594_812_9;

/// Advance the columns of `psi` over the whole device, calling `observe`
/// after every step with the step index (1-based) and `z`.
fn integrate<F>(
    model: &HamiltonianModel,
    mut psi: DMatrix<C64>,
    config: &IntegratorConfig,
    mut observe: F,
) -> DMatrix<C64>
where
    F: FnMut(usize, f64, &DMatrix<C64>),
{
    let n = model.dim();
    let dz = model.z_max() / config.steps as f64;
    let mut scratch = DMatrix::zeros(n, n);
    let h_at = |z: f64, out: &mut DMatrix<f64>| model.assemble_into(z, out);
    match config.method {
        Method::Rk4 => {
            h_at(0.0, &mut scratch);
            let mut h_start = to_complex(&scratch);
            for step in 0..config.steps {
                let z = step as f64 * dz;
                h_at(z + 0.5 * dz, &mut scratch);
                let h_mid = to_complex(&scratch);
                h_at(z + dz, &mut scratch);
                let h_end = to_complex(&scratch);
                let k1 = derivative(&h_start, &psi);
                let k2 = derivative(&h_mid, &(&psi + &k1 * C64::from(0.5 * dz)));
                let k3 = derivative(&h_mid, &(&psi + &k2 * C64::from(0.5 * dz)));
                let k4 = derivative(&h_end, &(&psi + &k3 * C64::from(dz)));
                psi += (k1 + (k2 + k3) * C64::from(2.0) + k4) * C64::from(dz / 6.0);
                h_start = h_end;
                observe(step + 1, z + dz, &psi);
            }
        }
        Method::Expm => {
            let mut h_lo = DMatrix::zeros(n, n);
            let mut h_hi = DMatrix::zeros(n, n);
            for step in 0..config.steps {
                let z = step as f64 * dz;
                h_at(z + CF4_NODE_LO * dz, &mut h_lo);
                h_at(z + CF4_NODE_HI * dz, &mut h_hi);
                let first = &h_lo * CF4_WEIGHT_BIG + &h_hi * CF4_WEIGHT_SMALL;
                let second = &h_lo * CF4_WEIGHT_SMALL + &h_hi * CF4_WEIGHT_BIG;
                psi = apply_exponential(first, dz, &psi);
                psi = apply_exponential(second, dz, &psi);
                observe(step + 1, z + dz, &psi);
            }
        }
    }
    psi
}

pub fn evolve(
    model: &HamiltonianModel,
    psi0: &DVector<C64>,
    config: &IntegratorConfig,
) -> Result<EvolutionTrace> {
    if psi0.len() != model.dim() {
        return Err(Error::DimensionMismatch { expected: model.dim(), found: psi0.len() });
    }
    let norm0 = psi0.norm();
    if (norm0 - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(Error::NotNormalized(norm0));
    }
    if config.steps < MIN_STEPS {
        return Err(Error::TooFewSteps(config.steps));
    }

    let bus = model.bus_occupation();
    let bus_pop = |v: &DMatrix<C64>| -> f64 {
        v.iter().zip(bus).map(|(a, n)| n * a.norm_sqr()).sum()
    };
    let stride = config.stride();
    let start = DMatrix::from_column_slice(psi0.len(), 1, psi0.as_slice());

    let mut trace = EvolutionTrace {
        basis: model.basis().clone(),
        z: vec![0.0],
        amplitudes: vec![psi0.clone()],
        norm: vec![norm0],
        bus_population: vec![bus_pop(&start)],
        max_bus_population: bus_pop(&start),
        max_norm_drift: (norm0 - 1.0).abs(),
        max_populations: psi0.iter().map(|a| a.norm_sqr()).collect(),
        steps: config.steps,
    };

    integrate(model, start, config, |step, z, psi| {
        let norm = psi.norm();
        let b = bus_pop(psi);
        trace.max_norm_drift = trace.max_norm_drift.max((norm - 1.0).abs());
        trace.max_bus_population = trace.max_bus_population.max(b);
        for (m, a) in trace.max_populations.iter_mut().zip(psi.iter()) {
            *m = m.max(a.norm_sqr());
        }
        if step % stride == 0 || step == config.steps {
            trace.z.push(z);
            trace.amplitudes.push(DVector::from_column_slice(psi.as_slice()));
            trace.norm.push(norm);
            trace.bus_population.push(b);
        }
    });

    if let Some(last) = trace.z.last_mut() {
        *last = model.z_max();
    }
    if trace.max_norm_drift > MAX_NORM_DRIFT {
        return Err(Error::IntegrationFailure { drift: trace.max_norm_drift, steps: config.steps });
    }
    Ok(trace)
}

/// Evolution operator over the sector: column `k` is the evolved basis
/// state `k`.
pub fn endpoint_map(model: &HamiltonianModel, config: &IntegratorConfig) -> Result<DMatrix<C64>> {
    if config.steps < MIN_STEPS {
        return Err(Error::TooFewSteps(config.steps));
    }
    let u = integrate(model, DMatrix::identity(model.dim(), model.dim()), config, |_, _, _| {});
    let drift = u
        .column_iter()
        .map(|c| (c.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    if drift > MAX_NORM_DRIFT {
        return Err(Error::IntegrationFailure { drift, steps: config.steps });
    }
    Ok(u)
}

/// Largest deviation of a singular value of `u` from 1.
pub fn unitarity_residual(u: &DMatrix<C64>) -> f64 {
    u.clone()
        .singular_values()
        .iter()
        .map(|s| (s - 1.0).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdiabaticityReport {
    pub max_bus_population: f64,
    /// Largest weight, over the sampled points, of the state outside the
    /// instantaneous null space of `H(z)`.
    pub max_non_null_population: f64,
    /// Weight outside the null space of `H(z_max)` at the end.
    pub end_leakage: f64,
}

/// At most this many trace samples are diagonalised.
const ADIABATICITY_SAMPLES: usize = 400;

pub fn adiabaticity_report(trace: &EvolutionTrace, model: &HamiltonianModel) -> AdiabaticityReport {
    let count = trace.z.len();
    let stride = count.div_ceil(ADIABATICITY_SAMPLES).max(1);
    let mut h = DMatrix::zeros(model.dim(), model.dim());
    let mut non_null_at = |k: usize| -> f64 {
        model.assemble_into(trace.z[k].clamp(0.0, model.z_max()), &mut h);
        let eig = h.clone().symmetric_eigen();
        let psi = &trace.amplitudes[k];
        let inside: f64 = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, l)| l.abs() < NULL_THRESHOLD)
            .map(|(i, _)| {
                let v = eig.eigenvectors.column(i);
                v.iter().zip(psi.iter()).map(|(e, a)| a * *e).sum::<C64>().norm_sqr()
            })
            .sum();
        (psi.norm_squared() - inside).max(0.0)
    };
    let mut max_non_null: f64 = 0.0;
    for k in (0..count).step_by(stride) {
        max_non_null = max_non_null.max(non_null_at(k));
    }
    let end_leakage = non_null_at(count - 1);
    AdiabaticityReport {
        max_bus_population: trace.max_bus_population(),
        max_non_null_population: max_non_null.max(end_leakage),
        end_leakage,
    }
}
