//! Sequential gate networks sharing one bus and one auxiliary mode, and the
//! coincidence-basis CNOT built from them.

use std::path::Path;

use nalgebra::DVector;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockState};
use crate::gates::{alpha_for_reflectivity, reflectivity, run_gate, GateContext, GateSpec, Sign};
use crate::hamiltonian::BUS;
use crate::oracle::{lift_unitary, ModeUnitary};
use crate::propagator::EvolutionTrace;

/// Dual-rail mode assignment for a control and a target qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub c1: usize,
    pub c0: usize,
    pub t1: usize,
    pub t0: usize,
}

impl Roles {
    fn all(&self) -> [usize; 4] {
        [self.c1, self.c0, self.t1, self.t0]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitNetwork {
    mode_count: usize,
    aux: usize,
    gates: Vec<GateSpec>,
    roles: Option<Roles>,
}

impl CircuitNetwork {
    pub fn new(mode_count: usize, aux: usize, gates: Vec<GateSpec>, roles: Option<Roles>) -> Result<Self> {
        let net = Self { mode_count, aux, gates, roles };
        net.validate()?;
        Ok(net)
    }

    /// Eight-mode CNOT: bus 0, vacuum ancillas 1 and 6, control rails
    /// (C1, C0) = (2, 3), target rails (T1, T0) = (4, 5), aux 7.
    pub fn cnot_default(z_max: f64) -> Result<Self> {
        let half = alpha_for_reflectivity(0.5)?;
        let third = alpha_for_reflectivity(1.0 / 3.0)?;
        let aux = 7;
        let gate = |alpha, modes| GateSpec::new(alpha, Sign::Positive, modes, aux, z_max);
        let gates = vec![
            gate(half, [4, 5])?,
            gate(third, [1, 2])?,
            gate(third, [3, 4])?,
            gate(third, [5, 6])?,
            gate(half, [4, 5])?,
        ];
        Self::new(8, aux, gates, Some(Roles { c1: 2, c0: 3, t1: 4, t0: 5 }))
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidNetwork(msg));
        if self.mode_count < 4 {
            return bad(format!("need at least 4 modes, got {}", self.mode_count));
        }
        if self.aux == BUS || self.aux >= self.mode_count {
            return bad(format!("aux mode {} is not a waveguide mode", self.aux));
        }
        for (k, g) in self.gates.iter().enumerate() {
            if g.aux != self.aux {
                return bad(format!("gate {} uses aux {} instead of the shared aux {}", k + 1, g.aux, self.aux));
            }
            for m in g.modes {
                if m == BUS || m == self.aux || m >= self.mode_count {
                    return bad(format!("gate {} acts on unusable mode {m}", k + 1));
                }
            }
        }
        if let Some(roles) = self.roles {
            let all = roles.all();
            for (i, m) in all.iter().enumerate() {
                if *m == BUS || *m == self.aux || *m >= self.mode_count || all[i + 1..].contains(m) {
                    return bad(format!("role assignment {roles:?} is invalid"));
                }
            }
        }
        Ok(())
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn aux(&self) -> usize {
        self.aux
    }

    pub fn gates(&self) -> &[GateSpec] {
        &self.gates
    }

    pub fn roles(&self) -> Option<Roles> {
        self.roles
    }

    /// Replace every gate's length.
    pub fn with_length(mut self, z_max: f64) -> Result<Self> {
        for g in &mut self.gates {
            *g = GateSpec::new(g.alpha, g.sign, g.modes, g.aux, z_max)?;
        }
        Ok(self)
    }

    pub fn total_length(&self) -> f64 {
        self.gates.iter().map(|g| g.z_max).sum()
    }

    /// Product of the analytic gate matrices in execution order.
    pub fn mode_unitary(&self) -> Result<ModeUnitary> {
        self.gates.iter().try_fold(ModeUnitary::identity(self.mode_count), |acc, g| {
            acc.then(&g.mode_unitary(self.mode_count)?)
        })
    }

    /// Parse the TOML network format. Gates without a `length` get
    /// `default_length`.
    pub fn from_toml_str(text: &str, default_length: f64) -> Result<Self> {
        let file: NetworkFile = toml::from_str(text)?;
        let gates = file
            .gate
            .iter()
            .map(|g| {
                GateSpec::from_reflectivity(g.ratio, g.sign, g.modes, g.aux.unwrap_or(file.aux), g.length.unwrap_or(default_length))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.mode_count, file.aux, gates, file.roles)
    }

    pub fn load(path: &Path, default_length: f64) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?, default_length)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        let file = NetworkFile {
            mode_count: self.mode_count,
            aux: self.aux,
            roles: self.roles,
            gate: self
                .gates
                .iter()
                .map(|g| GateEntry {
                    ratio: reflectivity(g.alpha),
                    sign: g.sign,
                    modes: g.modes,
                    aux: None,
                    length: Some(g.z_max),
                })
                .collect(),
        };
        Ok(toml::to_string(&file)?)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkFile {
    mode_count: usize,
    aux: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    roles: Option<Roles>,
    #[serde(default)]
    gate: Vec<GateEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateEntry {
    /// Probability of staying in the input mode.
    ratio: f64,
    #[serde(default)]
    sign: Sign,
    modes: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aux: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    length: Option<f64>,
}

/// Probabilities below this are left out of outcome tables.
pub const OUTCOME_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Designation {
    Success,
    Failure,
}

impl std::fmt::Display for Designation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Designation::Success => "success",
            Designation::Failure => "failure",
        })
    }
}

/// Control bit, target bit.
fn logical(state: &FockState, roles: &Roles) -> Option<(bool, bool)> {
    let n = |m: usize| state.occupation(m);
    let others: usize = state.total_photons() - roles.all().iter().map(|&m| n(m) as usize).sum::<usize>();
    if others != 0 || n(roles.c1) + n(roles.c0) != 1 || n(roles.t1) + n(roles.t0) != 1 {
        return None;
    }
    Some((n(roles.c1) == 1, n(roles.t1) == 1))
}

/// A success is a coincidence event (one photon on each qubit's rails)
/// carrying the CNOT of the input's logical value.
pub fn classify_outcome(input: &FockState, outcome: &FockState, roles: &Roles) -> Designation {
    match (logical(input, roles), logical(outcome, roles)) {
        (Some((c, t)), Some(out)) if out == (c, t ^ c) => Designation::Success,
        _ => Designation::Failure,
    }
}

pub fn cnot_input(roles: &Roles, mode_count: usize, control: bool, target: bool) -> Result<FockState> {
    let c = if control { roles.c1 } else { roles.c0 };
    let t = if target { roles.t1 } else { roles.t0 };
    FockState::with_photons_in(mode_count, &[c, t])
}

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub label: String,
    pub probability: f64,
    pub designation: Option<Designation>,
}

/// Basis states above [`OUTCOME_FLOOR`], in basis order.
pub fn outcome_table(
    input: &FockState,
    basis: &FockBasis,
    state: &DVector<C64>,
    roles: Option<&Roles>,
) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    for (s, a) in basis.states().iter().zip(state.iter()) {
        let p = a.norm_sqr();
        if p > OUTCOME_FLOOR {
            out.push(Outcome {
                label: s.label()?,
                probability: p,
                designation: roles.map(|r| classify_outcome(input, s, r)),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct NetworkRun {
    pub basis: FockBasis,
    pub input: FockState,
    pub final_state: DVector<C64>,
    /// One trace per gate, in execution order.
    pub traces: Vec<EvolutionTrace>,
}

impl NetworkRun {
    pub fn outcomes(&self, roles: Option<&Roles>) -> Result<Vec<Outcome>> {
        outcome_table(&self.input, &self.basis, &self.final_state, roles)
    }

    /// All gate traces joined along `z`.
    pub fn trace(&self) -> Option<EvolutionTrace> {
        EvolutionTrace::concat(&self.traces)
    }
}

fn check_input(input: &FockState, network: &CircuitNetwork) -> Result<FockBasis> {
    if input.mode_count() != network.mode_count {
        return Err(Error::DimensionMismatch { expected: network.mode_count, found: input.mode_count() });
    }
    if input.occupation(BUS) != 0 || input.occupation(network.aux) != 0 {
        return Err(Error::ProtocolViolation(format!("input {input} occupies the bus or aux mode")));
    }
    FockBasis::enumerate(network.mode_count, input.total_photons())
}

/// Adiabatic evolution through every gate in turn.
pub fn run_network(input: &FockState, network: &CircuitNetwork, ctx: &GateContext) -> Result<NetworkRun> {
    let basis = check_input(input, network)?;
    let mut state = basis.basis_vector(input)?;
    let mut traces = Vec::with_capacity(network.gates.len());
    for gate in &network.gates {
        let trace = run_gate(&state, &basis, gate, ctx)?;
        state = trace.final_state().clone();
        traces.push(trace);
    }
    Ok(NetworkRun { basis, input: input.clone(), final_state: state, traces })
}

/// Analytic counterpart of [`run_network`]: the composed mode unitary
/// lifted to the input's photon-number sector.
pub fn run_network_oracle(input: &FockState, network: &CircuitNetwork) -> Result<(FockBasis, DVector<C64>)> {
    let basis = check_input(input, network)?;
    let lifted = lift_unitary(&network.mode_unitary()?, &basis)?;
    let state = lifted * basis.basis_vector(input)?;
    Ok((basis, state))
}
