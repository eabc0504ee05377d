//! Simulation of adiabatic-passage photonic gates whose waveguides talk to
//! each other only through a shared bus mode.
//!
//! Units are dimensionless: couplings are measured in `omega_max` and
//! propagation distance in `1 / omega_max`. Mode 0 is always the bus.
//!
//! The runnable examples in `examples/` are the quickest way in:
//!
//! | example | shows |
//! |---|---|
//! | `power_divider` | 50:50 adiabatic splitting of one photon |
//! | `x_gate`, `hadamard`, `third_splitter` | single-photon USB gates |
//! | `hong_ou_mandel` | two-photon bunching through the Hadamard gate |
//! | `null_space` | the two-photon dark subspace |
//! | `cnot_truth_table` | the five-gate coincidence-basis CNOT |
//! | `adiabaticity_sweep` | error against device length |
//! | `waveguide_geometry` | schedules inverted into waveguide paths |

pub mod coupling;
pub mod error;
pub mod experiments;
pub mod fock;
pub mod gates;
pub mod hamiltonian;
pub mod network;
pub mod oracle;
pub mod propagator;

pub use coupling::{CouplingSchedule, Profile, SlabParams, WaveguidePath};
pub use error::{Error, Result};
pub use fock::{FockBasis, FockState};
pub use gates::{alpha_for_reflectivity, gate_matrix, run_gate, GateContext, GateSpec, Sign};
pub use hamiltonian::HamiltonianModel;
pub use network::{classify_outcome, run_network, run_network_oracle, CircuitNetwork, Designation, Roles};
pub use oracle::{fidelity, lift_unitary, permanent, ModeUnitary};
pub use propagator::{endpoint_map, evolve, EvolutionTrace, IntegratorConfig, Method};
