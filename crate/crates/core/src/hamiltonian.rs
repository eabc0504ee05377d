//! Tight-binding Hamiltonian of waveguides coupled only through the bus,
//! restricted to a fixed-photon-number sector.
//!
//! `H(z) = sum_i delta_i n_i + sum_{i>0} Omega_i(z) (a0† a_i + a_i† a0)`
//!
//! Propagation constants enter as offsets `delta_i` from a common reference
//! (the interaction picture), all zero by default. Every coefficient is
//! real, so `H` is real symmetric.

use std::fmt::Write as _;
use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::coupling::CouplingSchedule;
use crate::error::{Error, Result};
use crate::fock::{FockBasis, FockState};

pub const BUS: usize = 0;

/// Eigenvalues below this magnitude are treated as null.
pub const NULL_THRESHOLD: f64 = 1e-10;

#[derive(Clone, Debug)]
struct Hop {
    /// Basis index with the photon moved into the bus.
    row: usize,
    col: usize,
    amp: f64,
}

#[derive(Clone, Debug)]
pub struct HamiltonianModel {
    basis: FockBasis,
    schedule: CouplingSchedule,
    detunings: Vec<f64>,
    /// `hops[i - 1]` lists the non-zero entries of `a0† a_i`.
    hops: Vec<Vec<Hop>>,
    diagonal: Vec<f64>,
    bus_occupation: Vec<f64>,
}

impl HamiltonianModel {
    /// Degenerate modes (`delta_i = 0`). The schedule must cover modes
    /// `1..mode_count`.
    pub fn new(basis: FockBasis, schedule: CouplingSchedule) -> Result<Self> {
        let m = basis.mode_count();
        if schedule.waveguide_count() + 1 != m {
            return Err(Error::DimensionMismatch {
                expected: m - 1,
                found: schedule.waveguide_count(),
            });
        }
        let mut hops = Vec::with_capacity(m - 1);
        for wg in 1..m {
            let mut entries = Vec::new();
            for (col, s) in basis.states().iter().enumerate() {
                if let Some((t, amp)) = s.hop(BUS, wg)? {
                    let row = basis.require(&t)?;
                    entries.push(Hop { row, col, amp });
                }
            }
            hops.push(entries);
        }
        let bus_occupation = basis
            .states()
            .iter()
            .map(|s| f64::from(s.occupation(BUS)))
            .collect();
        let mut model = Self {
            diagonal: vec![0.0; basis.len()],
            detunings: vec![0.0; m],
            basis,
            schedule,
            hops,
            bus_occupation,
        };
        model.refresh_diagonal();
        Ok(model)
    }

    /// Per-mode propagation-constant offsets, bus first.
    pub fn with_detunings(mut self, detunings: Vec<f64>) -> Result<Self> {
        if detunings.len() != self.mode_count() {
            return Err(Error::DimensionMismatch {
                expected: self.mode_count(),
                found: detunings.len(),
            });
        }
        self.detunings = detunings;
        self.refresh_diagonal();
        Ok(self)
    }

    pub fn with_bus_detuning(self, delta0: f64) -> Result<Self> {
        let mut d = self.detunings.clone();
        d[BUS] = delta0;
        self.with_detunings(d)
    }

    fn refresh_diagonal(&mut self) {
        for (d, s) in self.diagonal.iter_mut().zip(self.basis.states()) {
            *d = s
                .occupations()
                .iter()
                .zip(&self.detunings)
                .map(|(&n, &delta)| f64::from(n) * delta)
                .sum();
        }
    }

    pub fn basis(&self) -> &FockBasis {
        &self.basis
    }

    pub fn schedule(&self) -> &CouplingSchedule {
        &self.schedule
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn mode_count(&self) -> usize {
        self.basis.mode_count()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn z_max(&self) -> f64 {
        self.schedule.z_max()
    }

    pub fn assemble(&self, z: f64) -> Result<DMatrix<f64>> {
        let z_max = self.z_max();
        let slack = 1e-12 * z_max;
        if !(z >= -slack && z <= z_max + slack) {
            return Err(Error::OutsideDevice { z, z_max });
        }
        let mut h = DMatrix::zeros(self.dim(), self.dim());
        self.assemble_into(z, &mut h);
        Ok(h)
    }

    /// Unchecked assembly into a preallocated matrix. Each coupling entry is
    /// written to both triangles, so the result is exactly symmetric.
    pub(crate) fn assemble_into(&self, z: f64, h: &mut DMatrix<f64>) {
        h.fill(0.0);
        for (k, d) in self.diagonal.iter().enumerate() {
            h[(k, k)] = *d;
        }
        for (i, entries) in self.hops.iter().enumerate() {
            let omega = self.schedule.coupling(i + 1, z);
            if omega == 0.0 {
                continue;
            }
            for hop in entries {
                let v = omega * hop.amp;
                h[(hop.row, hop.col)] += v;
                h[(hop.col, hop.row)] += v;
            }
        }
    }

    pub(crate) fn bus_occupation(&self) -> &[f64] {
        &self.bus_occupation
    }
}

/// Plain-text dump of `h` with complex entries written as `re+imi`.
pub fn format_matrix(h: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for r in 0..h.nrows() {
        let row: Vec<String> = (0..h.ncols()).map(|c| format!("{}+0i", h[(r, c)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// One-photon dark and bright states over waveguides {1, 2}, each as the
/// two amplitudes on modes 1 and 2.
pub fn dark_bright_one_photon(omega1: f64, omega2: f64) -> Result<(DVector<f64>, DVector<f64>)> {
    let norm = omega1.hypot(omega2);
    if norm == 0.0 {
        return Err(Error::DegenerateCouplings);
    }
    let dark = DVector::from_vec(vec![omega2 / norm, -omega1 / norm]);
    let bright = DVector::from_vec(vec![omega1 / norm, omega2 / norm]);
    Ok((dark, bright))
}

/// The two-photon, four-mode sector the closed-form null vectors live in.
pub fn two_photon_basis() -> FockBasis {
    FockBasis::enumerate(4, 2).expect("four modes is a valid basis")
}

/// Closed-form (unnormalised) null vectors of the two-photon, three-waveguide
/// Hamiltonian with degenerate modes, anchored on `|2000⟩`, `|0200⟩`,
/// `|0020⟩` and `|0002⟩` respectively. Amplitudes follow the ordering of
/// [`two_photon_basis`].
pub fn two_photon_null_vectors(omega1: f64, omega2: f64, omega3: f64) -> Result<[DVector<f64>; 4]> {
    for (i, o) in [omega1, omega2, omega3].into_iter().enumerate() {
        if o == 0.0 {
            return Err(Error::SingularNullFormula(i + 1));
        }
    }
    let basis = two_photon_basis();
    let (o1, o2, o3) = (omega1, omega2, omega3);
    let (s1, s2, s3) = (o1 * o1, o2 * o2, o3 * o3);
    let r = SQRT_2;
    let build = |terms: [(&str, f64); 4]| -> DVector<f64> {
        let mut v = DVector::zeros(basis.len());
        for (label, c) in terms {
            let s: FockState = label.parse().expect("static label");
            v[basis.index_of(&s).expect("state in sector")] = c;
        }
        v
    };
    Ok([
        build([
            ("0011", -(-s1 + s2 + s3) / (r * o2 * o3)),
            ("0101", -(s1 - s2 + s3) / (r * o1 * o3)),
            ("0110", -(s1 + s2 - s3) / (r * o1 * o2)),
            ("2000", 1.0),
        ]),
        build([
            ("0011", s1 / (r * o2 * o3)),
            ("0101", -o1 / (r * o3)),
            ("0110", -o1 / (r * o2)),
            ("0200", 1.0),
        ]),
        build([
            ("0011", -o2 / (r * o3)),
            ("0101", s2 / (r * o1 * o3)),
            ("0110", -o2 / (r * o1)),
            ("0020", 1.0),
        ]),
        build([
            ("0011", -o3 / (r * o2)),
            ("0101", -o3 / (r * o1)),
            ("0110", s3 / (r * o1 * o2)),
            ("0002", 1.0),
        ]),
    ])
}

/// Orthonormal eigenvectors of `h` whose eigenvalues are below
/// [`NULL_THRESHOLD`] in magnitude.
pub fn numeric_null_space(h: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let eig = h.clone().symmetric_eigen();
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() < NULL_THRESHOLD)
        .map(|(i, _)| eig.eigenvectors.column(i).into_owned())
        .collect()
}
