//! Bosonic occupation-number states at fixed total photon number.
//!
//! Mode 0 is the bus throughout the crate. States are labelled as digit
//! strings with the bus digit first, so `0110` is one photon in each of
//! waveguides 1 and 2.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Photons per mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockState(Vec<u8>);

impl FockState {
    pub fn new(occupations: Vec<u8>) -> Self {
        Self(occupations)
    }

    pub fn vacuum(mode_count: usize) -> Self {
        Self(vec![0; mode_count])
    }

    /// One photon in each listed mode; repeated modes stack.
    pub fn with_photons_in(mode_count: usize, modes: &[usize]) -> Result<Self> {
        let mut occ = vec![0u8; mode_count];
        for &m in modes {
            let slot = occ
                .get_mut(m)
                .ok_or(Error::ModeOutOfRange { index: m, mode_count })?;
            *slot += 1;
        }
        Ok(Self(occ))
    }

    pub fn occupations(&self) -> &[u8] {
        &self.0
    }

    pub fn occupation(&self, mode: usize) -> u8 {
        self.0[mode]
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    pub fn total_photons(&self) -> usize {
        self.0.iter().map(|&n| n as usize).sum()
    }

    /// Apply `a†_dest a_src`. Returns `None` when `src` is empty, otherwise
    /// the new state and the bosonic amplitude `sqrt(n_dest + 1) sqrt(n_src)`.
    pub fn hop(&self, dest: usize, src: usize) -> Result<Option<(FockState, f64)>> {
        let m = self.mode_count();
        for index in [dest, src] {
            if index >= m {
                return Err(Error::ModeOutOfRange { index, mode_count: m });
            }
        }
        if dest == src {
            return Err(Error::SameMode(dest));
        }
        let n_src = self.0[src];
        if n_src == 0 {
            return Ok(None);
        }
        let n_dest = self.0[dest];
        let mut occ = self.0.clone();
        occ[src] -= 1;
        occ[dest] += 1;
        let amp = (f64::from(n_dest) + 1.0).sqrt() * f64::from(n_src).sqrt();
        Ok(Some((FockState(occ), amp)))
    }

    /// Digit-string label, bus first.
    pub fn label(&self) -> Result<String> {
        self.0
            .iter()
            .map(|&n| {
                if n > 9 {
                    Err(Error::LabelOverflow(n))
                } else {
                    Ok(char::from(b'0' + n))
                }
            })
            .collect()
    }
}

impl FromStr for FockState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches('|').trim_end_matches(['>', '⟩']);
        if digits.is_empty() {
            return Err(Error::InvalidLabel(s.to_string()));
        }
        digits
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidLabel(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(FockState)
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.label() {
            Ok(label) => write!(f, "|{label}⟩"),
            Err(_) => {
                let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
                write!(f, "|{}⟩", parts.join(","))
            }
        }
    }
}

/// All states of `mode_count` modes holding exactly `total_photons`,
/// ordered lexicographically descending on the occupation vector.
#[derive(Clone, Debug)]
pub struct FockBasis {
    mode_count: usize,
    total_photons: usize,
    states: Vec<FockState>,
    index: HashMap<FockState, usize>,
}

impl FockBasis {
    pub fn enumerate(mode_count: usize, total_photons: usize) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::NoModes);
        }
        let total = u8::try_from(total_photons)
            .map_err(|_| Error::Config(format!("{total_photons} photons is too many")))?;
        let mut states = Vec::new();
        let mut occ = vec![0u8; mode_count];
        fill(&mut occ, 0, total, &mut states);
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self { mode_count, total_photons, states, index })
    }

    pub fn mode_count(&self) -> usize {
        self.mode_count
    }

    pub fn total_photons(&self) -> usize {
        self.total_photons
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &FockState {
        &self.states[i]
    }

    pub fn index_of(&self, state: &FockState) -> Option<usize> {
        self.index.get(state).copied()
    }

    /// Index of `state`, or an error naming the label when it is not in
    /// this sector.
    pub fn require(&self, state: &FockState) -> Result<usize> {
        self.index_of(state)
            .ok_or_else(|| Error::InvalidLabel(state.to_string()))
    }

    pub fn basis_vector(&self, state: &FockState) -> Result<DVector<C64>> {
        let i = self.require(state)?;
        let mut v = DVector::zeros(self.len());
        v[i] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn labels(&self) -> Result<Vec<String>> {
        self.states.iter().map(FockState::label).collect()
    }

    /// Matrix of `a†_dest a_src` over the basis.
    pub fn hopping_matrix(&self, dest: usize, src: usize) -> Result<DMatrix<f64>> {
        let n = self.len();
        let mut out = DMatrix::zeros(n, n);
        for (col, s) in self.states.iter().enumerate() {
            if let Some((t, amp)) = s.hop(dest, src)? {
                out[(self.index[&t], col)] += amp;
            }
        }
        Ok(out)
    }

    /// Expected photon number in `mode` for the given amplitudes.
    pub fn mode_population(&self, amplitudes: &DVector<C64>, mode: usize) -> f64 {
        self.states
            .iter()
            .zip(amplitudes.iter())
            .map(|(s, a)| f64::from(s.occupation(mode)) * a.norm_sqr())
            .sum()
    }
}

fn fill(occ: &mut [u8], pos: usize, left: u8, out: &mut Vec<FockState>) {
    if pos + 1 == occ.len() {
        occ[pos] = left;
        out.push(FockState(occ.to_vec()));
        return;
    }
    for n in (0..=left).rev() {
        occ[pos] = n;
        fill(occ, pos + 1, left - n, out);
    }
    occ[pos] = 0;
}
