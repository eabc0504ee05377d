//! Reference linear-optics model: a mode-space unitary lifted to the
//! N-photon sector through matrix permanents. Shares nothing with the ODE
//! path besides the Fock basis.

use nalgebra::{DMatrix, DVector, Dim, Matrix, Matrix2, RawStorage};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::FockBasis;

pub const MAX_PERMANENT_ORDER: usize = 8;

const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Largest entry modulus.
pub fn max_abs<R: Dim, C: Dim, S: RawStorage<C64, R, C>>(m: &Matrix<C64, R, C, S>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Single-photon transfer matrix over all modes; column `j` is the image of
/// `a_j†`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary(DMatrix<C64>);

impl ModeUnitary {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let n = matrix.nrows();
        let residual = max_abs(&(&matrix * matrix.adjoint() - DMatrix::<C64>::identity(n, n)));
        if residual > UNITARITY_TOLERANCE {
            return Err(Error::NotUnitary(residual));
        }
        Ok(Self(matrix))
    }

    pub fn identity(mode_count: usize) -> Self {
        Self(DMatrix::identity(mode_count, mode_count))
    }

    /// A real 2x2 gate on modes `(first, second)`, identity elsewhere.
    pub fn embed(gate: &Matrix2<f64>, first: usize, second: usize, mode_count: usize) -> Result<Self> {
        for index in [first, second] {
            if index >= mode_count {
                return Err(Error::ModeOutOfRange { index, mode_count });
            }
        }
        if first == second {
            return Err(Error::SameMode(first));
        }
        let mut m = DMatrix::identity(mode_count, mode_count);
        let idx = [first, second];
        for r in 0..2 {
            for c in 0..2 {
                m[(idx[r], idx[c])] = C64::new(gate[(r, c)], 0.0);
            }
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn mode_count(&self) -> usize {
        self.0.nrows()
    }

    /// `self` applied after `earlier`.
    pub fn then(&self, later: &ModeUnitary) -> Result<ModeUnitary> {
        ModeUnitary::new(&later.0 * &self.0)
    }
}

/// Ryser's inclusion-exclusion formula with Gray-code subset updates.
/// The permanent of an empty matrix is 1.
pub fn permanent(m: &DMatrix<C64>) -> Result<C64> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.ncols() });
    }
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    if n > MAX_PERMANENT_ORDER {
        return Err(Error::PermanentTooLarge(n));
    }
    let mut row_sums = vec![C64::new(0.0, 0.0); n];
    let mut total = C64::new(0.0, 0.0);
    let mut gray: u32 = 0;
    for k in 1u32..(1 << n) {
        let next = k ^ (k >> 1);
        let flipped = (gray ^ next).trailing_zeros() as usize;
        let adding = next & (1 << flipped) != 0;
        for (r, sum) in row_sums.iter_mut().enumerate() {
            if adding {
                *sum += m[(r, flipped)];
            } else {
                *sum -= m[(r, flipped)];
            }
        }
        gray = next;
        let product: C64 = row_sums.iter().product();
        if (n - next.count_ones() as usize).is_multiple_of(2) {
            total += product;
        } else {
            total -= product;
        }
    }
    Ok(total)
}

fn factorial(n: u8) -> f64 {
    (1..=u32::from(n)).map(f64::from).product()
}

/// Fock-sector image of `u`:
/// `<n'|Phi(U)|n> = Per(U[n', n]) / sqrt(prod n_i! prod n'_j!)`, where
/// `U[n', n]` repeats row `i` `n'_i` times and column `j` `n_j` times.
pub fn lift_unitary(u: &ModeUnitary, basis: &FockBasis) -> Result<DMatrix<C64>> {
    if u.mode_count() != basis.mode_count() {
        return Err(Error::DimensionMismatch { expected: basis.mode_count(), found: u.mode_count() });
    }
    let expand = |occ: &[u8]| -> Vec<usize> {
        occ.iter()
            .enumerate()
            .flat_map(|(mode, &n)| std::iter::repeat_n(mode, n as usize))
            .collect()
    };
    let weight = |occ: &[u8]| -> f64 { occ.iter().map(|&n| factorial(n)).product() };
    let dim = basis.len();
    let photons = basis.total_photons();
    let mut out = DMatrix::zeros(dim, dim);
    for (c, input) in basis.states().iter().enumerate() {
        let cols = expand(input.occupations());
        let w_in = weight(input.occupations());
        for (r, output) in basis.states().iter().enumerate() {
            let rows = expand(output.occupations());
            let sub = DMatrix::from_fn(photons, photons, |i, j| u.matrix()[(rows[i], cols[j])]);
            out[(r, c)] = permanent(&sub)? / (w_in * weight(output.occupations())).sqrt();
        }
    }
    Ok(out)
}

/// `|<a|b>|^2` for normalised states.
pub fn fidelity(a: &DVector<C64>, b: &DVector<C64>) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    if a.norm() == 0.0 || b.norm() == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(a.dotc(b).norm_sqr())
}
