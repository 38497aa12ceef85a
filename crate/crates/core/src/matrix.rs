//! Dense square complex matrices used for the unitary operators of the
//! quantized torus.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

/// Tolerance on `‖M†M − I‖_max` for matrices built by this crate.
pub const UNITARITY_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major `D × D` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    /// Wraps row-major entries, rejecting anything further than `tol` from
    /// unitary.
    pub fn new(dim: usize, entries: Vec<Complex64>, tol: f64) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: entries.len(),
            });
        }
        let m = Self { dim, entries };
        let dev = m.unitarity_defect();
        if !(dev <= tol) {
            return Err(Error::NotUnitary(dev));
        }
        Ok(m)
    }

    pub(crate) fn from_raw(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub(crate) fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        Self::from_fn(diag.len(), |r, c| if r == c { diag[r] } else { ZERO })
    }

    /// Builds a matrix from its columns.
    pub(crate) fn from_columns(dim: usize, columns: impl IntoIterator<Item = Vec<Complex64>>) -> Self {
        let mut entries = vec![ZERO; dim * dim];
        for (c, col) in columns.into_iter().enumerate() {
            debug_assert_eq!(col.len(), dim);
            for (r, v) in col.into_iter().enumerate() {
                entries[r * dim + c] = v;
            }
        }
        Self { dim, entries }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.entries[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// Matrix product `self · rhs`. Zero entries of `self` are skipped, so
    /// block-diagonal left factors cost proportionally less.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions differ");
        let d = self.dim;
        let mut out = vec![ZERO; d * d];
        for (i, out_row) in out.chunks_exact_mut(d).enumerate() {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Self { dim: d, entries: out }
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length differs from matrix dimension");
        self.entries
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dims().dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: state.dims().dim(),
            });
        }
        Ok(StateVector::from_raw(state.dims(), self.matvec(state.amps())))
    }

    /// `‖M†M − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.entries[k * d + i].conj() * self.entries[k * d + j];
                }
                if i == j {
                    acc -= ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        crate::state::max_abs_diff(&self.entries, &other.entries)
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }
}
