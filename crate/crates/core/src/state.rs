//! Normalized state vectors over `N` qubits.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::lattice::Dimensions;

/// Default normalization tolerance for states handed to the library.
pub const NORM_TOL: f64 = 1e-12;

/// Amplitudes `ψ_j = ⟨q_j|ψ⟩` over the `2^N` computational basis states,
/// slot 1 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    dims: Dimensions,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes whose norm is within [`NORM_TOL`] of one.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        Self::with_tolerance(amps, NORM_TOL)
    }

    /// Accepts amplitudes whose norm deviates from one by at most `tol`, then
    /// rescales them to unit norm.
    pub fn with_tolerance(mut amps: Vec<Complex64>, tol: f64) -> Result<Self> {
        let dims = dims_for_len(amps.len())?;
        let norm = norm_of(&amps);
        let dev = (norm - 1.0).abs();
        if !(dev <= tol) {
            return Err(Error::NotNormalized(dev));
        }
        if dev > 0.0 {
            let inv = 1.0 / norm;
            amps.iter_mut().for_each(|a| *a *= inv);
        }
        Ok(Self { dims, amps })
    }

    pub(crate) fn from_raw(dims: Dimensions, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), dims.dim());
        Self { dims, amps }
    }

    /// Computational basis state `|q_j⟩`.
    pub fn basis(dims: Dimensions, j: usize) -> Result<Self> {
        if j >= dims.dim() {
            return Err(Error::IndexOutOfRange {
                index: j,
                dim: dims.dim(),
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dims.dim()];
        amps[j] = Complex64::new(1.0, 0.0);
        Ok(Self { dims, amps })
    }

    /// Tensor product of single-qubit states, slot 1 first. Each factor is
    /// normalized before use.
    pub fn product(factors: &[[Complex64; 2]]) -> Result<Self> {
        let dims = Dimensions::new(factors.len())?;
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for f in factors {
            let norm = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
            if norm == 0.0 {
                return Err(Error::NotNormalized(1.0));
            }
            amps = kron(&amps, &[f[0] / norm, f[1] / norm]);
        }
        Ok(Self { dims, amps })
    }

    /// Complex Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(dims: Dimensions, rng: &mut R) -> Self {
        let mut amps: Vec<Complex64> = (0..dims.dim())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let inv = 1.0 / norm_of(&amps);
        amps.iter_mut().for_each(|a| *a *= inv);
        Self { dims, amps }
    }

    /// Product of independent random single-qubit states.
    pub fn random_product<R: Rng + ?Sized>(dims: Dimensions, rng: &mut R) -> Self {
        let factors: Vec<[Complex64; 2]> = (0..dims.qubits())
            .map(|_| {
                [
                    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
                    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)),
                ]
            })
            .collect();
        Self::product(&factors).expect("gaussian factors are nonzero")
    }

    #[inline]
    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.dims.qubits()
    }

    #[inline]
    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_of(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_same(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Largest entrywise modulus difference.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(max_abs_diff(&self.amps, &other.amps))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims.dim(),
                actual: other.dims.dim(),
            });
        }
        Ok(())
    }
}

fn dims_for_len(len: usize) -> Result<Dimensions> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Dimensions::new(len.trailing_zeros() as usize)
}

pub(crate) fn norm_of(amps: &[Complex64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Kronecker product of two amplitude vectors, `a` on the more significant slots.
pub(crate) fn kron(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}
