//! The family of quantum baker's maps `B_n`, `n = 1…N`.
//!
//! `B_n` sends the dot state `|a_{N-n}…a_1.x_1…x_n⟩` to
//! `|a_{N-n}…a_1x_1.x_2…x_n⟩`. Since the dot states are the columns of `G_n`,
//! this is `B_n = G_{n-1} · Cyc_n · G_n†`, where `Cyc_n` rotates the first `n`
//! qubit slots one place to the left. `B_1 = G_0 G_1†` is the standard
//! symmetric baker's map; `B_N` acts on product states without entangling
//! them.

pub mod circuit;

use num_complex::Complex64;

use crate::classical::label_shift;
use crate::error::{Error, Result};
use crate::lattice::{Dimensions, DotLabel};
use crate::matrix::UnitaryMatrix;
use crate::qfourier::{
    dot_state_product, partial_transform, transform_with, AntiperiodicFft, Direction,
};
use crate::state::StateVector;

pub use circuit::{circuit_to_matrix, emit_circuit, Gate, GateList};

/// Image of basis index `j` under `Cyc_n`: the top `n` bits rotate left by
/// one, so slot 1 ends up in slot `n`.
#[inline]
pub fn cyclic_shift_index(qubits: usize, n: usize, j: usize) -> usize {
    debug_assert!(n >= 1 && n <= qubits);
    let low = qubits - n;
    let top = j >> low;
    let mask = (1usize << n) - 1;
    let rotated = ((top << 1) & mask) | (top >> (n - 1));
    (rotated << low) | (j & ((1usize << low) - 1))
}

/// Permutation matrix of `Cyc_n`.
pub fn cyclic_shift_operator(dims: Dimensions, n: usize) -> Result<UnitaryMatrix> {
    dims.check_dot(n, 1)?;
    let d = dims.dim();
    let mut m = UnitaryMatrix::from_raw(d, vec![Complex64::new(0.0, 0.0); d * d]);
    for j in 0..d {
        m.set(cyclic_shift_index(dims.qubits(), n, j), j, Complex64::new(1.0, 0.0));
    }
    Ok(m)
}

/// `B_n` assembled directly from its defining basis action,
/// `Σ_label |shifted label⟩⟨label|`, with the dot states built as tensor
/// products.
pub fn baker_from_basis_map(dims: Dimensions, n: usize) -> Result<UnitaryMatrix> {
    dims.check_dot(n, 1)?;
    let d = dims.dim();
    let mut acc = vec![Complex64::new(0.0, 0.0); d * d];
    for label in DotLabel::all(dims, n)? {
        let source = dot_state_product(&label);
        let target = dot_state_product(&label_shift(&label)?);
        let src: Vec<(usize, Complex64)> = nonzero(source.amps());
        for (r, t) in nonzero(target.amps()) {
            let row = &mut acc[r * d..(r + 1) * d];
            for &(c, s) in &src {
                row[c] += t * s.conj();
            }
        }
    }
    Ok(UnitaryMatrix::from_raw(d, acc))
}

fn nonzero(amps: &[Complex64]) -> Vec<(usize, Complex64)> {
    amps.iter()
        .enumerate()
        .filter(|(_, a)| **a != Complex64::new(0.0, 0.0))
        .map(|(i, a)| (i, *a))
        .collect()
}

/// `B_n = G_{n-1} · Cyc_n · G_n†`.
pub fn baker_composed(dims: Dimensions, n: usize) -> Result<UnitaryMatrix> {
    dims.check_dot(n, 1)?;
    let g_prev = partial_transform(dims, n - 1)?;
    let g_dag = partial_transform(dims, n)?.adjoint();
    let cyc = cyclic_shift_operator(dims, n)?;
    Ok(g_prev.mul(&cyc.mul(&g_dag)))
}

/// Dense `B_n` whose columns are images of basis states under
/// [`apply_baker_fast`]; `O(D²·N)`, for sizes where the dense products are
/// too slow.
pub fn baker_by_columns(dims: Dimensions, n: usize) -> Result<UnitaryMatrix> {
    dims.check_dot(n, 1)?;
    let mut stepper = BakerStepper::new(dims, n)?;
    let d = dims.dim();
    let columns = (0..d).map(|j| {
        let mut col = vec![Complex64::new(0.0, 0.0); d];
        col[j] = Complex64::new(1.0, 0.0);
        stepper.step(&mut col);
        col
    });
    Ok(UnitaryMatrix::from_columns(d, columns))
}

/// Single-qubit gate applied to the last slot by `B_N` after the cyclic shift:
/// `u = (1/√2)[[e^{-iπ/4}, e^{iπ/4}], [e^{iπ/4}, e^{-iπ/4}]]`, row-major.
pub fn last_qubit_unitary() -> [[Complex64; 2]; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let q = std::f64::consts::FRAC_PI_4;
    let minus = Complex64::from_polar(h, -q);
    let plus = Complex64::from_polar(h, q);
    [[minus, plus], [plus, minus]]
}

/// `B_N` as a cyclic shift of all slots followed by [`last_qubit_unitary`]
/// on slot `N`.
pub fn apply_baker_last(state: &StateVector) -> StateVector {
    let qubits = state.qubits();
    let src = state.amps();
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    for (j, &a) in src.iter().enumerate() {
        out[cyclic_shift_index(qubits, qubits, j)] = a;
    }
    let u = last_qubit_unitary();
    for pair in out.chunks_exact_mut(2) {
        let (a0, a1) = (pair[0], pair[1]);
        pair[0] = u[0][0] * a0 + u[0][1] * a1;
        pair[1] = u[1][0] * a0 + u[1][1] * a1;
    }
    StateVector::from_raw(state.dims(), out)
}

/// Reusable `O(D·N)` implementation of one `B_n` step.
pub struct BakerStepper {
    dims: Dimensions,
    n: usize,
    inverse: AntiperiodicFft,
    forward: AntiperiodicFft,
    scratch: Vec<Complex64>,
}

impl BakerStepper {
    pub fn new(dims: Dimensions, n: usize) -> Result<Self> {
        dims.check_dot(n, 1)?;
        let m = dims.qubits() - n;
        Ok(Self {
            dims,
            n,
            inverse: AntiperiodicFft::new(1 << m),
            forward: AntiperiodicFft::new(1 << (m + 1)),
            scratch: vec![Complex64::new(0.0, 0.0); dims.dim()],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Applies `G_n†`, then `Cyc_n`, then `G_{n-1}` in place.
    pub fn step(&mut self, amps: &mut [Complex64]) {
        assert_eq!(amps.len(), self.dims.dim(), "state length differs from stepper dimension");
        transform_with(&self.inverse, amps, Direction::Inverse);
        let qubits = self.dims.qubits();
        for (j, &a) in amps.iter().enumerate() {
            self.scratch[cyclic_shift_index(qubits, self.n, j)] = a;
        }
        amps.copy_from_slice(&self.scratch);
        transform_with(&self.forward, amps, Direction::Forward);
    }
}

/// One application of `B_n` in `O(D·N)`.
pub fn apply_baker_fast(state: &StateVector, n: usize) -> Result<StateVector> {
    if n == 0 || n > state.qubits() {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: state.qubits(),
        });
    }
    let mut stepper = BakerStepper::new(state.dims(), n)?;
    let mut out = state.clone();
    stepper.step(out.amps_mut());
    Ok(out)
}

/// Applies `B_n` `steps` times. `observe` sees the initial state as step 0 and
/// then every intermediate state in order.
pub fn iterate<F>(state: &StateVector, n: usize, steps: usize, mut observe: F) -> Result<StateVector>
where
    F: FnMut(usize, &StateVector),
{
    if n == 0 || n > state.qubits() {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: state.qubits(),
        });
    }
    let mut stepper = BakerStepper::new(state.dims(), n)?;
    let mut current = state.clone();
    observe(0, &current);
    for step in 1..=steps {
        stepper.step(current.amps_mut());
        observe(step, &current);
    }
    Ok(current)
}
