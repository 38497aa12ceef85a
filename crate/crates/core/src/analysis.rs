//! Localization, entanglement, spectral and quantum–classical correspondence
//! diagnostics.

use std::f64::consts::PI;

use nalgebra::linalg::{Schur, SVD};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::baker::apply_baker_fast;
use crate::classical::label_shift;
use crate::error::{Error, Result};
use crate::lattice::{bits_to_index, DotLabel};
use crate::matrix::UnitaryMatrix;
use crate::qfourier::{apply_partial_transform, dot_state_transform, Direction};
use crate::state::StateVector;

/// Amplitudes at or below this modulus count as outside the support.
pub const SUPPORT_TOL: f64 = 1e-12;

/// Indices `j` with `|ψ_j| > tol`.
pub fn position_support(state: &StateVector, tol: f64) -> Vec<usize> {
    state
        .amps()
        .iter()
        .enumerate()
        .filter(|(_, a)| a.norm() > tol)
        .map(|(j, _)| j)
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalizationReport {
    pub label: String,
    /// Position indices with modulus above [`SUPPORT_TOL`].
    pub support: Vec<usize>,
    /// Whether `support` is exactly the window selected by `x_1…x_n`.
    pub support_exact: bool,
    /// Largest modulus found outside that window.
    pub leakage: f64,
    /// `max | |ψ_j| − 2^{-(N-n)/2} |` over the window.
    pub uniform_modulus_dev: f64,
    /// Momentum probability inside the `2^n` indices led by `a_1…a_{N-n}`.
    pub window_mass: f64,
}

pub fn check_strict_localization(label: &DotLabel) -> LocalizationReport {
    let state = dot_state_transform(label);
    let m = label.abits().len();
    let n = label.n();
    let x_prefix = bits_to_index(label.xbits());
    let a_prefix = bits_to_index(label.abits());
    let expected_modulus = (-(m as f64) / 2.0).exp2();

    let mut leakage = 0.0f64;
    let mut uniform_modulus_dev = 0.0f64;
    for (j, a) in state.amps().iter().enumerate() {
        if j >> m == x_prefix {
            uniform_modulus_dev = uniform_modulus_dev.max((a.norm() - expected_modulus).abs());
        } else {
            leakage = leakage.max(a.norm());
        }
    }
    let support = position_support(&state, SUPPORT_TOL);
    let support_exact = support.len() == 1 << m && support.iter().all(|&j| j >> m == x_prefix);

    let momentum = apply_partial_transform(&state, 0, Direction::Inverse)
        .expect("n = 0 always fits");
    let window_mass = momentum
        .amps()
        .iter()
        .enumerate()
        .filter(|(k, _)| k >> n == a_prefix)
        .map(|(_, a)| a.norm_sqr())
        .sum::<f64>()
        .min(1.0);

    LocalizationReport {
        label: label.to_string(),
        support,
        support_exact,
        leakage,
        uniform_modulus_dev,
        window_mass,
    }
}

/// Base-2 entropy of the squared Schmidt coefficients across the cut between
/// slots `cut` and `cut + 1`.
pub fn schmidt_entropy(state: &StateVector, cut: usize) -> Result<f64> {
    let qubits = state.qubits();
    if cut == 0 || cut >= qubits {
        return Err(Error::CutOutOfRange { cut, qubits });
    }
    let rows = 1usize << cut;
    let cols = 1usize << (qubits - cut);
    let m = DMatrix::from_row_slice(rows, cols, state.amps());
    let svd = SVD::new(m, false, false);
    let weights: Vec<f64> = svd.singular_values.iter().map(|s| s * s).collect();
    Ok(shannon_bits(&weights))
}

pub(crate) fn shannon_bits(weights: &[f64]) -> f64 {
    let total: f64 = weights.iter().sum();
    let h: f64 = weights
        .iter()
        .map(|w| w / total)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Largest Schmidt entropy over all contiguous cuts.
pub fn max_contiguous_cut_entropy(state: &StateVector) -> Result<f64> {
    let qubits = state.qubits();
    if qubits < 2 {
        return Err(Error::CutOutOfRange { cut: 1, qubits });
    }
    (1..qubits).try_fold(0.0f64, |worst, cut| Ok(worst.max(schmidt_entropy(state, cut)?)))
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// Eigenphases in `[0, 2π)`, ascending.
    pub phases: Vec<f64>,
    /// `max | |λ| − 1 |`.
    pub unit_modulus_dev: f64,
    /// Circular nearest-neighbour gaps scaled to unit mean; entry `i` is the
    /// gap from phase `i` to the next one, wrapping at the end.
    pub spacings: Vec<f64>,
}

/// Tolerance on `‖U†U − I‖_max` accepted by [`eigenphases`].
pub const SPECTRUM_UNITARITY_TOL: f64 = 1e-10;

pub fn eigenphases(u: &UnitaryMatrix) -> Result<SpectrumReport> {
    let dev = u.unitarity_defect();
    if !(dev <= SPECTRUM_UNITARITY_TOL) {
        return Err(Error::NotUnitary(dev));
    }
    let eigenvalues = eigenvalues(u)?;
    let unit_modulus_dev = eigenvalues
        .iter()
        .map(|l| (l.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let mut phases: Vec<f64> = eigenvalues
        .iter()
        .map(|l| {
            let p = l.arg().rem_euclid(2.0 * PI);
            if p >= 2.0 * PI {
                0.0
            } else {
                p
            }
        })
        .collect();
    phases.sort_by(f64::total_cmp);

    let count = phases.len();
    let scale = count as f64 / (2.0 * PI);
    let spacings = (0..count)
        .map(|i| {
            let next = if i + 1 < count {
                phases[i + 1]
            } else {
                phases[0] + 2.0 * PI
            };
            (next - phases[i]) * scale
        })
        .collect();
    Ok(SpectrumReport {
        phases,
        unit_modulus_dev,
        spacings,
    })
}

/// Eigenvalues via a dense complex Schur decomposition.
pub fn eigenvalues(u: &UnitaryMatrix) -> Result<Vec<Complex64>> {
    if u.dim() == 1 {
        return Ok(vec![u.get(0, 0)]);
    }
    let schur = Schur::try_new(u.to_nalgebra(), 1e-15, 10_000).ok_or(Error::NoConvergence)?;
    let values = schur.eigenvalues().ok_or(Error::NoConvergence)?;
    Ok(values.iter().copied().collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceStep {
    /// Map index used for this step (the dot position of `from`).
    pub map_n: usize,
    pub from: String,
    pub to: String,
    /// `⟨to|B_n|from⟩`.
    pub overlap_re: f64,
    pub overlap_im: f64,
}

impl CorrespondenceStep {
    pub fn overlap(&self) -> Complex64 {
        Complex64::new(self.overlap_re, self.overlap_im)
    }

    /// Whether the quantum image reproduces the shifted label.
    pub fn matches(&self, tol: f64) -> bool {
        self.overlap_re >= 1.0 - tol
    }
}

/// Follows a dot label through `steps` dot shifts, checking at each step that
/// `B_n` (with `n` the current dot position) sends the current dot state onto
/// the dot state of the classically shifted label.
pub fn correspondence_trajectory(label: &DotLabel, steps: usize) -> Result<Vec<CorrespondenceStep>> {
    if steps > label.n() {
        return Err(Error::DotExhausted {
            steps,
            available: label.n(),
        });
    }
    let mut current = label.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let next = label_shift(&current)?;
        let image = apply_baker_fast(&dot_state_transform(&current), current.n())?;
        let overlap = dot_state_transform(&next).inner(&image)?;
        out.push(CorrespondenceStep {
            map_n: current.n(),
            from: current.to_string(),
            to: next.to_string(),
            overlap_re: overlap.re,
            overlap_im: overlap.im,
        });
        current = next;
    }
    Ok(out)
}
