//! Gate-list lowering of `B_n` and dense evaluation of gate lists.
//!
//! Slots are numbered `1…N`, slot 1 being the most significant qubit. Each
//! antiperiodic transform on an `m`-qubit register lowers to
//! `e^{iπ/2M} · P · QFT · P` where `P` is a layer of single-qubit phases
//! `diag(1, e^{iπ/2^l})` and the QFT is the usual Hadamard plus
//! controlled-phase ladder followed by bit-reversal swaps.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Dimensions;
use crate::matrix::UnitaryMatrix;

/// Largest qubit count accepted by [`circuit_to_matrix`].
pub const DENSE_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Arbitrary 2×2 unitary (row-major) on one slot.
    SingleQubit {
        target: usize,
        matrix: [[Complex64; 2]; 2],
    },
    /// `diag(1, 1, 1, e^{iθ})` on two slots.
    ControlledPhase {
        control: usize,
        target: usize,
        angle: f64,
    },
    Swap {
        a: usize,
        b: usize,
    },
    GlobalPhase {
        angle: f64,
    },
}

impl Gate {
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::SingleQubit { .. } => "single_qubit",
            Gate::ControlledPhase { .. } => "controlled_phase",
            Gate::Swap { .. } => "swap",
            Gate::GlobalPhase { .. } => "global_phase",
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::SingleQubit { target, .. } => vec![target],
            Gate::ControlledPhase { control, target, .. } => vec![control, target],
            Gate::Swap { a, b } => vec![a, b],
            Gate::GlobalPhase { .. } => vec![],
        }
    }

    fn touches(&self, slot: usize) -> bool {
        self.targets().contains(&slot)
    }

    fn validate(&self, qubits: usize) -> Result<()> {
        let targets = self.targets();
        if let Some(&bad) = targets.iter().find(|&&s| s == 0 || s > qubits) {
            return Err(Error::InvalidGate(format!("slot {bad} outside 1..={qubits}")));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::InvalidGate(format!("repeated slot {}", targets[0])));
        }
        if let Gate::SingleQubit { matrix, .. } = self {
            let m = UnitaryMatrix::from_raw(2, vec![matrix[0][0], matrix[0][1], matrix[1][0], matrix[1][1]]);
            let dev = m.unitarity_defect();
            if dev > 1e-12 {
                return Err(Error::InvalidGate(format!("single-qubit matrix off unitary by {dev:e}")));
            }
        }
        Ok(())
    }

    /// Applies the gate in place to amplitudes over `qubits` slots.
    pub fn apply(&self, qubits: usize, amps: &mut [Complex64]) {
        let bit = |slot: usize| 1usize << (qubits - slot);
        match *self {
            Gate::SingleQubit { target, matrix } => {
                let b = bit(target);
                for i in 0..amps.len() {
                    if i & b == 0 {
                        let (a0, a1) = (amps[i], amps[i | b]);
                        amps[i] = matrix[0][0] * a0 + matrix[0][1] * a1;
                        amps[i | b] = matrix[1][0] * a0 + matrix[1][1] * a1;
                    }
                }
            }
            Gate::ControlledPhase { control, target, angle } => {
                let mask = bit(control) | bit(target);
                let phase = Complex64::from_polar(1.0, angle);
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a *= phase;
                    }
                }
            }
            Gate::Swap { a, b } => {
                let (ba, bb) = (bit(a), bit(b));
                for i in 0..amps.len() {
                    if i & ba != 0 && i & bb == 0 {
                        amps.swap(i, i ^ ba ^ bb);
                    }
                }
            }
            Gate::GlobalPhase { angle } => {
                let phase = Complex64::from_polar(1.0, angle);
                amps.iter_mut().for_each(|a| *a *= phase);
            }
        }
    }
}

/// Ordered gate sequence on `N` slots; the first gate acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct GateList {
    dims: Dimensions,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn new(dims: Dimensions, gates: Vec<Gate>) -> Result<Self> {
        for g in &gates {
            g.validate(dims.qubits())?;
        }
        Ok(Self { dims, gates })
    }

    pub fn dims(&self) -> Dimensions {
        self.dims
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count(&self, kind: &str) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    pub fn apply(&self, amps: &mut [Complex64]) {
        assert_eq!(amps.len(), self.dims.dim(), "state length differs from circuit dimension");
        for g in &self.gates {
            g.apply(self.dims.qubits(), amps);
        }
    }
}

/// Dense matrix of a gate list, built column by column.
pub fn circuit_to_matrix(gl: &GateList) -> Result<UnitaryMatrix> {
    if gl.dims.qubits() > DENSE_CAP {
        return Err(Error::DenseCap {
            qubits: gl.dims.qubits(),
            cap: DENSE_CAP,
        });
    }
    let d = gl.dims.dim();
    let columns = (0..d).map(|j| {
        let mut col = vec![Complex64::new(0.0, 0.0); d];
        col[j] = Complex64::new(1.0, 0.0);
        gl.apply(&mut col);
        col
    });
    Ok(UnitaryMatrix::from_columns(d, columns))
}

/// Lowers `B_n = G_{n-1} · Cyc_n · G_n†` to single-qubit, controlled-phase
/// and swap gates. The result carries its absolute phase.
pub fn emit_circuit(dims: Dimensions, n: usize) -> Result<GateList> {
    dims.check_dot(n, 1)?;
    let qubits = dims.qubits();
    let mut gates = Vec::new();
    transform_gates(&mut gates, n + 1, qubits - n, true);
    for slot in 1..n {
        gates.push(Gate::Swap { a: slot, b: slot + 1 });
    }
    transform_gates(&mut gates, n, qubits - n + 1, false);
    GateList::new(dims, simplify(gates))
}

fn phase_gate(target: usize, angle: f64) -> Gate {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Gate::SingleQubit {
        target,
        matrix: [[one, zero], [zero, Complex64::from_polar(1.0, angle)]],
    }
}

fn hadamard(target: usize) -> Gate {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Gate::SingleQubit {
        target,
        matrix: [[h, h], [h, -h]],
    }
}

/// Appends the antiperiodic transform (or its inverse) on the `m` slots
/// starting at `first`.
fn transform_gates(gates: &mut Vec<Gate>, first: usize, m: usize, inverse: bool) {
    let len = (1u64 << m) as f64;
    let sign = if inverse { -1.0 } else { 1.0 };
    let slot = |l: usize| first + l - 1;
    let phases = |gates: &mut Vec<Gate>| {
        for l in 1..=m {
            gates.push(phase_gate(slot(l), sign * PI / (1u64 << l) as f64));
        }
    };

    let mut qft = Vec::new();
    for j in 1..=m {
        qft.push(hadamard(slot(j)));
        for k in j + 1..=m {
            qft.push(Gate::ControlledPhase {
                control: slot(k),
                target: slot(j),
                angle: 2.0 * PI / (1u64 << (k - j + 1)) as f64,
            });
        }
    }
    for j in 1..=m / 2 {
        qft.push(Gate::Swap {
            a: slot(j),
            b: slot(m + 1 - j),
        });
    }
    if inverse {
        qft.reverse();
        for g in &mut qft {
            if let Gate::ControlledPhase { angle, .. } = g {
                *angle = -*angle;
            }
        }
    }

    phases(gates);
    gates.extend(qft);
    phases(gates);
    gates.push(Gate::GlobalPhase {
        angle: sign * PI / (2.0 * len),
    });
}

/// Fuses each single-qubit gate into the next one on the same slot when no
/// gate in between touches that slot, then folds the accumulated global phase
/// into the last single-qubit gate.
fn simplify(gates: Vec<Gate>) -> Vec<Gate> {
    let mut out: Vec<Gate> = Vec::with_capacity(gates.len());
    let mut global = 0.0;
    for g in gates {
        match g {
            Gate::GlobalPhase { angle } => global += angle,
            Gate::SingleQubit { target, matrix } => {
                let earlier = out
                    .iter()
                    .rposition(|prev| prev.touches(target))
                    .filter(|&i| matches!(out[i], Gate::SingleQubit { .. }));
                match earlier {
                    Some(i) => {
                        let Gate::SingleQubit { matrix: first, .. } = out.remove(i) else {
                            unreachable!()
                        };
                        out.push(Gate::SingleQubit {
                            target,
                            matrix: mat2_mul(&matrix, &first),
                        });
                    }
                    None => out.push(Gate::SingleQubit { target, matrix }),
                }
            }
            other => out.push(other),
        }
    }
    let global = global.rem_euclid(2.0 * PI);
    if global != 0.0 {
        let phase = Complex64::from_polar(1.0, global);
        match out.iter_mut().rev().find(|g| matches!(g, Gate::SingleQubit { .. })) {
            Some(Gate::SingleQubit { matrix, .. }) => {
                matrix.iter_mut().flatten().for_each(|e| *e *= phase);
            }
            _ => out.push(Gate::GlobalPhase { angle: global }),
        }
    }
    out
}

fn mat2_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baker::{baker_composed, last_qubit_unitary};
    use crate::qfourier::partial_transform;

    fn dims(n: usize) -> Dimensions {
        Dimensions::new(n).unwrap()
    }

    #[test]
    fn empty_and_swap() {
        let gl = GateList::new(dims(2), vec![]).unwrap();
        assert_eq!(circuit_to_matrix(&gl).unwrap(), UnitaryMatrix::identity(4));
        let gl = GateList::new(dims(2), vec![Gate::Swap { a: 1, b: 2 }]).unwrap();
        let m = circuit_to_matrix(&gl).unwrap();
        let expected = crate::baker::cyclic_shift_operator(dims(2), 2).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn validation() {
        assert!(GateList::new(dims(2), vec![Gate::Swap { a: 1, b: 3 }]).is_err());
        assert!(GateList::new(dims(2), vec![Gate::Swap { a: 2, b: 2 }]).is_err());
        let zero = Complex64::new(0.0, 0.0);
        let bad = Gate::SingleQubit {
            target: 1,
            matrix: [[zero; 2]; 2],
        };
        assert!(GateList::new(dims(2), vec![bad]).is_err());
        let gl = GateList::new(dims(13), vec![]).unwrap();
        assert!(matches!(circuit_to_matrix(&gl), Err(Error::DenseCap { .. })));
    }

    #[test]
    fn transform_lowering_matches_dense() {
        for q in 1..=5 {
            for n in 0..=q {
                let mut gates = Vec::new();
                transform_gates(&mut gates, n + 1, q - n, false);
                let gl = GateList::new(dims(q), gates.clone()).unwrap();
                let g = partial_transform(dims(q), n).unwrap();
                assert!(circuit_to_matrix(&gl).unwrap().max_abs_diff(&g) <= 1e-12, "N={q} n={n}");

                let mut inv = Vec::new();
                transform_gates(&mut inv, n + 1, q - n, true);
                let gl = GateList::new(dims(q), inv).unwrap();
                assert!(circuit_to_matrix(&gl).unwrap().max_abs_diff(&g.adjoint()) <= 1e-12);

                let gl = GateList::new(dims(q), simplify(gates)).unwrap();
                assert!(circuit_to_matrix(&gl).unwrap().max_abs_diff(&g) <= 1e-12);
            }
        }
    }

    #[test]
    fn single_qubit_case_is_one_gate() {
        let gl = emit_circuit(dims(1), 1).unwrap();
        assert_eq!(gl.len(), 1);
        let Gate::SingleQubit { target, matrix } = &gl.gates()[0] else {
            panic!("expected a single-qubit gate");
        };
        assert_eq!(*target, 1);
        let u = last_qubit_unitary();
        for r in 0..2 {
            for c in 0..2 {
                assert!((matrix[r][c] - u[r][c]).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn last_map_has_no_controlled_phases() {
        for q in 2..=6 {
            let gl = emit_circuit(dims(q), q).unwrap();
            assert_eq!(gl.count("controlled_phase"), 0);
            assert_eq!(gl.count("swap"), q - 1);
            assert_eq!(gl.count("single_qubit"), 1);
            assert!(gl.gates()[..q - 1].iter().all(|g| matches!(g, Gate::Swap { .. })));
            assert_eq!(gl.gates()[q - 1].targets(), vec![q]);
        }
    }

    #[test]
    fn lowering_matches_dense_map() {
        for q in 1..=6 {
            for n in 1..=q {
                let gl = emit_circuit(dims(q), n).unwrap();
                let dense = baker_composed(dims(q), n).unwrap();
                let m = circuit_to_matrix(&gl).unwrap();
                assert!(m.max_abs_diff(&dense) <= 1e-10, "N={q} n={n}");
                assert!(gl.len() <= 2 * q * q + 2, "N={q} n={n} gates={}", gl.len());
            }
        }
    }
}
