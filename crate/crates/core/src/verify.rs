//! Self-verification suite: every property the library promises, checked at
//! fixed sizes and tolerances, with per-check margins.
//!
//! Random inputs come from a ChaCha generator seeded per criterion, so a
//! report is reproducible from its seed.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{
    check_strict_localization, correspondence_trajectory, eigenphases, max_contiguous_cut_entropy,
};
use crate::baker::{
    apply_baker_fast, baker_by_columns, baker_composed, baker_from_basis_map, circuit_to_matrix,
    cyclic_shift_operator, emit_circuit, last_qubit_unitary, BakerStepper,
};
use crate::classical::{decode, geometric_baker, label_shift, shift, SymbolString};
use crate::lattice::{bits_to_index, BitVec, Dimensions, DotLabel};
use crate::matrix::UnitaryMatrix;
use crate::qfourier::{
    antiperiodic_dft, displacement_u, displacement_v, dot_state_product, dot_state_transform,
    partial_transform,
};
use crate::state::StateVector;

pub const DEFAULT_SEED: u64 = 0x0ba4_e125;

/// Gate-count budget: every lowered `B_n` must use at most `c·N²` gates.
pub const GATE_COUNT_CONSTANT: f64 = 3.0;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    /// Upper limit on the qubit count used by any check.
    pub max_qubits: usize,
    pub seed: u64,
    /// When set, this amount is added to one entry of a partial transform
    /// before the unitarity check.
    pub perturb: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_qubits: 20,
            seed: DEFAULT_SEED,
            perturb: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub criterion: u8,
    pub name: String,
    pub bound: Bound,
    pub threshold: f64,
    /// Worst value observed (largest for `AtMost`, smallest for `AtLeast`).
    pub value: f64,
    /// Distance from the threshold on the passing side; negative on failure.
    pub margin: f64,
    pub passed: bool,
    pub skipped: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(criterion: u8, name: &str, bound: Bound, threshold: f64, value: f64, detail: String) -> Self {
        let margin = match bound {
            Bound::AtMost => threshold - value,
            Bound::AtLeast => value - threshold,
        };
        Self {
            criterion,
            name: name.to_owned(),
            bound,
            threshold,
            value,
            margin,
            passed: margin >= 0.0 && value.is_finite(),
            skipped: false,
            detail,
        }
    }

    fn skipped(criterion: u8, name: &str, bound: Bound, threshold: f64, detail: String) -> Self {
        Self {
            criterion,
            name: name.to_owned(),
            bound,
            threshold,
            value: f64::NAN,
            margin: f64::NAN,
            passed: true,
            skipped: true,
            detail,
        }
    }

    fn at_most(criterion: u8, name: &str, threshold: f64, value: f64, detail: String) -> Self {
        Self::new(criterion, name, Bound::AtMost, threshold, value, detail)
    }

    fn at_least(criterion: u8, name: &str, threshold: f64, value: f64, detail: String) -> Self {
        Self::new(criterion, name, Bound::AtLeast, threshold, value, detail)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub max_qubits: usize,
    pub perturb: Option<f64>,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs every criterion in order.
pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let mut checks = Vec::new();
    for criterion in 1..=12u8 {
        checks.extend(run_criterion(criterion, cfg));
    }
    VerifyReport {
        seed: cfg.seed,
        max_qubits: cfg.max_qubits,
        perturb: cfg.perturb,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Runs one numbered criterion (1–12).
pub fn run_criterion(criterion: u8, cfg: &VerifyConfig) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(criterion as u64));
    let cap = |n: usize| n.min(cfg.max_qubits);
    match criterion {
        1 => unitarity(cap(8), cfg.perturb),
        2 => boundary_identities(cap(8)),
        3 => first_map_reduction(cap(8)),
        4 => route_equivalence(cap(8)),
        5 => dot_shift_law(cap(6)),
        6 => product_form(cap(6)),
        7 => last_map_structure(cap(8), cfg.max_qubits, &mut rng),
        8 => displacement_algebra(cap(8)),
        9 => localization(cap(8)),
        10 => classical_oracle(cap(5), &mut rng),
        11 => fast_path(cap(10), cfg.max_qubits, &mut rng),
        12 => circuit_lowering(cap(6)),
        _ => Vec::new(),
    }
}

fn dims(q: usize) -> Dimensions {
    Dimensions::new(q).expect("suite sizes are in range")
}

fn minus_identity(d: usize) -> UnitaryMatrix {
    UnitaryMatrix::identity(d).scale(Complex64::new(-1.0, 0.0))
}

fn unitarity(top: usize, perturb: Option<f64>) -> Vec<CheckResult> {
    let start = Instant::now();
    let mut g_worst = 0.0f64;
    let mut b_worst = 0.0f64;
    for q in 1..=top {
        for n in 0..=q {
            let mut g = partial_transform(dims(q), n).expect("n in range");
            if let (Some(eps), true) = (perturb, q == top && n == 0) {
                let v = g.get(0, 0) + Complex64::new(eps, 0.0);
                g.set(0, 0, v);
            }
            g_worst = g_worst.max(g.unitarity_defect());
            if n >= 1 {
                b_worst = b_worst.max(baker_composed(dims(q), n).expect("n in range").unitarity_defect());
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let scope = format!("N <= {top}, all n");
    vec![
        CheckResult::at_most(1, "G_n unitarity", 1e-12, g_worst, scope.clone()),
        CheckResult::at_most(1, "B_n unitarity", 1e-12, b_worst, scope),
        CheckResult::at_most(1, "unitarity runtime [s]", 30.0, elapsed, String::new()),
    ]
}

fn boundary_identities(top: usize) -> Vec<CheckResult> {
    let mut top_dev = 0.0f64;
    let mut bottom_dev = 0.0f64;
    for q in 1..=top {
        let d = dims(q);
        let i_eye = UnitaryMatrix::identity(d.dim()).scale(Complex64::new(0.0, 1.0));
        top_dev = top_dev.max(partial_transform(d, q).unwrap().max_abs_diff(&i_eye));
        let dft = antiperiodic_dft(d.dim()).unwrap();
        bottom_dev = bottom_dev.max(partial_transform(d, 0).unwrap().max_abs_diff(&dft));
    }
    let scope = format!("N <= {top}");
    vec![
        CheckResult::at_most(2, "G_N = i*I", 1e-15, top_dev, scope.clone()),
        CheckResult::at_most(2, "G_0 = antiperiodic DFT", 1e-15, bottom_dev, scope),
    ]
}

fn first_map_reduction(top: usize) -> Vec<CheckResult> {
    let worst = (1..=top)
        .map(|q| {
            let d = dims(q);
            let g0 = partial_transform(d, 0).unwrap();
            let g1 = partial_transform(d, 1).unwrap();
            baker_from_basis_map(d, 1).unwrap().max_abs_diff(&g0.mul(&g1.adjoint()))
        })
        .fold(0.0, f64::max);
    vec![CheckResult::at_most(3, "B_1 = G_0 G_1^dagger", 1e-12, worst, format!("N <= {top}"))]
}

fn route_equivalence(top: usize) -> Vec<CheckResult> {
    let mut worst = 0.0f64;
    for q in 1..=top {
        for n in 1..=q {
            let a = baker_from_basis_map(dims(q), n).unwrap();
            let b = baker_composed(dims(q), n).unwrap();
            worst = worst.max(a.max_abs_diff(&b));
        }
    }
    vec![CheckResult::at_most(4, "basis-map route = composed route", 1e-12, worst, format!("N <= {top}, all n"))]
}

fn dot_shift_law(top: usize) -> Vec<CheckResult> {
    let mut worst = 0.0f64;
    let mut count = 0usize;
    for q in 1..=top {
        for n in 1..=q {
            let b = baker_composed(dims(q), n).unwrap();
            for label in DotLabel::all(dims(q), n).unwrap() {
                let image = b.apply(&dot_state_transform(&label)).unwrap();
                let target = dot_state_transform(&label_shift(&label).unwrap());
                worst = worst.max((target.inner(&image).unwrap() - 1.0).norm());
                count += 1;
            }
        }
    }
    vec![CheckResult::at_most(5, "|<shifted|B_n|label> - 1|", 1e-12, worst, format!("{count} labels, N <= {top}"))]
}

fn product_form(top: usize) -> Vec<CheckResult> {
    let mut worst = 0.0f64;
    for q in 1..=top {
        for n in 0..=q {
            for label in DotLabel::all(dims(q), n).unwrap() {
                let a = dot_state_product(&label);
                let b = dot_state_transform(&label);
                worst = worst.max(a.max_abs_diff(&b).unwrap());
            }
        }
    }
    vec![CheckResult::at_most(6, "product form = G_n column", 1e-12, worst, format!("N <= {top}, all labels"))]
}

fn last_map_structure(top: usize, max_qubits: usize, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let u = last_qubit_unitary();
    let mut structure = 0.0f64;
    for q in 1..=top {
        let d = dims(q);
        let u_last = UnitaryMatrix::from_fn(d.dim(), |r, c| {
            if r >> 1 == c >> 1 {
                u[r & 1][c & 1]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let expected = u_last.mul(&cyclic_shift_operator(d, q).unwrap());
        structure = structure.max(baker_composed(d, q).unwrap().max_abs_diff(&expected));
    }
    let mut out = vec![CheckResult::at_most(7, "B_N = u_N Cyc_N", 1e-12, structure, format!("N <= {top}"))];

    let product_qubits = max_qubits.min(6);
    if product_qubits >= 2 {
        let d = dims(product_qubits);
        let b = baker_composed(d, product_qubits).unwrap();
        let worst = (0..100)
            .map(|_| {
                let image = b.apply(&StateVector::random_product(d, rng)).unwrap();
                max_contiguous_cut_entropy(&image).unwrap()
            })
            .fold(0.0, f64::max);
        out.push(CheckResult::at_most(
            7,
            "B_N product images: max cut entropy [bits]",
            1e-10,
            worst,
            format!("100 random product states, N = {product_qubits}"),
        ));
    } else {
        out.push(CheckResult::skipped(7, "B_N product images: max cut entropy [bits]", Bound::AtMost, 1e-10, "needs N >= 2".into()));
    }

    if max_qubits >= 3 {
        let d = dims(3);
        let b1 = baker_composed(d, 1).unwrap();
        let inputs = (0..8)
            .map(|j| StateVector::basis(d, j).unwrap())
            .chain((0..20).map(|_| StateVector::random_product(d, rng)));
        let best = inputs
            .map(|s| max_contiguous_cut_entropy(&b1.apply(&s).unwrap()).unwrap())
            .fold(0.0, f64::max);
        out.push(CheckResult::at_least(
            7,
            "B_1 entangling scan: max cut entropy [bits]",
            0.1,
            best,
            "N = 3, 8 basis + 20 random product states".into(),
        ));
    } else {
        out.push(CheckResult::skipped(7, "B_1 entangling scan: max cut entropy [bits]", Bound::AtLeast, 0.1, "needs N >= 3".into()));
    }
    out
}

fn displacement_algebra(top: usize) -> Vec<CheckResult> {
    let mut commutation = 0.0f64;
    let mut u_power = 0.0f64;
    let mut v_power = 0.0f64;
    for q in 1..=top {
        let d = dims(q);
        let u = displacement_u(d);
        let v = displacement_v(d);
        let eps = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / d.dim() as f64);
        commutation = commutation.max(u.mul(&v).max_abs_diff(&v.mul(&u).scale(eps)));
        let minus = minus_identity(d.dim());
        u_power = u_power.max(u.pow(d.dim() as u64).max_abs_diff(&minus));
        v_power = v_power.max(v.pow(d.dim() as u64).max_abs_diff(&minus));
    }
    let scope = format!("N <= {top}");
    vec![
        CheckResult::at_most(8, "UV = VU e^{2 pi i/D}", 1e-12, commutation, scope.clone()),
        CheckResult::at_most(8, "U^D = -I", 1e-12, u_power, scope.clone()),
        CheckResult::at_most(8, "V^D = -I", 1e-12, v_power, scope),
    ]
}

fn localization(top: usize) -> Vec<CheckResult> {
    let mut leakage = 0.0f64;
    let mut modulus = 0.0f64;
    let mut inexact = 0usize;
    for q in 1..=top {
        for n in 0..=q {
            for label in DotLabel::all(dims(q), n).unwrap() {
                let r = check_strict_localization(&label);
                leakage = leakage.max(r.leakage);
                modulus = modulus.max(r.uniform_modulus_dev);
                inexact += usize::from(!r.support_exact);
            }
        }
    }
    // Momentum window masses against G_0† applied densely to G_n columns.
    let mut mass_dev = 0.0f64;
    let mass_top = top.min(6);
    for q in 1..=mass_top {
        let d = dims(q);
        let g0_dag = partial_transform(d, 0).unwrap().adjoint();
        for n in 0..=q {
            let g = partial_transform(d, n).unwrap();
            for label in DotLabel::all(d, n).unwrap() {
                let momentum = g0_dag.matvec(&g.column(label.register_index()));
                let a = bits_to_index(label.abits());
                let oracle: f64 = momentum
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| k >> n == a)
                    .map(|(_, v)| v.norm_sqr())
                    .sum();
                mass_dev = mass_dev.max((check_strict_localization(&label).window_mass - oracle).abs());
            }
        }
    }
    let scope = format!("N <= {top}, all labels");
    vec![
        CheckResult::at_most(9, "labels with inexact position support", 0.0, inexact as f64, scope.clone()),
        CheckResult::at_most(9, "amplitude off the position window", 1e-15, leakage, scope.clone()),
        CheckResult::at_most(9, "uniform modulus deviation", 1e-12, modulus, scope),
        CheckResult::at_most(9, "window mass vs dense oracle", 1e-12, mass_dev, format!("N <= {mass_top}, all labels")),
    ]
}

fn classical_oracle(top: usize, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut mismatches = 0usize;
    for _ in 0..1000 {
        let left: Vec<u8> = (0..rng.gen_range(0..=32)).map(|_| rng.gen_range(0..=1)).collect();
        let right: Vec<u8> = (0..rng.gen_range(1..=32)).map(|_| rng.gen_range(0..=1)).collect();
        let s = SymbolString::new(BitVec::new(left).unwrap(), BitVec::new(right).unwrap());
        let (q, p): (Rational64, Rational64) = decode(&s);
        if decode(&shift(&s).unwrap()) != geometric_baker(q, p) {
            mismatches += 1;
        }
    }
    let mut worst = f64::INFINITY;
    let mut labels = 0usize;
    for q in 1..=top {
        for n in 0..=q {
            for label in DotLabel::all(dims(q), n).unwrap() {
                for step in correspondence_trajectory(&label, n).unwrap() {
                    worst = worst.min(step.overlap_re);
                }
                labels += 1;
            }
        }
    }
    vec![
        CheckResult::at_most(10, "decode(shift) != geometric(decode) count", 0.0, mismatches as f64, "1000 seeded windows".into()),
        CheckResult::at_least(10, "correspondence trajectory min overlap", 1.0 - 1e-10, worst, format!("{labels} labels, N <= {top}, steps = n")),
    ]
}

/// Best-of-`reps` wall time.
fn best_time(reps: usize, mut f: impl FnMut()) -> Duration {
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .min()
        .unwrap_or_default()
}

fn fast_path(top: usize, max_qubits: usize, rng: &mut ChaCha8Rng) -> Vec<CheckResult> {
    let mut worst = 0.0f64;
    for q in 1..=top {
        for n in 1..=q {
            let dense = baker_composed(dims(q), n).unwrap();
            for _ in 0..100 {
                let s = StateVector::random(dims(q), rng);
                let fast = apply_baker_fast(&s, n).unwrap();
                worst = worst.max(fast.max_abs_diff(&dense.apply(&s).unwrap()).unwrap());
            }
        }
    }
    let mut out = vec![CheckResult::at_most(11, "fast vs dense apply", 1e-10, worst, format!("N <= {top}, 100 states per n"))];

    if max_qubits >= 12 {
        let d = dims(12);
        let dense = baker_by_columns(d, 1).unwrap();
        let s = StateVector::random(d, rng);
        let mut stepper = BakerStepper::new(d, 1).unwrap();
        let mut fast_out = s.amps().to_vec();
        let mut dense_out = Vec::new();
        let dense_time = best_time(3, || dense_out = dense.matvec(s.amps()));
        let fast_time = best_time(5, || {
            fast_out.copy_from_slice(s.amps());
            stepper.step(&mut fast_out);
        });
        let agreement = crate::state::max_abs_diff(&dense_out, &fast_out);
        let speedup = dense_time.as_secs_f64() / fast_time.as_secs_f64().max(1e-9);
        out.push(CheckResult::at_least(11, "N = 12 speedup over dense matvec", 10.0, speedup, format!("agreement {agreement:.3e}")));
        out.push(CheckResult::at_most(11, "N = 12 fast vs dense apply", 1e-10, agreement, String::new()));
    } else {
        out.push(CheckResult::skipped(11, "N = 12 speedup over dense matvec", Bound::AtLeast, 10.0, "needs N >= 12".into()));
    }

    if max_qubits >= 20 {
        let d = dims(20);
        let s = StateVector::random(d, rng);
        let t = Instant::now();
        let out_state = apply_baker_fast(&s, 1).unwrap();
        let elapsed = t.elapsed().as_secs_f64();
        out.push(CheckResult::at_most(11, "N = 20 single fast step [s]", 5.0, elapsed, String::new()));
        out.push(CheckResult::at_most(11, "N = 20 norm drift", 1e-10, (out_state.norm() - 1.0).abs(), String::new()));
    } else {
        out.push(CheckResult::skipped(11, "N = 20 single fast step [s]", Bound::AtMost, 5.0, "needs N >= 20".into()));
    }
    out
}

fn circuit_lowering(top: usize) -> Vec<CheckResult> {
    let mut worst = 0.0f64;
    let mut ratio = 0.0f64;
    for q in 1..=top {
        for n in 1..=q {
            let gl = emit_circuit(dims(q), n).unwrap();
            let m = circuit_to_matrix(&gl).unwrap();
            worst = worst.max(m.max_abs_diff(&baker_composed(dims(q), n).unwrap()));
            ratio = ratio.max(gl.len() as f64 / (q * q) as f64);
        }
    }
    let b1 = baker_composed(dims(1), 1).unwrap();
    let spectrum = eigenphases(&b1).map(|r| r.phases).unwrap_or_default();
    let circ = |a: f64, b: f64| {
        let d = (a - b).rem_euclid(2.0 * std::f64::consts::PI);
        d.min(2.0 * std::f64::consts::PI - d)
    };
    let phase_dev = if spectrum.len() == 2 {
        let expected = [0.0, 1.5 * std::f64::consts::PI];
        let direct = circ(spectrum[0], expected[0]).max(circ(spectrum[1], expected[1]));
        let swapped = circ(spectrum[0], expected[1]).max(circ(spectrum[1], expected[0]));
        direct.min(swapped)
    } else {
        f64::INFINITY
    };
    let scope = format!("N <= {top}, all n");
    vec![
        CheckResult::at_most(12, "circuit matrix vs dense map", 1e-10, worst, scope.clone()),
        CheckResult::at_most(12, "gate count / N^2", GATE_COUNT_CONSTANT, ratio, scope),
        CheckResult::at_most(12, "B_1 (N = 1) eigenphases vs {0, 3pi/2}", 1e-10, phase_dev, String::new()),
    ]
}
