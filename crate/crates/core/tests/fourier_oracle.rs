//! Partial transforms and baker steps checked against rustfft.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use qubit_baker::baker::apply_baker_fast;
use qubit_baker::qfourier::{apply_partial_transform, Direction};
use qubit_baker::{Dimensions, StateVector};

fn random_state(q: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let amps = (0..1usize << q)
        .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::with_tolerance(amps, f64::INFINITY).unwrap()
}

/// `I ⊗ K_M` on contiguous chunks, via
/// `K = e^{iπ/2M} diag(e^{iπx/M}) DFT⁺ diag(e^{iπa/M}) / √M`.
fn reference(amps: &[C], q: usize, n: usize, forward: bool) -> Vec<C> {
    let m = 1usize << (q - n);
    let sign = if forward { 1.0 } else { -1.0 };
    let mut planner = FftPlanner::<f64>::new();
    let fft = if forward {
        planner.plan_fft_inverse(m)
    } else {
        planner.plan_fft_forward(m)
    };
    let twiddle = |k: usize| C::from_polar(1.0, sign * PI * k as f64 / m as f64);
    let global = C::from_polar(1.0 / (m as f64).sqrt(), sign * PI / (2 * m) as f64);
    let mut out = amps.to_vec();
    for chunk in out.chunks_mut(m) {
        for (a, z) in chunk.iter_mut().enumerate() {
            *z *= twiddle(a);
        }
        fft.process(chunk);
        for (x, z) in chunk.iter_mut().enumerate() {
            *z *= twiddle(x) * global;
        }
    }
    out
}

fn max_diff(a: &[C], b: &[C]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn partial_transforms_match_rustfft() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for q in [1, 2, 5, 9, 14] {
        let dims = Dimensions::new(q).unwrap();
        for n in 0..=q {
            let s = random_state(dims.qubits(), &mut rng);
            for (dir, forward) in [(Direction::Forward, true), (Direction::Inverse, false)] {
                let got = apply_partial_transform(&s, n, dir).unwrap();
                let want = reference(s.amps(), q, n, forward);
                assert!(max_diff(got.amps(), &want) < 1e-12, "q={q} n={n} forward={forward}");
            }
        }
    }
}

#[test]
fn baker_step_matches_rustfft_composition() {
    // B_n = G_{n-1} · Cyc_n · G_n†, with the cyclic shift done by index math.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for q in [3, 8, 13] {
        for n in [1, q / 2, q] {
            let s = random_state(q, &mut rng);
            let mid = reference(s.amps(), q, n, false);
            let mut rotated = vec![C::new(0.0, 0.0); mid.len()];
            for (j, z) in mid.iter().enumerate() {
                let top = j >> (q - n);
                let low = j & ((1 << (q - n)) - 1);
                let rot = ((top << 1) | (top >> (n - 1))) & ((1 << n) - 1);
                rotated[(rot << (q - n)) | low] = *z;
            }
            let want = reference(&rotated, q, n - 1, true);
            let got = apply_baker_fast(&s, n).unwrap();
            assert!(max_diff(got.amps(), &want) < 1e-12, "q={q} n={n}");
        }
    }
}
