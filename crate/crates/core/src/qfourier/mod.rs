//! Antiperiodic Fourier machinery on `N` qubits.
//!
//! `G_n` is the identity on the `n` most significant qubits tensored with the
//! half-integer DFT on the remaining `N − n`. `G_0` is the full transform
//! relating position and momentum eigenstates and `G_N = i·1`.

mod fft;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{BitVec, Dimensions, DotLabel};
use crate::matrix::UnitaryMatrix;
use crate::state::{kron, StateVector};

pub(crate) use fft::AntiperiodicFft;

/// `e^{iπ·num/den}` with the numerator reduced modulo `2·den` first.
pub(crate) fn half_turns(num: i64, den: i64) -> Complex64 {
    let reduced = num.rem_euclid(2 * den);
    Complex64::from_polar(1.0, std::f64::consts::PI * reduced as f64 / den as f64)
}

/// Kernel entry `e^{2πi(x+½)(a+½)/M} / √M`.
fn kernel(x: usize, a: usize, len: usize) -> Complex64 {
    let num = (2 * x as i64 + 1) * (2 * a as i64 + 1);
    half_turns(num, 2 * len as i64) / (len as f64).sqrt()
}

/// Half-integer-offset DFT of size `len`, a power of two (including 1).
pub fn antiperiodic_dft(len: usize) -> Result<UnitaryMatrix> {
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    Ok(UnitaryMatrix::from_fn(len, |x, a| kernel(x, a, len)))
}

/// Dense `G_n = I_{2^n} ⊗ K_{2^{N-n}}`.
pub fn partial_transform(dims: Dimensions, n: usize) -> Result<UnitaryMatrix> {
    dims.check_dot(n, 0)?;
    let m = dims.qubits() - n;
    let len = 1usize << m;
    Ok(UnitaryMatrix::from_fn(dims.dim(), |r, c| {
        if r >> m == c >> m {
            kernel(r & (len - 1), c & (len - 1), len)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Applies `G_n` (or `G_n†`) in `O(D·(N−n))` using radix-2 butterflies.
pub fn apply_partial_transform(
    state: &StateVector,
    n: usize,
    direction: Direction,
) -> Result<StateVector> {
    if n > state.qubits() {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: state.qubits(),
        });
    }
    let mut out = state.clone();
    transform_in_place(out.amps_mut(), state.qubits(), n, direction);
    Ok(out)
}

pub(crate) fn transform_in_place(
    amps: &mut [Complex64],
    qubits: usize,
    n: usize,
    direction: Direction,
) {
    debug_assert!(n <= qubits);
    let fft = AntiperiodicFft::new(1 << (qubits - n));
    transform_with(&fft, amps, direction);
}

pub(crate) fn transform_with(fft: &AntiperiodicFft, amps: &mut [Complex64], direction: Direction) {
    let len = fft.len();
    for chunk in amps.chunks_exact_mut(len) {
        match direction {
            Direction::Forward => fft.forward(chunk),
            Direction::Inverse => fft.inverse(chunk),
        }
    }
}

/// Dot-basis state `|a_{N-n}…a_1.x_1…x_n⟩ = G_n |x_1…x_n, a_1…a_{N-n}⟩`,
/// read off a column of the kernel.
pub fn dot_state_transform(label: &DotLabel) -> StateVector {
    let dims = label.dims();
    let m = label.abits().len();
    let len = 1usize << m;
    let a = crate::lattice::bits_to_index(label.abits());
    let base = crate::lattice::bits_to_index(label.xbits()) << m;
    let mut amps = vec![Complex64::new(0.0, 0.0); dims.dim()];
    for (x, amp) in amps[base..base + len].iter_mut().enumerate() {
        *amp = kernel(x, a, len);
    }
    StateVector::from_raw(dims, amps)
}

/// The same dot-basis state assembled as a tensor product: position qubits
/// in their basis states, then momentum qubits
/// `(|0⟩ + e^{2πi(0.a_k…a_{N−n}1)}|1⟩)/√2` for `k = N−n` down to `1`, all
/// times `e^{iπ(0.a_1…a_{N−n}1)}`.
pub fn dot_state_product(label: &DotLabel) -> StateVector {
    let abits = label.abits().bits();
    let m = abits.len();
    let overall = turns(&label.abits().binary_fraction(true)) * 0.5;
    let mut amps = vec![Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * overall)];
    for &x in label.xbits().bits() {
        let factor = if x == 0 {
            [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
        } else {
            [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]
        };
        amps = kron(&amps, &factor);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for k in (0..m).rev() {
        let tail = BitVec::from_raw(abits[k..].to_vec());
        let angle = 2.0 * std::f64::consts::PI * turns(&tail.binary_fraction(true));
        amps = kron(&amps, &[Complex64::new(h, 0.0), Complex64::from_polar(h, angle)]);
    }
    StateVector::from_raw(label.dims(), amps)
}

fn turns(r: &num_rational::Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `U = e^{2πi q̂}`, diagonal in the position basis.
pub fn displacement_u(dims: Dimensions) -> UnitaryMatrix {
    let d = dims.dim() as i64;
    let diag: Vec<Complex64> = (0..d).map(|j| half_turns(2 * j + 1, d)).collect();
    UnitaryMatrix::diagonal(&diag)
}

/// `V = e^{-2πi p̂} = G_0 · diag(e^{-2πi p_k}) · G_0†`.
pub fn displacement_v(dims: Dimensions) -> UnitaryMatrix {
    let d = dims.dim() as i64;
    let g0 = partial_transform(dims, 0).expect("n = 0 is always valid");
    let diag: Vec<Complex64> = (0..d).map(|k| half_turns(-(2 * k + 1), d)).collect();
    g0.mul(&UnitaryMatrix::diagonal(&diag)).mul(&g0.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::UNITARITY_TOL;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn dims(n: usize) -> Dimensions {
        Dimensions::new(n).unwrap()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn dft_small_sizes() {
        let k1 = antiperiodic_dft(1).unwrap();
        assert!(close(k1.get(0, 0), c(0.0, 1.0), 1e-15));

        let k2 = antiperiodic_dft(2).unwrap();
        let expected = [c(0.5, 0.5), c(-0.5, 0.5), c(-0.5, 0.5), c(0.5, 0.5)];
        for (e, v) in expected.iter().zip(k2.entries()) {
            assert!(close(*e, *v, 1e-15), "{e} vs {v}");
        }

        let k4 = antiperiodic_dft(4).unwrap();
        let pi8 = std::f64::consts::PI / 8.0;
        assert!(close(k4.get(0, 0), Complex64::from_polar(0.5, pi8), 1e-15));
        assert_eq!(antiperiodic_dft(3).unwrap_err(), Error::NotPowerOfTwo(3));
        assert_eq!(antiperiodic_dft(0).unwrap_err(), Error::NotPowerOfTwo(0));
    }

    #[test]
    fn kernel_factorization_matches_dense_at_two() {
        // e^{iπ/4} · diag(1, i) · [[1,1],[1,-1]]/√2 · diag(1, i)
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let i = c(0.0, 1.0);
        let factored = [
            phase * h,
            phase * h * i,
            phase * h * i,
            phase * h * i * -1.0 * i,
        ];
        let k2 = antiperiodic_dft(2).unwrap();
        for (f, v) in factored.iter().zip(k2.entries()) {
            assert!(close(*f, *v, 1e-15));
        }
    }

    #[test]
    fn partial_transform_boundaries() {
        let g = partial_transform(dims(2), 2).unwrap();
        assert!(g.max_abs_diff(&UnitaryMatrix::identity(4).scale(c(0.0, 1.0))) <= 1e-15);
        let g = partial_transform(dims(1), 0).unwrap();
        assert!(g.max_abs_diff(&antiperiodic_dft(2).unwrap()) <= 1e-15);
        let g = partial_transform(dims(2), 1).unwrap();
        let k2 = antiperiodic_dft(2).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let expected = if r / 2 == col / 2 {
                    k2.get(r % 2, col % 2)
                } else {
                    c(0.0, 0.0)
                };
                assert!(close(g.get(r, col), expected, 1e-15));
            }
        }
        assert!(matches!(
            partial_transform(dims(2), 3),
            Err(Error::DotPosition { n: 3, .. })
        ));
    }

    #[test]
    fn partial_transforms_are_unitary() {
        for q in 1..=6 {
            for n in 0..=q {
                let g = partial_transform(dims(q), n).unwrap();
                assert!(g.unitarity_defect() <= UNITARITY_TOL, "N={q} n={n}");
            }
        }
    }

    #[test]
    fn fast_apply_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in 1..=7 {
            for n in 0..=q {
                let g = partial_transform(dims(q), n).unwrap();
                let g_dag = g.adjoint();
                for _ in 0..5 {
                    let s = StateVector::random(dims(q), &mut rng);
                    let fast = apply_partial_transform(&s, n, Direction::Forward).unwrap();
                    assert!(fast.max_abs_diff(&g.apply(&s).unwrap()).unwrap() <= 1e-10);
                    let fast = apply_partial_transform(&s, n, Direction::Inverse).unwrap();
                    assert!(fast.max_abs_diff(&g_dag.apply(&s).unwrap()).unwrap() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn fast_apply_edge_cases() {
        let s = StateVector::basis(dims(3), 5).unwrap();
        let out = apply_partial_transform(&s, 3, Direction::Forward).unwrap();
        assert!(close(out.amps()[5], c(0.0, 1.0), 1e-15));
        assert!(matches!(
            apply_partial_transform(&s, 4, Direction::Forward),
            Err(Error::DimensionMismatch { .. })
        ));

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let s = StateVector::random(dims(8), &mut rng);
            for n in [0, 3, 8] {
                let f = apply_partial_transform(&s, n, Direction::Forward).unwrap();
                let back = apply_partial_transform(&f, n, Direction::Inverse).unwrap();
                assert!(back.max_abs_diff(&s).unwrap() <= 1e-10);
            }
        }
    }

    #[test]
    fn dot_state_examples() {
        let s = dot_state_transform(&".0".parse().unwrap());
        assert!(close(s.amps()[0], c(0.0, 1.0), 1e-15));
        assert!(close(s.amps()[1], c(0.0, 0.0), 1e-15));

        let s = dot_state_product(&".1".parse().unwrap());
        assert!(close(s.amps()[0], c(0.0, 0.0), 1e-15));
        assert!(close(s.amps()[1], c(0.0, 1.0), 1e-15));

        // |p_0⟩ at D = 2: e^{iπ/4}(|0⟩ + i|1⟩)/√2
        let phase = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_PI_4);
        let expected = [phase, phase * c(0.0, 1.0)];
        for s in [
            dot_state_transform(&"0.".parse().unwrap()),
            dot_state_product(&"0.".parse().unwrap()),
        ] {
            assert!(close(s.amps()[0], expected[0], 1e-15));
            assert!(close(s.amps()[1], expected[1], 1e-15));
        }

        let label = DotLabel::from_bits(&[1, 0], &[0]).unwrap();
        let s = dot_state_transform(&label);
        for (j, a) in s.amps().iter().enumerate() {
            let expected = if j == 4 || j == 5 { std::f64::consts::FRAC_1_SQRT_2 } else { 0.0 };
            assert!((a.norm() - expected).abs() <= 1e-15, "j={j}");
        }
    }

    #[test]
    fn dot_state_routes_agree() {
        for q in 1..=6 {
            for n in 0..=q {
                for label in DotLabel::all(dims(q), n).unwrap() {
                    let a = dot_state_transform(&label);
                    let b = dot_state_product(&label);
                    assert!(a.max_abs_diff(&b).unwrap() <= 1e-12, "{label}");
                }
            }
        }
    }

    #[test]
    fn dot_states_are_columns_of_partial_transform() {
        let d = dims(4);
        for n in 0..=4 {
            let g = partial_transform(d, n).unwrap();
            for label in DotLabel::all(d, n).unwrap() {
                let col = g.column(label.register_index());
                let s = dot_state_transform(&label);
                assert!(crate::state::max_abs_diff(&col, s.amps()) <= 1e-15);
            }
        }
    }

    #[test]
    fn displacement_examples() {
        let u = displacement_u(dims(1));
        assert!(u.max_abs_diff(&UnitaryMatrix::diagonal(&[c(0.0, 1.0), c(0.0, -1.0)])) <= 1e-15);

        let u = displacement_u(dims(2));
        let diag: Vec<_> = [1.0, 3.0, 5.0, 7.0]
            .iter()
            .map(|k| Complex64::from_polar(1.0, k * std::f64::consts::FRAC_PI_4))
            .collect();
        assert!(u.max_abs_diff(&UnitaryMatrix::diagonal(&diag)) <= 1e-15);

        let v = displacement_v(dims(1));
        let expected = UnitaryMatrix::from_raw(2, vec![c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(v.max_abs_diff(&expected) <= 1e-15);
    }

    #[test]
    fn displacement_algebra() {
        for q in 1..=5 {
            let d = dims(q);
            let u = displacement_u(d);
            let v = displacement_v(d);
            let eps = half_turns(2, d.dim() as i64);
            let minus_one = UnitaryMatrix::identity(d.dim()).scale(c(-1.0, 0.0));
            assert!(u.mul(&v).max_abs_diff(&v.mul(&u).scale(eps)) <= 1e-12);
            assert!(u.pow(d.dim() as u64).max_abs_diff(&minus_one) <= 1e-12);
            assert!(v.pow(d.dim() as u64).max_abs_diff(&minus_one) <= 1e-12);
            // V shifts position columns forward, wrapping with a sign.
            for j in 0..d.dim() {
                let col = v.column(j);
                let target = (j + 1) % d.dim();
                let sign = if j + 1 == d.dim() { -1.0 } else { 1.0 };
                for (r, e) in col.iter().enumerate() {
                    let expected = if r == target { sign } else { 0.0 };
                    assert!(close(*e, c(expected, 0.0), 1e-12));
                }
            }
        }
    }
}
