//! Radix-2 butterflies for the antiperiodic transform.
//!
//! The half-integer kernel factors as
//! `K[x, a] = e^{iπ/2M} · e^{iπx/M} · e^{2πi x a/M} · e^{iπa/M} / √M`,
//! so each transform is a standard positive-sign DFT sandwiched between two
//! diagonal phase rotations.

use num_complex::Complex64;

use super::half_turns;

pub(crate) struct AntiperiodicFft {
    len: usize,
    /// `e^{iπa/M}`, applied to the input index.
    pre: Vec<Complex64>,
    /// `e^{iπ(2x+1)/2M} / √M`, applied to the output index.
    post: Vec<Complex64>,
    /// `e^{2πik/M}` for `k < M/2`.
    twiddles: Vec<Complex64>,
}

impl AntiperiodicFft {
    pub(crate) fn new(len: usize) -> Self {
        assert!(len.is_power_of_two(), "transform length must be a power of two");
        let m = len as i64;
        let scale = 1.0 / (len as f64).sqrt();
        Self {
            len,
            pre: (0..m).map(|a| half_turns(a, m)).collect(),
            post: (0..m).map(|x| half_turns(2 * x + 1, 2 * m) * scale).collect(),
            twiddles: (0..m / 2).map(|k| half_turns(2 * k, m)).collect(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn forward(&self, chunk: &mut [Complex64]) {
        debug_assert_eq!(chunk.len(), self.len);
        chunk.iter_mut().zip(&self.pre).for_each(|(v, p)| *v *= p);
        self.dft(chunk, false);
        chunk.iter_mut().zip(&self.post).for_each(|(v, p)| *v *= p);
    }

    pub(crate) fn inverse(&self, chunk: &mut [Complex64]) {
        debug_assert_eq!(chunk.len(), self.len);
        chunk.iter_mut().zip(&self.post).for_each(|(v, p)| *v *= p.conj());
        self.dft(chunk, true);
        chunk.iter_mut().zip(&self.pre).for_each(|(v, p)| *v *= p.conj());
    }

    /// Unnormalized in-place DFT, `Σ_a v[a] e^{±2πi x a/M}`.
    fn dft(&self, v: &mut [Complex64], conjugate: bool) {
        let n = self.len;
        if n < 2 {
            return;
        }
        let bits = n.trailing_zeros();
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                v.swap(i, j);
            }
        }
        let mut size = 2;
        while size <= n {
            let half = size / 2;
            let stride = n / size;
            for block in v.chunks_exact_mut(size) {
                let (lo, hi) = block.split_at_mut(half);
                for (k, (u, t)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                    let w = self.twiddles[k * stride];
                    let w = if conjugate { w.conj() } else { w };
                    let t_w = *t * w;
                    *t = *u - t_w;
                    *u += t_w;
                }
            }
            size *= 2;
        }
    }
}
