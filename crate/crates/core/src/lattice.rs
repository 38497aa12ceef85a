//! Hilbert-space dimensions, the half-integer position and momentum
//! lattices, bit/index conversions and dot-notation labels.
//!
//! Bit order is fixed throughout the crate: the first bit of any bit string
//! (slot 1) is the most significant, so `j = Σ x_l 2^(N-l)`.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest qubit count accepted by [`Dimensions`]. Exact rationals with
/// denominators up to `2^(N+1)` must fit in an `i64`.
pub const MAX_QUBITS: usize = 30;

/// Qubit count `N` together with the derived dimension `D = 2^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dimensions {
    qubits: usize,
}

impl Dimensions {
    pub fn new(qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::QubitCount(qubits));
        }
        Ok(Self { qubits })
    }

    /// Number of qubits `N`.
    #[inline]
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    /// Hilbert-space dimension `D = 2^N`.
    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    /// Effective Planck constant, fixed by `2πħ = 1/D`.
    pub fn hbar(&self) -> f64 {
        1.0 / (2.0 * std::f64::consts::PI * self.dim() as f64)
    }

    pub(crate) fn check_dot(&self, n: usize, min: usize) -> Result<()> {
        if n < min || n > self.qubits {
            return Err(Error::DotPosition {
                n,
                qubits: self.qubits,
                min,
            });
        }
        Ok(())
    }
}

/// A finite string of bits, first element most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitVec(Vec<u8>);

impl BitVec {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(&b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit(b));
        }
        Ok(Self(bits))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    /// Returns a copy with `bit` inserted in front.
    pub fn prepend(&self, bit: u8) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(bit);
        v.extend_from_slice(&self.0);
        Self(v)
    }

    /// Binary fraction `0.b_1 b_2 … b_k`, with a trailing guard bit `1`
    /// appended when `guard` is set.
    pub fn binary_fraction(&self, guard: bool) -> Rational64 {
        let k = self.0.len() + usize::from(guard);
        let mut num = bits_to_index(self) as i64;
        if guard {
            num = 2 * num + 1;
        }
        Rational64::new(num, 1i64 << k)
    }

    pub(crate) fn from_raw(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Self(bits)
    }
}

impl FromIterator<u8> for BitVec {
    /// Collects bits, treating any nonzero value as 1.
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Self(iter.into_iter().map(|b| u8::from(b != 0)).collect())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `j = Σ_l bits[l]·2^(len-l)`.
pub fn bits_to_index(bits: &BitVec) -> usize {
    bits.0.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

pub fn index_to_bits(len: usize, j: usize) -> Result<BitVec> {
    if len < usize::BITS as usize && j >> len != 0 {
        return Err(Error::IndexOutOfRange {
            index: j,
            dim: 1 << len,
        });
    }
    Ok(BitVec(
        (0..len).map(|l| ((j >> (len - 1 - l)) & 1) as u8).collect(),
    ))
}

/// Position eigenvalue `q_j = (j + 1/2)/D`.
pub fn position_eigenvalue(dims: Dimensions, j: usize) -> Result<Rational64> {
    half_integer_point(dims, j)
}

/// Momentum eigenvalue `p_k = (k + 1/2)/D`.
pub fn momentum_eigenvalue(dims: Dimensions, k: usize) -> Result<Rational64> {
    half_integer_point(dims, k)
}

fn half_integer_point(dims: Dimensions, j: usize) -> Result<Rational64> {
    let d = dims.dim();
    if j >= d {
        return Err(Error::IndexOutOfRange { index: j, dim: d });
    }
    Ok(Rational64::new(2 * j as i64 + 1, 2 * d as i64))
}

/// Label `a_{N-n}…a_1.x_1…x_n` of a partially Fourier-transformed basis state.
///
/// `xbits` holds `x_1…x_n` and `abits` holds `a_1…a_{N-n}`, both most
/// significant first. The rendered form lists the momentum bits in reverse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DotLabel {
    xbits: BitVec,
    abits: BitVec,
}

impl DotLabel {
    pub fn new(xbits: BitVec, abits: BitVec) -> Result<Self> {
        let qubits = xbits.len() + abits.len();
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::QubitCount(qubits));
        }
        Ok(Self { xbits, abits })
    }

    pub fn from_bits(xbits: &[u8], abits: &[u8]) -> Result<Self> {
        Self::new(BitVec::new(xbits.to_vec())?, BitVec::new(abits.to_vec())?)
    }

    /// Label whose register contents `|x_1…x_n, a_1…a_{N-n}⟩` form the
    /// computational basis index `j`.
    pub fn from_register_index(dims: Dimensions, n: usize, j: usize) -> Result<Self> {
        dims.check_dot(n, 0)?;
        let bits = index_to_bits(dims.qubits(), j)?.into_inner();
        let (x, a) = bits.split_at(n);
        Ok(Self {
            xbits: BitVec(x.to_vec()),
            abits: BitVec(a.to_vec()),
        })
    }

    /// All `2^N` labels with dot position `n`, ordered by register index.
    pub fn all(dims: Dimensions, n: usize) -> Result<Vec<Self>> {
        dims.check_dot(n, 0)?;
        (0..dims.dim())
            .map(|j| Self::from_register_index(dims, n, j))
            .collect()
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.xbits.len() + self.abits.len()
    }

    /// Dot position `n`, the number of position bits.
    #[inline]
    pub fn n(&self) -> usize {
        self.xbits.len()
    }

    pub fn dims(&self) -> Dimensions {
        Dimensions {
            qubits: self.qubits(),
        }
    }

    pub fn xbits(&self) -> &BitVec {
        &self.xbits
    }

    pub fn abits(&self) -> &BitVec {
        &self.abits
    }

    /// Computational basis index of `|x_1…x_n⟩ ⊗ |a_1…a_{N-n}⟩`.
    pub fn register_index(&self) -> usize {
        let a_len = self.abits.len();
        (bits_to_index(&self.xbits) << a_len) | bits_to_index(&self.abits)
    }
}

impl fmt::Display for DotLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.abits.bits().iter().rev() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        write!(f, ".{}", self.xbits)
    }
}

impl FromStr for DotLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (left, right) = parse_dotted(s)?;
        let mut abits = left;
        abits.reverse();
        Self::new(BitVec(right), BitVec(abits))
    }
}

/// Splits `"0110.01"` into raw bit vectors, left side in text order.
pub(crate) fn parse_dotted(s: &str) -> Result<(Vec<u8>, Vec<u8>)> {
    let mut parts = s.split('.');
    let (Some(left), Some(right), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::MalformedLabel(s.to_owned(), "expected exactly one dot"));
    };
    let to_bits = |part: &str| -> Result<Vec<u8>> {
        part.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::MalformedLabel(s.to_owned(), "only 0 and 1 are allowed")),
            })
            .collect()
    };
    Ok((to_bits(left)?, to_bits(right)?))
}

/// Phase-space cell of a dot-basis state: centre and widths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: Rational64,
    pub p: Rational64,
    pub qwidth: Rational64,
    pub pwidth: Rational64,
}

/// Cell centred at `q = 0.x_1…x_n1`, `p = 0.a_1…a_{N-n}1` with widths
/// `2^-n` and `2^-(N-n)`.
pub fn label_cell(label: &DotLabel) -> PhasePoint {
    PhasePoint {
        q: label.xbits.binary_fraction(true),
        p: label.abits.binary_fraction(true),
        qwidth: Rational64::new(1, 1i64 << label.n()),
        pwidth: Rational64::new(1, 1i64 << label.abits.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn dims(n: usize) -> Dimensions {
        Dimensions::new(n).unwrap()
    }

    #[test]
    fn dimensions_and_hbar() {
        for n in 1..=MAX_QUBITS {
            let d = dims(n);
            assert_eq!(d.dim(), 1usize << n);
            let prod = 2.0 * std::f64::consts::PI * d.hbar() * d.dim() as f64;
            assert!((prod - 1.0).abs() <= 4.0 * f64::EPSILON);
        }
        assert_eq!(Dimensions::new(0), Err(Error::QubitCount(0)));
        assert!(Dimensions::new(MAX_QUBITS + 1).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(position_eigenvalue(dims(3), 3).unwrap(), r(7, 16));
        assert_eq!(position_eigenvalue(dims(1), 0).unwrap(), r(1, 4));
        assert_eq!(position_eigenvalue(dims(2), 3).unwrap(), r(7, 8));
        assert_eq!(momentum_eigenvalue(dims(3), 5).unwrap(), r(11, 16));
        assert_eq!(momentum_eigenvalue(dims(1), 1).unwrap(), r(3, 4));
        assert_eq!(momentum_eigenvalue(dims(4), 0).unwrap(), r(1, 32));
        assert!(matches!(
            position_eigenvalue(dims(2), 4),
            Err(Error::IndexOutOfRange { index: 4, dim: 4 })
        ));
        assert!(momentum_eigenvalue(dims(1), 2).is_err());
    }

    #[test]
    fn position_lattice_is_evenly_spaced() {
        for n in 1..=8 {
            let d = dims(n);
            let qs: Vec<_> = (0..d.dim())
                .map(|j| position_eigenvalue(d, j).unwrap())
                .collect();
            assert!(qs[0] > r(0, 1) && *qs.last().unwrap() < r(1, 1));
            for w in qs.windows(2) {
                assert_eq!(w[1] - w[0], r(1, d.dim() as i64));
            }
        }
    }

    #[test]
    fn bit_conversions() {
        let b = |v: &[u8]| BitVec::new(v.to_vec()).unwrap();
        assert_eq!(bits_to_index(&b(&[1, 0, 1])), 5);
        assert_eq!(bits_to_index(&b(&[0, 0])), 0);
        assert_eq!(bits_to_index(&b(&[1, 1, 1, 1])), 15);
        assert_eq!(index_to_bits(3, 5).unwrap(), b(&[1, 0, 1]));
        assert_eq!(index_to_bits(2, 0).unwrap(), b(&[0, 0]));
        assert_eq!(index_to_bits(4, 15).unwrap(), b(&[1, 1, 1, 1]));
        assert!(index_to_bits(2, 4).is_err());
        assert_eq!(BitVec::new(vec![0, 2]), Err(Error::InvalidBit(2)));
    }

    #[test]
    fn bit_conversions_are_inverse_up_to_eight_bits() {
        for len in 0..=8 {
            for j in 0..(1usize << len) {
                let bits = index_to_bits(len, j).unwrap();
                assert_eq!(bits.len(), len);
                assert_eq!(bits_to_index(&bits), j);
            }
        }
    }

    #[test]
    fn label_cell_examples() {
        let cell = label_cell(&DotLabel::from_bits(&[0, 1], &[1, 0]).unwrap());
        assert_eq!((cell.q, cell.p), (r(3, 8), r(5, 8)));
        assert_eq!((cell.qwidth, cell.pwidth), (r(1, 4), r(1, 4)));

        let cell = label_cell(&DotLabel::from_bits(&[0, 0], &[]).unwrap());
        assert_eq!((cell.q, cell.p), (r(1, 8), r(1, 2)));
        assert_eq!((cell.qwidth, cell.pwidth), (r(1, 4), r(1, 1)));

        let cell = label_cell(&DotLabel::from_bits(&[], &[1, 1, 1]).unwrap());
        assert_eq!((cell.q, cell.p), (r(1, 2), r(15, 16)));
        assert_eq!((cell.qwidth, cell.pwidth), (r(1, 1), r(1, 8)));
    }

    #[test]
    fn label_cell_denominators() {
        for qubits in 1..=8 {
            let d = dims(qubits);
            for n in 0..=qubits {
                for label in DotLabel::all(d, n).unwrap() {
                    let cell = label_cell(&label);
                    assert_eq!((1i64 << (n + 1)) % cell.q.denom(), 0);
                    assert_eq!((1i64 << (qubits - n + 1)) % cell.p.denom(), 0);
                    assert!(cell.q > r(0, 1) && cell.q < r(1, 1));
                    assert!(cell.p > r(0, 1) && cell.p < r(1, 1));
                }
            }
        }
    }

    #[test]
    fn label_text_form() {
        let label: DotLabel = "01.10".parse().unwrap();
        assert_eq!(label.n(), 2);
        assert_eq!(label.xbits().bits(), &[1, 0]);
        assert_eq!(label.abits().bits(), &[1, 0]);
        assert_eq!(label.to_string(), "01.10");

        let label: DotLabel = ".1".parse().unwrap();
        assert_eq!((label.qubits(), label.n()), (1, 1));
        let label: DotLabel = "110.".parse().unwrap();
        assert_eq!((label.qubits(), label.n()), (3, 0));
        assert_eq!(label.abits().bits(), &[0, 1, 1]);

        for bad in ["0110", "0.1.1", "01.2", ".", ""] {
            assert!(bad.parse::<DotLabel>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn label_text_round_trips_for_all_small_labels() {
        for qubits in 1..=6 {
            for n in 0..=qubits {
                for label in DotLabel::all(dims(qubits), n).unwrap() {
                    let text = label.to_string();
                    assert_eq!(text.len(), qubits + 1);
                    assert_eq!(text.parse::<DotLabel>().unwrap(), label);
                }
            }
        }
    }

    #[test]
    fn register_index_matches_enumeration() {
        let d = dims(5);
        for n in 0..=5 {
            for (j, label) in DotLabel::all(d, n).unwrap().iter().enumerate() {
                assert_eq!(label.register_index(), j);
            }
        }
    }
}
