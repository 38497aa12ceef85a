//! Classical baker's transformation as a shift on finite symbol windows.
//!
//! This is the exact oracle for the quantum label dynamics: all arithmetic is
//! done in rationals, and symbols outside the stored window decode as 0.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{parse_dotted, BitVec, DotLabel};

/// Finite window `…s_{-1}s_0.s_1s_2…` of a bi-infinite symbol string.
///
/// `left` stores `s_0, s_{-1}, s_{-2}, …` moving outward from the dot and
/// `right` stores `s_1, s_2, …`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SymbolString {
    pub left: BitVec,
    pub right: BitVec,
}

impl SymbolString {
    pub fn new(left: BitVec, right: BitVec) -> Self {
        Self { left, right }
    }

    pub fn from_bits(left: &[u8], right: &[u8]) -> Result<Self> {
        Ok(Self {
            left: BitVec::new(left.to_vec())?,
            right: BitVec::new(right.to_vec())?,
        })
    }

    /// Embeds a dot label with all-zero context: `s_0 = a_1`, `s_1 = x_1`.
    pub fn from_label(label: &DotLabel) -> Self {
        Self {
            left: label.abits().clone(),
            right: label.xbits().clone(),
        }
    }
}

impl fmt::Display for SymbolString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.left.bits().iter().rev() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        write!(f, ".{}", self.right)
    }
}

impl FromStr for SymbolString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut left, right) = parse_dotted(s)?;
        left.reverse();
        Ok(Self {
            left: BitVec::from_raw(left),
            right: BitVec::from_raw(right),
        })
    }
}

/// Phase-space point `(q, p)` of a window:
/// `q = Σ_{k≥1} s_k 2^-k`, `p = Σ_{k≥0} s_{-k} 2^{-k-1}`.
pub fn decode(s: &SymbolString) -> (Rational64, Rational64) {
    (s.right.binary_fraction(false), s.left.binary_fraction(false))
}

/// One step of the shift `s'_k = s_{k+1}`: the dot moves one symbol right.
pub fn shift(s: &SymbolString) -> Result<SymbolString> {
    let (&first, rest) = s.right.bits().split_first().ok_or(Error::EmptyWindow)?;
    Ok(SymbolString {
        left: s.left.prepend(first),
        right: BitVec::from_raw(rest.to_vec()),
    })
}

/// Stretch `q` and squeeze `p` by two, then stack the right half on top.
///
/// Expects `0 ≤ q, p < 1`.
pub fn geometric_baker(q: Rational64, p: Rational64) -> (Rational64, Rational64) {
    debug_assert!(q >= Rational64::zero() && q < Rational64::one());
    debug_assert!(p >= Rational64::zero() && p < Rational64::one());
    let stretched = q * 2;
    let half = stretched.floor();
    let two = Rational64::from_integer(2);
    (stretched - half, (p + half) / two)
}

/// Moves the dot of a label one place right: `x_1` becomes the new `a_1`.
pub fn label_shift(label: &DotLabel) -> Result<DotLabel> {
    let (&x1, rest) = label
        .xbits()
        .bits()
        .split_first()
        .ok_or(Error::DotPosition {
            n: 0,
            qubits: label.qubits(),
            min: 1,
        })?;
    DotLabel::new(BitVec::from_raw(rest.to_vec()), label.abits().prepend(x1))
}
