//! Packed bit vectors with popcount-based inner product and Hamming kernels.

use crate::error::{MixcutError, Result};

const WORD_BITS: usize = 64;

/// A fixed-length vector over {0,1}, packed into 64-bit words.
///
/// Bits past `len` in the last word are always zero, so word-wise popcounts
/// never need masking.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for k in 0..len {
            v.set(k, true);
        }
        v
    }

    /// Builds a vector from plain 0/1 values; any nonzero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (k, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(k, true);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (k, &b) in bits.iter().enumerate() {
            v.set(k, b);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Returns bit `k` as 0 or 1. Panics if `k >= len`.
    #[inline]
    pub fn get(&self, k: usize) -> u8 {
        assert!(
            k < self.len,
            "bit index {k} out of range for length {}",
            self.len
        );
        ((self.words[k / WORD_BITS] >> (k % WORD_BITS)) & 1) as u8
    }

    #[inline]
    pub fn set(&mut self, k: usize, value: bool) {
        assert!(
            k < self.len,
            "bit index {k} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (k % WORD_BITS);
        if value {
            self.words[k / WORD_BITS] |= mask;
        } else {
            self.words[k / WORD_BITS] &= !mask;
        }
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|k| self.get(k)).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len).map(move |k| self.get(k))
    }

    pub fn popcount(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.len != other.len {
            return Err(MixcutError::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        Ok(())
    }

    /// Inner product over {0,1}: number of coordinates where both are 1.
    pub fn score(&self, other: &Self) -> Result<u32> {
        self.check_len(other)?;
        Ok(self.score_unchecked(other))
    }

    /// Number of coordinates where the two vectors differ.
    pub fn hamming(&self, other: &Self) -> Result<u32> {
        self.check_len(other)?;
        Ok(self.hamming_unchecked(other))
    }

    #[inline]
    pub(crate) fn score_unchecked(&self, other: &Self) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    #[inline]
    pub(crate) fn hamming_unchecked(&self, other: &Self) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }
}
