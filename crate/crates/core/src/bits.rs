//! Fixed-width bit strings packed into 64-bit words.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::RandomSource;

const WORD_BITS: usize = 64;

/// A fixed-length bit string. Index 0 is the leftmost bit of the textual
/// rendering, so `"1011"` has bit 0 set, bit 1 clear, bits 2 and 3 set.
///
/// Unused high bits of the last word are kept at zero, which lets equality,
/// weight, and inner products operate word-wise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD_BITS)],
            len,
        }
    }

    /// A fresh uniform bit string drawn from `rng`.
    pub fn random(len: usize, rng: &mut RandomSource) -> Self {
        let mut out = Self::zeros(len);
        for word in &mut out.words {
            *word = rng.next_word();
        }
        out.mask_tail();
        out
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut out = Self::zeros(bits.len());
        for (i, &bit) in bits.iter().enumerate() {
            if bit {
                out.words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> Result<bool> {
        self.check(index)?;
        Ok(self.words[index / WORD_BITS] >> (index % WORD_BITS) & 1 == 1)
    }

    pub fn set(&mut self, index: usize, value: bool) -> Result<()> {
        self.check(index)?;
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
        Ok(())
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Inner product over GF(2): XOR over all positions of the pairwise AND.
    pub fn dot(&self, other: &BitString) -> Result<bool> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        let folded = self
            .words
            .iter()
            .zip(&other.words)
            .fold(0u64, |acc, (a, b)| acc ^ (a & b));
        Ok(folded.count_ones() % 2 == 1)
    }

    /// Number of positions where the two strings differ.
    pub fn hamming(&self, other: &BitString) -> Result<usize> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// Splits into the first `mid` bits and the rest.
    pub fn split_at(&self, mid: usize) -> (BitString, BitString) {
        assert!(mid <= self.len, "split point {mid} beyond length {}", self.len);
        let mut left = BitString::zeros(mid);
        let mut right = BitString::zeros(self.len - mid);
        for i in 0..mid {
            left.set(i, self.get(i).unwrap()).unwrap();
        }
        for i in mid..self.len {
            right.set(i - mid, self.get(i).unwrap()).unwrap();
        }
        (left, right)
    }

    /// Concatenation `self ‖ other`.
    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = BitString::zeros(self.len + other.len);
        for i in 0..self.len {
            out.set(i, self.get(i).unwrap()).unwrap();
        }
        for i in 0..other.len {
            out.set(self.len + i, other.get(i).unwrap()).unwrap();
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i).unwrap())
    }

    fn check(&self, index: usize) -> Result<()> {
        if index >= self.len {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.len,
            });
        }
        Ok(())
    }

    fn mask_tail(&mut self) {
        let tail = self.len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(Error::InvalidBitChar(other)),
            }
        }
        Ok(Self::from_bits(&bits))
    }
}
