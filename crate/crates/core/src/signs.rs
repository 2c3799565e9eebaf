//! Packed ±1 vectors.
//!
//! A set bit stores −1, a clear bit +1. Dot products reduce to
//! `len − 2·popcount(a ⊕ b)`, so every orthogonality test stays in exact
//! integer arithmetic.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignVec {
    len: usize,
    words: Vec<u64>,
}

impl SignVec {
    /// All-plus vector of the given length.
    pub fn plus(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_signs(signs: &[i8]) -> Result<Self> {
        let mut v = Self::plus(signs.len());
        for (c, &s) in signs.iter().enumerate() {
            match s {
                1 => {}
                -1 => v.set(c, -1),
                other => {
                    return Err(Error::NonSignEntries {
                        row: 0,
                        col: c,
                        value: other as i64,
                    })
                }
            }
        }
        Ok(v)
    }

    /// Builds from a predicate that is `true` where the entry is −1.
    pub fn from_minus_fn(len: usize, mut minus: impl FnMut(usize) -> bool) -> Self {
        let mut v = Self::plus(len);
        for c in 0..len {
            if minus(c) {
                v.words[c / 64] |= 1 << (c % 64);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn is_minus(&self, c: usize) -> bool {
        self.words[c / 64] >> (c % 64) & 1 == 1
    }

    /// Entry `c` as +1 or −1.
    #[inline]
    pub fn get(&self, c: usize) -> i8 {
        if self.is_minus(c) {
            -1
        } else {
            1
        }
    }

    pub fn set(&mut self, c: usize, sign: i8) {
        let bit = 1u64 << (c % 64);
        if sign < 0 {
            self.words[c / 64] |= bit;
        } else {
            self.words[c / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, c: usize) {
        self.words[c / 64] ^= 1 << (c % 64);
    }

    pub fn negate(&mut self) {
        for w in &mut self.words {
            *w = !*w;
        }
        self.clear_tail();
    }

    pub fn minus_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of positions where the two vectors carry different signs.
    pub fn disagreements(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn agreements(&self, other: &Self) -> usize {
        self.len - self.disagreements(other)
    }

    pub fn dot(&self, other: &Self) -> i64 {
        self.len as i64 - 2 * self.disagreements(other) as i64
    }

    pub fn sum(&self) -> i64 {
        self.len as i64 - 2 * self.minus_count() as i64
    }

    pub fn is_all_plus(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = i8> + '_ {
        (0..self.len).map(|c| self.get(c))
    }

    /// Entry-wise product, i.e. Kronecker factor `a ⊗ b` for one row pair.
    pub fn kron(&self, other: &Self) -> Self {
        let len = self.len * other.len;
        Self::from_minus_fn(len, |c| {
            self.is_minus(c / other.len) != other.is_minus(c % other.len)
        })
    }

    /// Reorders entries so that entry `c` of the result is entry `perm[c]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::from_minus_fn(self.len, |c| self.is_minus(perm[c]))
    }

    pub fn to_plus_minus(&self) -> String {
        (0..self.len)
            .map(|c| if self.is_minus(c) { '-' } else { '+' })
            .collect()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for SignVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignVec({})", self.to_plus_minus())
    }
}

impl fmt::Display for SignVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plus_minus())
    }
}
