//! Cantor pairing and the length-prefixed word coding built on top of it.
//!
//! The word coding is a bijection between finite sequences of naturals and
//! naturals: the empty word has code `0`, and a nonempty word `w` of length
//! `k` has code `1 + pair(k - 1, tuple(w))`, where `tuple` folds the symbols
//! from the right with [`pair`]. Decoding is total.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

/// A natural number.
pub type Nat = u64;

/// Cantor pairing `(m + n)(m + n + 1) / 2 + n`.
///
/// Panics when the result does not fit in a `u64`; see [`checked_pair`].
pub fn pair(m: Nat, n: Nat) -> Nat {
    checked_pair(m, n).expect("pair: code overflows u64")
}

pub fn checked_pair(m: Nat, n: Nat) -> Option<Nat> {
    let s = (m as u128) + (n as u128);
    let code = s.checked_mul(s + 1)? / 2 + n as u128;
    u64::try_from(code).ok()
}

/// Inverse of [`pair`].
pub fn unpair(k: Nat) -> (Nat, Nat) {
    let k = k as u128;
    // largest s with s(s+1)/2 <= k
    let mut s = ((8 * k + 1).isqrt() - 1) / 2;
    while s * (s + 1) / 2 > k {
        s -= 1;
    }
    while (s + 1) * (s + 2) / 2 <= k {
        s += 1;
    }
    let n = k - s * (s + 1) / 2;
    let m = s - n;
    (m as Nat, n as Nat)
}

/// A finite word over the naturals.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Nat>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn is_prefix_of(&self, other: &[Nat]) -> bool {
        other.len() >= self.0.len() && other[..self.0.len()] == self.0[..]
    }

    /// Two words are compatible when one is a prefix of the other.
    pub fn compatible(&self, other: &[Nat]) -> bool {
        let k = self.0.len().min(other.len());
        self.0[..k] == other[..k]
    }

    pub fn push(&mut self, symbol: Nat) {
        self.0.push(symbol);
    }

    pub fn into_inner(self) -> Vec<Nat> {
        self.0
    }
}

impl Deref for Word {
    type Target = [Nat];

    fn deref(&self) -> &[Nat] {
        &self.0
    }
}

impl From<Vec<Nat>> for Word {
    fn from(v: Vec<Nat>) -> Self {
        Word(v)
    }
}

impl From<&[Nat]> for Word {
    fn from(v: &[Nat]) -> Self {
        Word(v.to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Code of a word, or `None` if it does not fit in a `u64`.
pub fn encode_word(w: &[Nat]) -> Option<Nat> {
    let Some((&last, init)) = w.split_last() else {
        return Some(0);
    };
    let mut tuple = last;
    for &s in init.iter().rev() {
        tuple = checked_pair(s, tuple)?;
    }
    checked_pair(w.len() as Nat - 1, tuple)?.checked_add(1)
}

pub fn decode_word(code: Nat) -> Word {
    if code == 0 {
        return Word::empty();
    }
    let (len_minus_one, mut tuple) = unpair(code - 1);
    let mut out = Vec::with_capacity(len_minus_one as usize + 1);
    for _ in 0..len_minus_one {
        let (head, rest) = unpair(tuple);
        out.push(head);
        tuple = rest;
    }
    out.push(tuple);
    Word(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(0, 0), 0);
        // (1+2)(1+2+1)/2 + 2
        assert_eq!(pair(1, 2), 8);
        assert_eq!(unpair(8), (1, 2));
    }

    #[test]
    fn pairing_round_trip_exhaustive() {
        for k in 0..10_000 {
            let (m, n) = unpair(k);
            assert_eq!(pair(m, n), k);
        }
        for m in 0..100 {
            for n in 0..100 {
                assert_eq!(unpair(pair(m, n)), (m, n));
            }
        }
    }

    #[test]
    fn unpair_large_values() {
        for k in [u64::MAX, u64::MAX - 1, 1 << 63, (1 << 40) + 17] {
            let (m, n) = unpair(k);
            assert_eq!(checked_pair(m, n), Some(k));
        }
        assert_eq!(checked_pair(u64::MAX, 1), None);
    }

    #[test]
    fn word_coding_examples() {
        assert_eq!(encode_word(&[]), Some(0));
        assert_eq!(decode_word(encode_word(&[3, 1, 4]).unwrap()).0, vec![3, 1, 4]);
        // 1 + pair(0, 5) = 1 + 5*6/2 + 5
        assert_eq!(encode_word(&[5]), Some(21));
    }

    #[test]
    fn word_coding_round_trip_exhaustive() {
        for code in 0..10_000 {
            let w = decode_word(code);
            assert_eq!(encode_word(&w), Some(code), "word {w:?}");
        }
    }

    #[test]
    fn long_words_overflow_cleanly() {
        let w = vec![1000; 12];
        assert_eq!(encode_word(&w), None);
    }

    #[test]
    fn prefix_relations() {
        let w = Word(vec![3, 1]);
        assert!(w.is_prefix_of(&[3, 1, 7]));
        assert!(!w.is_prefix_of(&[3]));
        assert!(w.compatible(&[3]));
        assert!(!w.compatible(&[3, 2]));
        assert!(Word::empty().is_prefix_of(&[]));
    }
}
