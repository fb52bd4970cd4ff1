//! Names: total streams of naturals whose positions become available as
//! fuel grows.
//!
//! A name never retracts: once position `k` is available at fuel `f` it is
//! available, with the same value, at every larger fuel. Reading a prefix
//! at fuel `f` returns at most `f` symbols, so inspecting position `k`
//! always costs at least `k + 1` fuel.

use std::fmt;
use std::sync::Arc;

use super::coding::{Nat, Word};

/// Fuel: an explicit step budget.
pub type Fuel = u64;

type Producer = dyn Fn(usize, Fuel) -> Option<Nat> + Send + Sync;

#[derive(Clone)]
pub struct Name {
    producer: Arc<Producer>,
}

/// Which half of an interleaved product name to project out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Name {
    /// Wraps a raw producer. The producer must be fuel-monotone.
    pub fn from_producer(f: impl Fn(usize, Fuel) -> Option<Nat> + Send + Sync + 'static) -> Self {
        Name { producer: Arc::new(f) }
    }

    /// A name whose every position is immediately available.
    pub fn total(f: impl Fn(usize) -> Nat + Send + Sync + 'static) -> Self {
        Name::from_producer(move |pos, _| Some(f(pos)))
    }

    pub fn constant(n: Nat) -> Self {
        Name::total(move |_| n)
    }

    /// `w` followed by `fill` forever.
    pub fn from_word(w: impl Into<Word>, fill: Nat) -> Self {
        let w: Word = w.into();
        Name::total(move |pos| w.get(pos).copied().unwrap_or(fill))
    }

    /// `w` followed by `tail`.
    pub fn prepend(w: impl Into<Word>, tail: Name) -> Self {
        let w: Word = w.into();
        Name::from_producer(move |pos, fuel| match w.get(pos) {
            Some(&s) => Some(s),
            None => tail.at(pos - w.len(), fuel),
        })
    }

    /// The same stream, with every position held back by `delay` extra fuel.
    pub fn delayed(&self, delay: Fuel) -> Self {
        let inner = self.clone();
        Name::from_producer(move |pos, fuel| if fuel < delay { None } else { inner.at(pos, fuel - delay) })
    }

    /// Position `pos` if available at `fuel`.
    pub fn at(&self, pos: usize, fuel: Fuel) -> Option<Nat> {
        (self.producer)(pos, fuel)
    }

    /// Position `pos`, searching fuel up to `max_fuel`.
    pub fn value_within(&self, pos: usize, max_fuel: Fuel) -> Option<Nat> {
        self.at(pos, max_fuel)
    }

    /// The longest run of available positions among the first `fuel`.
    pub fn prefix(&self, fuel: Fuel) -> Word {
        let mut out = Vec::new();
        for pos in 0..fuel as usize {
            match self.at(pos, fuel) {
                Some(v) => out.push(v),
                None => break,
            }
        }
        Word(out)
    }

    /// The first `len` symbols, evaluated at `fuel` (shorter if not all are available).
    pub fn take(&self, len: usize, fuel: Fuel) -> Word {
        let mut out = Vec::with_capacity(len);
        for pos in 0..len {
            match self.at(pos, fuel) {
                Some(v) => out.push(v),
                None => break,
            }
        }
        Word(out)
    }

    /// Lift a pointwise map over symbols.
    pub fn map(&self, f: impl Fn(Nat) -> Nat + Send + Sync + 'static) -> Self {
        let inner = self.clone();
        Name::from_producer(move |pos, fuel| inner.at(pos, fuel).map(&f))
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Name({}…)", self.take(8, 64))
    }
}

/// The product name: even positions from `p`, odd positions from `q`.
pub fn interleave(p: &Name, q: &Name) -> Name {
    let (p, q) = (p.clone(), q.clone());
    Name::from_producer(move |pos, fuel| if pos % 2 == 0 { p.at(pos / 2, fuel) } else { q.at(pos / 2, fuel) })
}

pub fn project(r: &Name, side: Side) -> Name {
    let r = r.clone();
    let offset = match side {
        Side::Left => 0,
        Side::Right => 1,
    };
    Name::from_producer(move |pos, fuel| r.at(2 * pos + offset, fuel))
}

/// Splits an interleaved prefix into its two coordinate prefixes.
pub fn split_interleaved(prefix: &[Nat]) -> (Word, Word) {
    let left = prefix.iter().step_by(2).copied().collect();
    let right = prefix.iter().skip(1).step_by(2).copied().collect();
    (Word(left), Word(right))
}

/// Interleaves two finite words up to the length where both still have symbols.
pub fn interleave_words(p: &[Nat], q: &[Nat]) -> Word {
    let mut out = Vec::with_capacity(p.len() + q.len());
    for i in 0.. {
        match p.get(i) {
            Some(&a) => out.push(a),
            None => break,
        }
        match q.get(i) {
            Some(&b) => out.push(b),
            None => break,
        }
    }
    Word(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleave_of_constant_streams() {
        let r = interleave(&Name::constant(0), &Name::constant(1));
        assert_eq!(r.take(4, 10).0, vec![0, 1, 0, 1]);
    }

    #[test]
    fn projections_recover_components() {
        let p = Name::total(|i| i as Nat * 3);
        let q = Name::total(|i| 100 + i as Nat);
        let r = interleave(&p, &q);
        assert_eq!(project(&r, Side::Left).at(5, 100), p.at(5, 100));
        assert_eq!(project(&r, Side::Right).at(0, 100), q.at(0, 100));
    }

    #[test]
    fn delayed_names_are_fuel_monotone() {
        let p = Name::constant(7).delayed(5);
        assert_eq!(p.at(0, 4), None);
        assert_eq!(p.at(0, 5), Some(7));
        assert!(p.prefix(3).is_empty());
        assert_eq!(p.prefix(8).len(), 8);
    }

    #[test]
    fn prefix_length_is_bounded_by_fuel() {
        let p = Name::constant(2);
        assert_eq!(p.prefix(0).len(), 0);
        assert_eq!(p.prefix(6).len(), 6);
    }

    #[test]
    fn split_and_interleave_words() {
        let w = interleave_words(&[1, 2, 3], &[4, 5]);
        assert_eq!(w.0, vec![1, 4, 2, 5, 3]);
        let (l, r) = split_interleaved(&w);
        assert_eq!(l.0, vec![1, 2, 3]);
        assert_eq!(r.0, vec![4, 5]);
    }
}
