//! Quotients of ℕ by ceers: the admissibility decoder, and the effective
//! steps between total representations, surjections from ℕ and quotients.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::coding::decode_word;
use crate::kernel::name::interleave_words;
use crate::kernel::observe::{dovetail_winner, tasks};
use crate::kernel::{Fuel, Name, Nat, Observation, Word};
use crate::spaces::basis::EffectiveBasis;
use crate::spaces::open::{DiscretenessWitness, OpenSetCode};

use super::presentation::{saturate, CeerPresentation};

type FilterFn = dyn Fn(&OpenSetCode, Fuel) -> bool + Send + Sync;

/// A name of an element of O(O(X)): semidecides which opens it contains.
#[derive(Clone)]
pub struct NeighborhoodFilter {
    contains: Arc<FilterFn>,
}

impl fmt::Debug for NeighborhoodFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("NeighborhoodFilter")
    }
}

impl NeighborhoodFilter {
    pub fn new(contains: impl Fn(&OpenSetCode, Fuel) -> bool + Send + Sync + 'static) -> Self {
        NeighborhoodFilter { contains: Arc::new(contains) }
    }

    /// The neighbourhood filter of the point named by `x`.
    pub fn of_point(x: &Name) -> Self {
        let x = x.clone();
        NeighborhoodFilter::new(move |u, f| u.accepts_prefix(&x.prefix(f), f))
    }

    /// A malformed filter containing no open at all.
    pub fn empty() -> Self {
        NeighborhoodFilter::new(|_, _| false)
    }

    pub fn contains(&self, u: &OpenSetCode) -> Observation {
        let (me, u) = (self.clone(), u.clone());
        Observation::new(move |f| (me.contains)(&u, f))
    }
}

/// Searches, by dovetailing over `m`, for some `{[m]}` in the filter; any
/// such `m` represents the filter's point.
pub fn quotient_admissibility_decode(pres: &CeerPresentation, filter: &NeighborhoodFilter, fuel: Fuel) -> Result<Nat> {
    let basis = EffectiveBasis::ceer_quotient(pres);
    let filter = filter.clone();
    let ts = tasks(move |m| Some(filter.contains(&basis.basis_at(m as Nat))));
    dovetail_winner(&ts, fuel)
        .map(|(m, _)| m as Nat)
        .ok_or(Error::FuelExhausted { fuel, context: "no class found in the filter".into() })
}

/// Whether `e` accepts the pair `(w, w)` having read exactly `2|w|` symbols.
fn accepts_diagonal(e: &OpenSetCode, w: &[Nat]) -> bool {
    let len = 2 * w.len() as Fuel;
    e.accepts_prefix(&interleave_words(w, w), len)
}

/// The words `w`, in order of their codes below `fuel`, on which `e`
/// writes its first 1 upon reading `(w, w)`: it accepts `(w, w)` with fuel
/// `2|w|` but not the pair of the one-shorter prefix. The list is prefix-free.
pub fn extract_equality_prefixes(e: &DiscretenessWitness, fuel: Fuel) -> Vec<Word> {
    let mut out = Vec::new();
    for i in 0..fuel {
        let w = decode_word(i);
        if accepts_diagonal(&e.code, &w) && (w.is_empty() || !accepts_diagonal(&e.code, &w[..w.len() - 1])) {
            out.push(w);
        }
    }
    out
}

/// `s(i)` realized by `wᵢ 0^ω`.
#[derive(Clone, Debug)]
pub struct PrefixSurjection {
    words: Vec<Word>,
}

impl PrefixSurjection {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn name(&self, i: usize) -> Result<Name> {
        self.words
            .get(i)
            .map(|w| Name::from_word(w.clone(), 0))
            .ok_or(Error::IndexUnavailable { index: i as Nat, available: self.words.len() as Nat })
    }
}

pub fn surjection_from_prefixes(ws: Vec<Word>) -> PrefixSurjection {
    PrefixSurjection { words: ws }
}

type SurjectionFn = dyn Fn(Nat) -> Name + Send + Sync;

/// `X ≅ ℕ/≅` where `n ≅ m` iff `s(n) = s(m)`.
#[derive(Clone)]
pub struct QuotientIso {
    s: Arc<SurjectionFn>,
    d: DiscretenessWitness,
}

impl fmt::Debug for QuotientIso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("QuotientIso")
    }
}

impl QuotientIso {
    /// `φ([n]) = s(n)`.
    pub fn phi(&self, n: Nat) -> Name {
        (self.s)(n)
    }

    /// Some `n` with `s(n) = x`: the first found under the dovetail schedule.
    pub fn phi_inv(&self, x: &Name, fuel: Fuel) -> Result<Nat> {
        let (s, d, x) = (self.s.clone(), self.d.clone(), x.clone());
        let ts = tasks(move |n| Some(d.equal(&s(n as Nat), &x)));
        dovetail_winner(&ts, fuel)
            .map(|(n, _)| n as Nat)
            .ok_or(Error::FuelExhausted { fuel, context: "no preimage under s found".into() })
    }

    /// The relation `≅`, semidecided by the witness.
    pub fn congruent(&self, n: Nat, m: Nat) -> Observation {
        self.d.equal(&self.phi(n), &self.phi(m))
    }
}

pub fn iso_with_quotient(s: impl Fn(Nat) -> Name + Send + Sync + 'static, d: &DiscretenessWitness) -> QuotientIso {
    QuotientIso { s: Arc::new(s), d: d.clone() }
}

/// The injection of a discrete Hausdorff space with a surjection whose
/// equality `s(i) = s(j)` is decided by `eq`, restricted to `0..universe`.
#[derive(Clone)]
pub struct DecidableInjection {
    universe: Nat,
    eq: Arc<dyn Fn(Nat, Nat) -> bool + Send + Sync>,
    members: Vec<Nat>,
}

impl fmt::Debug for DecidableInjection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DecidableInjection(S = {:?})", self.members)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectionTable {
    pub s_members: Vec<Nat>,
    pub iota: Vec<Nat>,
}

impl DecidableInjection {
    /// `n ∈ S` iff `s(i) ≠ s(n)` for all `i < n`.
    pub fn in_s(&self, n: Nat) -> bool {
        (0..n).all(|i| !(self.eq)(i, n))
    }

    /// `σ(k)`, the `k`-th element of `S`.
    pub fn sigma(&self, k: usize) -> Result<Nat> {
        self.members.get(k).copied().ok_or(Error::NotInfinite { size: self.members.len() as Nat })
    }

    /// `ι(s(n))`: the element of `S` naming the same point as `n`.
    pub fn iota(&self, n: Nat) -> Nat {
        (0..=n).find(|&i| (self.eq)(i, n)).unwrap_or(n)
    }

    /// The position of `ι(s(n))` in `S`, the isomorphism with ℕ.
    pub fn index_of(&self, n: Nat) -> usize {
        let i = self.iota(n);
        self.members.binary_search(&i).expect("ι lands in S")
    }

    pub fn table(&self) -> InjectionTable {
        InjectionTable { s_members: self.members.clone(), iota: (0..self.universe).map(|n| self.iota(n)).collect() }
    }
}

pub fn injection_when_decidable(
    eq: impl Fn(Nat, Nat) -> bool + Send + Sync + 'static,
    universe: Nat,
) -> DecidableInjection {
    let eq: Arc<dyn Fn(Nat, Nat) -> bool + Send + Sync> = Arc::new(eq);
    let members = (0..universe).filter(|&n| (0..n).all(|i| !eq(i, n))).collect();
    DecidableInjection { universe, eq, members }
}

/// The equality realizer of ℕ/R on names carrying a representative first.
pub fn ceer_discreteness(pres: &CeerPresentation) -> DiscretenessWitness {
    let pres = pres.clone();
    DiscretenessWitness::from_pair_test("ceer-equal", move |l, r, f| match (l.first(), r.first()) {
        (Some(&a), Some(&b)) => a == b || saturate(&pres, f).same(a, b),
        _ => false,
    })
}
