//! `H_A`: a two-point Hausdorff space whose singleton `{b}` is open only
//! relative to an enumeration of `A`.
//!
//! A name is a head `n` followed by a tail over `ℕ ⊎ {⊥}`, written with 0
//! as the pause and values shifted by one. If `n ∉ A` the tail enumerates
//! `A` and the name denotes `a`; if `n ∈ A` the tail enumerates some subset
//! of `ℕ ∖ A` and the name denotes `b`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::kernel::{unpair, Fuel, Name, Nat, Observation};
use crate::spaces::descriptor::{Denotation, SpaceDescriptor, SpaceTag};
use crate::spaces::open::{HausdorffWitness, HausdorffWitnessSequence, OpenSetCode, OvertCode};
use crate::spaces::separation::SamplePair;

use super::oracle::{Enumeration, OracleSet};

/// How far the constructor looks for a member and a non-member of `A`.
pub const HA_PROBE_BOUND: Nat = 10_000;

#[derive(Clone, Debug)]
pub struct HaSpace {
    a: OracleSet,
    least_member: Nat,
    least_non_member: Nat,
}

/// The values listed by a tail prefix.
fn tail_set(w: &[Nat]) -> BTreeSet<Nat> {
    w.iter().skip(1).filter(|&&s| s > 0).map(|&s| s - 1).collect()
}

impl HaSpace {
    /// Requires `A` to have a member and a non-member below [`HA_PROBE_BOUND`].
    pub fn new(a: &OracleSet) -> Result<Self> {
        let least_member = (0..HA_PROBE_BOUND).find(|&n| a.contains(n));
        let least_non_member = (0..HA_PROBE_BOUND).find(|&n| !a.contains(n));
        match (least_member, least_non_member) {
            (Some(m), Some(n)) => Ok(HaSpace { a: a.clone(), least_member: m, least_non_member: n }),
            (None, _) => Err(Error::Precondition("H_A needs A nonempty".into())),
            (_, None) => Err(Error::Precondition("H_A needs A proper".into())),
        }
    }

    pub fn oracle(&self) -> &OracleSet {
        &self.a
    }

    pub fn descriptor(&self) -> SpaceDescriptor {
        let a = self.a.clone();
        SpaceDescriptor::new(SpaceTag::HA(a.clone()), move |p, h| {
            let w = p.prefix(h);
            let head = *w.first()?;
            let is_b = a.contains(head);
            // tails of a stay inside A, tails of b outside
            tail_set(&w)
                .iter()
                .all(|&x| a.contains(x) != is_b)
                .then(|| Denotation::Label(if is_b { "b" } else { "a" }.into()))
        })
    }

    /// A name of `a`: head `n ∉ A`, then `delay` pauses, then `A` listed
    /// in increasing order with a pause between consecutive members.
    pub fn name_a(&self, head: Nat, delay: usize) -> Result<Name> {
        if self.a.contains(head) {
            return Err(Error::Precondition(format!("head {head} of a name of a must lie outside A")));
        }
        let a = self.a.clone();
        Ok(Name::total(move |k| match k {
            0 => head,
            k if k <= delay => 0,
            k => {
                let j = (k - delay - 1) as Nat;
                if a.contains(j) {
                    j + 1
                } else {
                    0
                }
            }
        }))
    }

    /// A name of `b`: head `m ∈ A`, then the finite set `tail ⊆ ℕ ∖ A`.
    pub fn name_b(&self, head: Nat, tail: &[Nat]) -> Result<Name> {
        if !self.a.contains(head) {
            return Err(Error::Precondition(format!("head {head} of a name of b must lie in A")));
        }
        if let Some(x) = tail.iter().find(|&&x| self.a.contains(x)) {
            return Err(Error::Precondition(format!("tail value {x} of a name of b must lie outside A")));
        }
        let mut w = vec![head];
        w.extend(tail.iter().map(|&x| x + 1));
        Ok(Name::from_word(w, 0))
    }

    /// Deterministic samples: `count` names of `a` and `count` of `b`,
    /// varying heads, delays and tails.
    pub fn sample_names(&self, count: usize) -> (Vec<Name>, Vec<Name>) {
        let outside: Vec<Nat> = (0..HA_PROBE_BOUND).filter(|&n| !self.a.contains(n)).take(count.max(1)).collect();
        let inside: Vec<Nat> = (0..HA_PROBE_BOUND).filter(|&n| self.a.contains(n)).take(count.max(1)).collect();
        let names_a =
            (0..count).map(|i| self.name_a(outside[i % outside.len()], i % 7).expect("head outside A")).collect();
        let names_b = (0..count)
            .map(|i| {
                let tail: Vec<Nat> = outside.iter().copied().skip(i % 3).take(i % 4).collect();
                self.name_b(inside[i % inside.len()], &tail).expect("head inside A")
            })
            .collect();
        (names_a, names_b)
    }

    /// `distinct` pairs of different points and `equal` pairs of the same
    /// point, alternating orientation and point.
    pub fn sample_pairs(&self, distinct: usize, equal: usize) -> Vec<SamplePair> {
        let n = distinct.max(equal) + 1;
        let (na, nb) = self.sample_names(n);
        let mut out = Vec::new();
        for i in 0..distinct {
            let (x, y) = if i % 2 == 0 { (&na[i], &nb[(i * 3 + 1) % n]) } else { (&nb[i], &na[(i * 5 + 2) % n]) };
            out.push(SamplePair { label: format!("distinct {i}"), x: x.clone(), y: y.clone(), equal: false });
        }
        for i in 0..equal {
            let pool = if i % 2 == 0 { &na } else { &nb };
            let (x, y) = (&pool[i], &pool[(i * 7 + 3) % n]);
            out.push(SamplePair { label: format!("equal {i}"), x: x.clone(), y: y.clone(), equal: true });
        }
        out
    }
}

/// Confirms once one name's head shows up in the other's tail.
pub fn ha_hausdorff(_space: &HaSpace) -> HausdorffWitness {
    HausdorffWitness::from_pair_test("ha-distinct", |l, r, _| {
        let head_in = |h: &[Nat], t: &[Nat]| h.first().is_some_and(|n| tail_set(t).contains(n));
        head_in(l, r) || head_in(r, l)
    })
}

/// The two translations between enumerations of `A` and codes of `{b}`.
#[derive(Clone, Debug)]
pub struct HaMedvedev {
    space: HaSpace,
}

pub fn ha_medvedev(a: &OracleSet) -> Result<HaMedvedev> {
    Ok(HaMedvedev { space: HaSpace::new(a)? })
}

impl HaMedvedev {
    pub fn space(&self) -> &HaSpace {
        &self.space
    }

    /// Accepts a name once its head has been enumerated.
    pub fn forward(&self, enum_a: &Enumeration) -> OpenSetCode {
        let e = enum_a.clone();
        OpenSetCode::from_predicate("ha-singleton-b", vec![], move |w, f| {
            w.first().is_some_and(|&n| e.first_step(n, f).is_some())
        })
    }

    /// Probes `(n, ⊥^ω)` with fuel `s` at position `pair(n, s)`, emitting
    /// `n` when the code accepts.
    pub fn reverse(&self, singleton_b: &OpenSetCode) -> Enumeration {
        let u = singleton_b.clone();
        Enumeration::new("ha-reverse", move |k| {
            let (n, s) = unpair(k as Nat);
            let probe: Vec<Nat> = std::iter::once(n).chain(std::iter::repeat_n(0, s as usize)).collect();
            u.accepts_prefix(&probe, s).then_some(n)
        })
    }

    /// `reverse ∘ forward`, read on `[0, bound]`: `n` is listed once the
    /// probe with fuel `probe_fuel` accepts.
    pub fn round_trip(&self, enum_a: &Enumeration, bound: Nat, probe_fuel: Fuel) -> BTreeSet<Nat> {
        let u = self.forward(enum_a);
        (0..=bound)
            .filter(|&n| {
                let probe: Vec<Nat> = std::iter::once(n).chain(std::iter::repeat_n(0, probe_fuel as usize)).collect();
                u.accepts_prefix(&probe, probe_fuel)
            })
            .collect()
    }
}

/// The overt set of both points, listing one name of `a` (tail enumerating
/// `A`) and then names of `b` with empty tails.
pub fn ha_reference_overt(space: &HaSpace) -> OvertCode {
    let s = space.clone();
    OvertCode::from_names("ha-reference", move |i| {
        Some(if i == 0 {
            s.name_a(s.least_non_member, 0).expect("least non-member")
        } else {
            s.name_b(s.least_member, &[]).expect("least member")
        })
    })
}

/// Enumerates `A` from overtness of `H_A` and an enumeration of `ℕ ∖ A`.
#[derive(Clone, Debug)]
pub struct CototalExtraction {
    overt: OvertCode,
    complement: Enumeration,
}

/// Requires the space (so `A` is nonempty and proper).
pub fn ha_overt_to_cototal(_space: &HaSpace, overt: &OvertCode, complement_enum: &Enumeration) -> CototalExtraction {
    CototalExtraction { overt: overt.clone(), complement: complement_enum.clone() }
}

impl CototalExtraction {
    /// `U_k`: names whose head is seen outside `A` and whose tail lists `k`.
    pub fn open_k(&self, k: Nat) -> OpenSetCode {
        let c = self.complement.clone();
        OpenSetCode::from_predicate("ha-cototal-u", vec![k], move |w, f| {
            w.first().is_some_and(|&n| c.first_step(n, f).is_some()) && tail_set(w).contains(&k)
        })
    }

    /// Confirms iff `U_k` is nonempty, that is `k ∈ A`.
    pub fn query(&self, k: Nat) -> Observation {
        self.overt.meets(&self.open_k(k))
    }

    /// Position `pair(k, s)` emits `k` when the query confirms within `s`.
    pub fn enumeration(&self) -> Enumeration {
        let me = self.clone();
        Enumeration::new("ha-cototal", move |j| {
            let (k, s) = unpair(j as Nat);
            me.query(k).confirmed_by(s).then_some(k)
        })
    }

    /// `k ≤ bound` confirmed within `fuel`.
    pub fn emitted_up_to(&self, bound: Nat, fuel: Fuel) -> BTreeSet<Nat> {
        (0..=bound).filter(|&k| self.query(k).confirmed_by(fuel)).collect()
    }
}

/// A candidate witness sequence built from a guess at `A`: index 0 is
/// `({b}, {a})` and index 1 is `({a}, {b})`, where `{b}` means "head
/// guessed in `A`" and `{a}` means "tail lists a guessed member". Exact
/// when the guess lists all of `A`.
pub fn ha_guess_witness_sequence(guess: &Enumeration) -> HausdorffWitnessSequence {
    let b_code = |g: Enumeration| {
        OpenSetCode::from_predicate("ha-guess-b", vec![], move |w, f| {
            w.first().is_some_and(|&n| g.first_step(n, f).is_some())
        })
    };
    let a_code = |g: Enumeration| {
        OpenSetCode::from_predicate("ha-guess-a", vec![], move |w, f| {
            !w.is_empty() && tail_set(w).iter().any(|&x| g.first_step(x, f).is_some())
        })
    };
    let (g1, g2) = (guess.clone(), guess.clone());
    HausdorffWitnessSequence::new(
        move |i| match i {
            0 => Some(b_code(g1.clone())),
            1 => Some(a_code(g1.clone())),
            _ => None,
        },
        move |i| match i {
            0 => Some(a_code(g2.clone())),
            1 => Some(b_code(g2.clone())),
            _ => None,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::separation::check_hausdorff_witness_sequence;

    fn space() -> HaSpace {
        HaSpace::new(&OracleSet::finite([2, 5, 11])).unwrap()
    }

    #[test]
    fn preconditions() {
        assert!(matches!(HaSpace::new(&OracleSet::finite([])), Err(Error::Precondition(_))));
        assert!(matches!(HaSpace::new(&OracleSet::cofinite([])), Err(Error::Precondition(_))));
        let s = space();
        assert!(s.name_a(2, 0).is_err());
        assert!(s.name_b(3, &[]).is_err());
        assert!(s.name_b(2, &[5]).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let s = space();
        let h = ha_hausdorff(&s);
        let a = s.name_a(0, 3).unwrap();
        let b = s.name_b(5, &[]).unwrap();
        // 5 is listed at tail position 3 + 5 + 1
        assert_eq!(h.distinct(&a, &b).observe(100).step(), Some(19));
        assert!(!h.distinct(&s.name_b(2, &[]).unwrap(), &b).confirmed_by(100_000));
        assert!(!h.distinct(&a, &s.name_a(7, 0).unwrap()).confirmed_by(100_000));
        let d = s.descriptor();
        assert_eq!(d.meta_equal(&a, &b, 100), Some(false));
        assert_eq!(d.meta_equal(&b, &s.name_b(11, &[0, 1]).unwrap(), 100), Some(true));
    }

    #[test]
    fn sampled_pairs() {
        let s = HaSpace::new(&OracleSet::evens()).unwrap();
        let h = ha_hausdorff(&s);
        let d = s.descriptor();
        for p in s.sample_pairs(20, 20) {
            assert_eq!(d.meta_equal(&p.x, &p.y, 200), Some(p.equal), "{}", p.label);
            assert_eq!(h.distinct(&p.x, &p.y).confirmed_by(5000), !p.equal, "{}", p.label);
        }
    }

    #[test]
    fn medvedev_round_trip() {
        let a = OracleSet::finite([2, 5]);
        let m = ha_medvedev(&a).unwrap();
        let e = Enumeration::of_finite(&[2, 5]);
        let u = m.forward(&e);
        let five = m.space().name_b(5, &[]).unwrap();
        assert_eq!(u.member(&five).observe(100).step(), Some(2));
        assert_eq!(m.round_trip(&e, 100, 10), BTreeSet::from([2, 5]));
        let listed = m.reverse(&u).emitted(200);
        assert_eq!(listed, BTreeSet::from([2, 5]));
        assert!(ha_medvedev(&OracleSet::finite([])).is_err());
    }

    #[test]
    fn cototal_from_reference_overt() {
        let a = OracleSet::cofinite([0, 3, 4, 9]);
        let s = HaSpace::new(&a).unwrap();
        let x = ha_overt_to_cototal(&s, &ha_reference_overt(&s), &Enumeration::of_finite(&[0, 3, 4, 9]));
        let expect: BTreeSet<Nat> = (0..=20).filter(|&k| a.contains(k)).collect();
        assert_eq!(x.emitted_up_to(20, 200), expect);
        assert!(!x.query(3).confirmed_by(20_000));
        assert!(x.enumeration().emitted(400).is_subset(&(0..400).filter(|&k| a.contains(k)).collect()));
    }

    #[test]
    fn guessed_sequence_misses_unguessed_members() {
        let s = space();
        let full = ha_guess_witness_sequence(&Enumeration::of_finite(&[2, 5, 11]));
        let samples = s.sample_pairs(12, 12);
        assert!(check_hausdorff_witness_sequence(&full, &samples, 2000).all_ok());
        let partial = ha_guess_witness_sequence(&Enumeration::of_finite(&[2]));
        let report = check_hausdorff_witness_sequence(&partial, &samples, 2000);
        assert!(!report.all_ok());
        assert!(report.failures().all(|r| !r.equal));
    }
}
