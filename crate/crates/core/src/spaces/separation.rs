//! Separation realizers: regularity from discreteness and Hausdorffness,
//! the HeNorm/NormSub translations, and audits of witness sequences.

use std::sync::Arc;

use serde::Serialize;

use crate::kernel::coding::unpair;
use crate::kernel::observe::{dovetail_budget, dovetail_width, least_true};
use crate::kernel::transducer::library;
use crate::kernel::{Fuel, Name, Nat};

use super::descriptor::SpaceDescriptor;
use super::open::{
    section, ClosedSetCode, DiscretenessWitness, HausdorffWitness, HausdorffWitnessSequence, OpenSetCode,
};

/// Reg for a discrete Hausdorff space: ignores `A` and returns
/// `({x}, X ∖ {x})`.
pub fn reg_from_discrete_hausdorff(
    d: &DiscretenessWitness,
    h: &HausdorffWitness,
    x: &Name,
    _a: &ClosedSetCode,
) -> (OpenSetCode, OpenSetCode) {
    (section(&d.code, x, "singleton"), section(&h.code, x, "co-singleton"))
}

/// A HeNorm realizer: closed `A, B` to opens `U ⊇ A∖B`, `V ⊇ B∖A`, disjoint.
pub type HeNormRealizer = Arc<dyn Fn(&ClosedSetCode, &ClosedSetCode) -> (OpenSetCode, OpenSetCode) + Send + Sync>;

/// A NormSub realizer: `(Y, A, B)` with `Y ∩ A ∩ B = ∅` to opens
/// `U ⊇ Y∩A`, `V ⊇ Y∩B` with `Y ∩ U ∩ V = ∅`.
pub type NormSubRealizer =
    Arc<dyn Fn(&OpenSetCode, &ClosedSetCode, &ClosedSetCode) -> (OpenSetCode, OpenSetCode) + Send + Sync>;

/// Any HeNorm answer already solves the NormSub instance.
pub fn henorm_to_normsub(
    he: &HeNormRealizer,
    _y: &OpenSetCode,
    a: &ClosedSetCode,
    b: &ClosedSetCode,
) -> (OpenSetCode, OpenSetCode) {
    he(a, b)
}

/// Solves HeNorm through NormSub on `Y = X ∖ (A ∩ B)`, returning `(Y∩U, Y∩V)`.
pub fn normsub_to_henorm(ns: &NormSubRealizer, a: &ClosedSetCode, b: &ClosedSetCode) -> (OpenSetCode, OpenSetCode) {
    let y = a.complement.union(&b.complement);
    let (u, v) = ns(&y, a, b);
    (y.intersect(&u), y.intersect(&v))
}

/// The NormSub realizer obtained from a HeNorm realizer.
pub fn normsub_from_henorm(he: HeNormRealizer) -> NormSubRealizer {
    Arc::new(move |y, a, b| henorm_to_normsub(&he, y, a, b))
}

/// The HeNorm realizer obtained from a NormSub realizer.
pub fn henorm_from_normsub(ns: NormSubRealizer) -> HeNormRealizer {
    Arc::new(move |a, b| normsub_to_henorm(&ns, a, b))
}

/// Least fuel at which `u` accepts the canonical name of `n`, if within `fuel`.
pub(crate) fn nat_accept_step(u: &OpenSetCode, n: Nat, fuel: Fuel) -> Option<Fuel> {
    let name = SpaceDescriptor::nat_name(n);
    let at = |f: Fuel| u.accepts_prefix(&name.prefix(f), f);
    at(fuel).then(|| least_true(0, fuel, at))
}

/// HeNorm for ℕ by a race: `n` goes to `U` when `n ∉ B` is confirmed no
/// later than `n ∉ A`, and to `V` when `n ∉ A` is confirmed strictly first.
/// Confirmations are timed on canonical names, so the answer only depends
/// on `n`.
pub fn nat_henorm() -> HeNormRealizer {
    Arc::new(|a, b| {
        let (na, nb) = (a.complement.clone(), b.complement.clone());
        let (na2, nb2) = (na.clone(), nb.clone());
        let u = OpenSetCode::from_predicate("race-u", vec![], move |w, f| {
            let Some(&n) = w.first() else { return false };
            match nat_accept_step(&nb, n, f) {
                Some(tb) => tb == 0 || !na.accepts_prefix(&SpaceDescriptor::nat_name(n).prefix(tb - 1), tb - 1),
                None => false,
            }
        });
        let v = OpenSetCode::from_predicate("race-v", vec![], move |w, f| {
            let Some(&n) = w.first() else { return false };
            match nat_accept_step(&na2, n, f) {
                Some(ta) => !nb2.accepts_prefix(&SpaceDescriptor::nat_name(n).prefix(ta), ta),
                None => false,
            }
        });
        (u, v)
    })
}

/// The closed set `ℕ ∖ S` for a finite `S`, as a closed code of ℕ
/// containing exactly the given points.
pub fn nat_finite_closed(points: &[Nat]) -> ClosedSetCode {
    let pts = points.to_vec();
    ClosedSetCode::complement_of(OpenSetCode::from_predicate("co-finite", points.to_vec(), move |w, _| {
        w.first().is_some_and(|n| !pts.contains(n))
    }))
}

/// The witness sequence of ℕ by singletons: index `i = pair(a, b)` gives
/// `({a}, {b})` when `a ≠ b` and `(∅, ∅)` otherwise.
pub fn nat_singleton_witness_sequence() -> HausdorffWitnessSequence {
    let part = |first: bool| {
        move |i: usize| {
            let (a, b) = unpair(i as Nat);
            Some(if a == b {
                OpenSetCode::nothing()
            } else {
                OpenSetCode::new(library::symbol_equals(0, if first { a } else { b }))
            })
        }
    };
    HausdorffWitnessSequence::new(part(true), part(false))
}

/// A sampled pair of points, with the meta-level answer to "equal?".
#[derive(Clone, Debug)]
pub struct SamplePair {
    pub label: String,
    pub x: Name,
    pub y: Name,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessRow {
    pub label: String,
    pub equal: bool,
    /// For unequal pairs, the covering index and the global fuel.
    pub covered_by: Option<(usize, Fuel)>,
    /// For equal pairs, an index whose product wrongly contains the pair.
    pub violation: Option<(usize, Fuel)>,
}

impl WitnessRow {
    pub fn ok(&self) -> bool {
        if self.equal {
            self.violation.is_none()
        } else {
            self.covered_by.is_some()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub fuel: Fuel,
    pub rows: Vec<WitnessRow>,
}

impl WitnessReport {
    pub fn failures(&self) -> impl Iterator<Item = &WitnessRow> {
        self.rows.iter().filter(|r| !r.ok())
    }

    pub fn all_ok(&self) -> bool {
        self.failures().next().is_none()
    }
}

/// Dovetails over the sequence: index `i` gets `fuel / (i + 2)` to confirm
/// `x ∈ Uᵢ` and `y ∈ Vᵢ`. Unequal pairs need some covering index; for
/// equal pairs any covering index is a violation.
pub fn check_hausdorff_witness_sequence(
    ws: &HausdorffWitnessSequence,
    samples: &[SamplePair],
    fuel: Fuel,
) -> WitnessReport {
    let covered = |s: &SamplePair, f: Fuel| -> Option<usize> {
        (0..dovetail_width(f)).map_while(|i| ws.get(i).map(|uv| (i, uv))).find_map(|(i, (u, v))| {
            let b = dovetail_budget(i, f);
            (u.accepts_prefix(&s.x.prefix(b), b) && v.accepts_prefix(&s.y.prefix(b), b)).then_some(i)
        })
    };
    let rows = samples
        .iter()
        .map(|s| {
            let hit = covered(s, fuel).map(|_| {
                let at = least_true(0, fuel, |f| covered(s, f).is_some());
                (covered(s, at).expect("monotone cover"), at)
            });
            WitnessRow {
                label: s.label.clone(),
                equal: s.equal,
                covered_by: if s.equal { None } else { hit },
                violation: if s.equal { hit } else { None },
            }
        })
        .collect();
    WitnessReport { fuel, rows }
}

/// All pairs `(n, m)` with `n, m ≤ bound` of canonical ℕ names.
pub fn nat_samples(bound: Nat) -> Vec<SamplePair> {
    let mut out = Vec::new();
    for n in 0..=bound {
        for m in 0..=bound {
            out.push(SamplePair {
                label: format!("({n}, {m})"),
                x: SpaceDescriptor::nat_name(n),
                y: SpaceDescriptor::nat_name(m),
                equal: n == m,
            });
        }
    }
    out
}
