//! `S_A = {(n, ⊤) | n ∈ A} ∪ {(n, ⊥) | n ∉ A} ⊆ ℕ × 𝕊`.
//!
//! Names are product names `⟨n^ω, s⟩` where `s` is an 𝕊-name.

use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::kernel::name::{interleave, project, Side};
use crate::kernel::{Fuel, Name, Nat};
use crate::spaces::descriptor::{Denotation, SpaceDescriptor, SpaceTag};
use crate::spaces::open::{DiscretenessWitness, HausdorffWitness, OpenSetCode};

use super::oracle::{Enumeration, OracleSet, StageKind, StageLog, StageTable};

pub fn sa_space(a: &OracleSet) -> SpaceDescriptor {
    let set = a.clone();
    let inner = SpaceDescriptor::product(SpaceDescriptor::nat(), SpaceDescriptor::sierpinski());
    SpaceDescriptor::new(SpaceTag::SA(a.clone()), move |p, h| {
        let d = inner.denote(p, h)?;
        let Denotation::Pair(n, b) = &d else { return None };
        let Denotation::Nat(n) = **n else { return None };
        // a ⊥ reading at a finite horizon may still turn into ⊤
        (set.contains(n) || **b == Denotation::Bottom).then_some(d)
    })
}

/// A name of `(n, flag)`: the 𝕊 component shows its 1 from position
/// `delay` on, or never.
pub fn sa_name(n: Nat, top_from: Option<usize>) -> Name {
    let flag = match top_from {
        Some(d) => Name::total(move |k| (k >= d) as Nat),
        None => Name::constant(0),
    };
    interleave(&Name::constant(n), &flag)
}

/// Both witnesses compare first coordinates, through `π₁ : S_A → ℕ`.
pub fn sa_witnesses(_a: &OracleSet) -> (DiscretenessWitness, HausdorffWitness) {
    let first = |w: &[Nat]| w.first().copied();
    let d = DiscretenessWitness::from_pair_test(
        "sa-equal",
        move |l, r, _| matches!((first(l), first(r)), (Some(x), Some(y)) if x == y),
    );
    let h = HausdorffWitness::from_pair_test(
        "sa-distinct",
        move |l, r, _| matches!((first(l), first(r)), (Some(x), Some(y)) if x != y),
    );
    (d, h)
}

/// The isomorphism `ℕ ≅ S_A` for an enumerated `A`.
#[derive(Clone, Debug)]
pub struct SaIso {
    enumeration: Enumeration,
}

impl SaIso {
    /// `n ↦ (n, [n ∈ A])`: the flag turns on at the position where the
    /// enumeration lists `n`.
    pub fn forward(&self, n: Nat) -> Name {
        let e = self.enumeration.clone();
        let flag = Name::from_producer(move |k, fuel| {
            let seen = (0..=k).any(|i| (i as Fuel) < fuel && e.at(i) == Some(n));
            ((k as Fuel) < fuel).then_some(seen as Nat)
        });
        interleave(&Name::constant(n), &flag)
    }

    /// `π₁`.
    pub fn backward(&self, x: &Name) -> Name {
        project(x, Side::Left)
    }
}

pub fn sa_iso_when_ce(enumeration: &Enumeration) -> SaIso {
    SaIso { enumeration: enumeration.clone() }
}

/// The closed inputs fed to a normality realizer in the column of `n`:
/// `C₁ = ({n} × 𝕊) ∩ S_A` until `c1_emptied_at`, `∅` from then on, and
/// `C₂ = {(n, ⊥)} ∩ S_A` throughout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnInputs {
    pub n: Nat,
    pub c1_emptied_at: Option<Fuel>,
}

type NormFn = dyn Fn(&ColumnInputs) -> (OpenSetCode, OpenSetCode) + Send + Sync;

/// A normality realizer for `S_A`, restricted to column inputs. It reads
/// its inputs causally: its opens at fuel `f` may depend on the inputs
/// only through whether `c1_emptied_at ≤ f`.
#[derive(Clone)]
pub struct SaNormRealizer {
    label: String,
    run: Arc<NormFn>,
}

impl std::fmt::Debug for SaNormRealizer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SaNormRealizer({})", self.label)
    }
}

impl SaNormRealizer {
    pub fn new(
        label: impl Into<String>,
        run: impl Fn(&ColumnInputs) -> (OpenSetCode, OpenSetCode) + Send + Sync + 'static,
    ) -> Self {
        SaNormRealizer { label: label.into(), run: Arc::new(run) }
    }

    pub fn apply(&self, inputs: &ColumnInputs) -> (OpenSetCode, OpenSetCode) {
        (self.run)(inputs)
    }

    /// The reference realizer of a d.c.e. `A` given by its stage table,
    /// stages counted in fuel. `U` takes `(n, ⊤)` once `n` has entered;
    /// `V` takes the whole column once `C₁` is empty and `n` has left.
    pub fn reference(table: &StageTable) -> Self {
        let table = table.clone();
        SaNormRealizer::new("reference-dce", move |inp| {
            let n = inp.n;
            let (entered, left) = entry_exit(&table, n);
            let emptied = inp.c1_emptied_at;
            let u = OpenSetCode::from_predicate("sa-norm-u", vec![n], move |w, f| {
                let col = w.first() == Some(&n);
                let top = w.iter().skip(1).step_by(2).any(|&s| s != 0);
                col && top && entered.is_some_and(|t| t <= f)
            });
            let v = OpenSetCode::from_predicate("sa-norm-v", vec![n], move |w, f| {
                w.first() == Some(&n) && emptied.is_some_and(|t| t <= f) && left.is_some_and(|t| t <= f)
            });
            (u, v)
        })
    }
}

/// Stages at which `n` enters and leaves, for a d.c.e. table.
fn entry_exit(table: &StageTable, n: Nat) -> (Option<u64>, Option<u64>) {
    let ch = table.changes(n);
    (ch.first().map(|c| c.0), ch.get(1).map(|c| c.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Proclamations {
    pub n: Nat,
    /// `(fuel, bit)` for each change of the proclaimed membership.
    pub flips: Vec<(Fuel, bool)>,
    #[serde(skip)]
    pub log: StageLog,
}

impl Proclamations {
    pub fn final_bit(&self) -> bool {
        self.flips.last().is_some_and(|f| f.1)
    }

    /// At most two flips, `0 → 1 → 0`.
    pub fn well_formed(&self) -> bool {
        self.flips.len() <= 2 && self.flips.iter().enumerate().all(|(i, f)| f.1 == (i == 0))
    }
}

fn least_accepting(u: &OpenSetCode, name: &Name, fuel: Fuel) -> Option<Fuel> {
    (1..=fuel).find(|&f| u.accepts_prefix(&name.prefix(f), f))
}

/// The proclamation protocol on column `n`: start with `n ∉ A`, flip when
/// the first open takes `(n, ⊤)`, then empty `C₁` and flip back when the
/// second open takes `(n, ⊥)`.
pub fn norm_to_dce(norm: &SaNormRealizer, n: Nat, fuel: Fuel) -> Proclamations {
    let mut log = StageLog::new();
    let mut flips = Vec::new();
    log.push(0, "proclaim", json!({ "n": n, "in": false }));
    let (u, _) = norm.apply(&ColumnInputs { n, c1_emptied_at: None });
    if let Some(t1) = least_accepting(&u, &sa_name(n, Some(0)), fuel) {
        flips.push((t1, true));
        log.push(t1, "proclaim", json!({ "n": n, "in": true, "reason": "U accepts (n,T)" }));
        let (_, v) = norm.apply(&ColumnInputs { n, c1_emptied_at: Some(t1) });
        if let Some(t2) = least_accepting(&v, &sa_name(n, None), fuel) {
            let t2 = t2.max(t1 + 1);
            flips.push((t2, false));
            log.push(t2, "proclaim", json!({ "n": n, "in": false, "reason": "V accepts (n,F)" }));
        }
    }
    Proclamations { n, flips, log }
}

/// A dyadic approximation `center · 2^-precision ± 2^-radius_exp` emitted at `stage`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DyadicApprox {
    pub stage: u64,
    pub center: u64,
    pub radius_exp: u32,
}

impl DyadicApprox {
    /// Whether this interval lies inside `outer`, both scaled to `2^-precision`.
    pub fn within(&self, outer: &DyadicApprox, precision: u32) -> bool {
        let r = |a: &DyadicApprox| 1i128 << (precision - a.radius_exp.min(precision));
        let (c, o) = (self.center as i128, outer.center as i128);
        c - r(self) >= o - r(outer) && c + r(self) <= o + r(outer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingTrace {
    pub n: Nat,
    pub top_from: Option<u64>,
    pub approximations: Vec<DyadicApprox>,
    /// `ε` as a numerator over `2^precision`, when Phase 2 acted on this name.
    pub epsilon: Option<u64>,
    pub phases: Vec<u8>,
}

impl EmbeddingTrace {
    pub fn value(&self) -> Option<u64> {
        self.approximations.last().map(|a| a.center)
    }

    pub fn refines(&self, precision: u32) -> bool {
        self.approximations.windows(2).all(|w| w[1].within(&w[0], precision))
    }
}

/// `ι : S_A → ℕ × [0,1]` for a d.c.e. `A`, at dyadic precision `2^-precision`.
#[derive(Clone, Debug)]
pub struct SaEmbedding {
    table: StageTable,
    pub precision: u32,
}

pub fn dce_to_embedding(table: &StageTable, precision: u32) -> Result<SaEmbedding> {
    if table.kind() != StageKind::Dce {
        return Err(Error::Precondition("dce_to_embedding needs a d.c.e. table".into()));
    }
    if precision > 62 {
        return Err(Error::Precondition("precision above 2^-62".into()));
    }
    Ok(SaEmbedding { table: table.clone(), precision })
}

impl SaEmbedding {
    fn horizon(&self) -> u64 {
        self.table.last_stage() + self.precision as u64 + 2
    }

    /// Runs `ι` on the name of `(n, ·)` whose flag shows from stage
    /// `top_from` (stages are positions of the 𝕊 component).
    pub fn iota(&self, n: Nat, top_from: Option<u64>) -> Result<EmbeddingTrace> {
        let p = self.precision;
        let (entered, left) = entry_exit(&self.table, n);
        let mut tr = EmbeddingTrace { n, top_from, approximations: Vec::new(), epsilon: None, phases: Vec::new() };
        let mut r = 0u32;
        let mut center = 0u64;
        for s in 1..=self.horizon() {
            let is_in = entered.is_some_and(|t| t <= s);
            let is_out = left.is_some_and(|t| t <= s);
            let flag = top_from.is_some_and(|t| t <= s);
            let phase = if is_out {
                3
            } else if is_in {
                2
            } else {
                1
            };
            if tr.phases.last() != Some(&phase) {
                tr.phases.push(phase);
            }
            if flag && phase == 2 {
                if tr.epsilon.is_none() {
                    let exp = r + 1;
                    if exp > p {
                        return Err(Error::PrecisionExhausted { needed: exp, precision: p });
                    }
                    center = 1 << (p - exp);
                    tr.epsilon = Some(center);
                }
            } else if flag && phase == 3 && tr.epsilon.is_some() {
                // the flagged name is no longer valid; no more information
                break;
            } else if phase == 2 {
                // Phase 2 leaves ι(n, ⊥) undefined
                continue;
            }
            if r < p {
                r += 1;
                tr.approximations.push(DyadicApprox { stage: s, center, radius_exp: r });
            }
        }
        Ok(tr)
    }

    /// The partial inverse at the final stage: `(n, ⊤)` for `x > 0` when
    /// `n ∈ A`, `(n, ⊥)` for `x = 0` when `n ∉ A`, undefined otherwise.
    pub fn inverse(&self, n: Nat, x: u64) -> Option<bool> {
        match (self.table.limit_contains(n), x > 0) {
            (true, true) => Some(true),
            (false, false) => Some(false),
            _ => None,
        }
    }
}

/// One conjunct `U ∪ ¬V` of the Π⁰₂ description of `S_A` inside ℕ × 𝕊.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Pi02Clause {
    /// `flag = ⊥ ∨ ∃t ≥ s. n ∈ A_t` (needs `⊤ → n ∈ A`).
    TopNeedsMember { n: Nat, s: u64 },
    /// `flag = ⊤ ∨ ∃t ≥ s. n ∉ A_t` (needs `⊥ → n ∉ A`).
    BottomNeedsNonMember { n: Nat, s: u64 },
}

/// `S_A` as a Π⁰₂ subspace of ℕ × 𝕊 for a limit-computable `A`.
#[derive(Clone, Debug)]
pub struct Pi02Subspace {
    table: StageTable,
}

pub fn delta02_subspace_code(table: &StageTable) -> Pi02Subspace {
    Pi02Subspace { table: table.clone() }
}

impl Pi02Subspace {
    /// The conjuncts for column `n` up to stage `s_max`.
    pub fn clauses(&self, n: Nat, s_max: u64) -> Vec<Pi02Clause> {
        (0..=s_max)
            .flat_map(|s| [Pi02Clause::TopNeedsMember { n, s }, Pi02Clause::BottomNeedsNonMember { n, s }])
            .collect()
    }

    /// Whether the point `(n, top)` satisfies the conjunct. The table is
    /// constant after its last stage, so `∃t ≥ s` is checked up to there.
    pub fn holds(&self, clause: &Pi02Clause, top: bool) -> bool {
        let upto = |s: u64| s..=s.max(self.table.last_stage()) + 1;
        match *clause {
            Pi02Clause::TopNeedsMember { n, s } => !top || upto(s).any(|t| self.table.at_stage(n, t)),
            Pi02Clause::BottomNeedsNonMember { n, s } => top || upto(s).any(|t| !self.table.at_stage(n, t)),
        }
    }

    /// Membership of `(n, top)`, checking every conjunct that can fail.
    pub fn contains(&self, n: Nat, top: bool) -> bool {
        self.clauses(n, self.table.last_stage() + 1).iter().all(|c| self.holds(c, top))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses_compare_first_coordinates() {
        let a = OracleSet::evens();
        let (d, h) = sa_witnesses(&a);
        for n in 0..=20 {
            for m in 0..=20 {
                for (fx, fy) in [(None, None), (Some(0), Some(3)), (Some(5), None)] {
                    let (x, y) = (sa_name(n, fx), sa_name(m, fy));
                    assert_eq!(d.equal(&x, &y).confirmed_by(100), n == m);
                    assert_eq!(h.distinct(&x, &y).confirmed_by(100), n != m);
                }
            }
        }
    }

    #[test]
    fn iso_for_evens_and_empty() {
        let iso = sa_iso_when_ce(&Enumeration::listing(&OracleSet::evens()));
        let flag = project(&iso.forward(4), Side::Right);
        // listed at position 4, visible from fuel 5
        assert_eq!(flag.take(6, 100).0, vec![0, 0, 0, 0, 1, 1]);
        let space = sa_space(&OracleSet::evens());
        for n in 0..=50 {
            assert_eq!(iso.backward(&iso.forward(n)).at(0, 10), Some(n));
            let d = space.denote(&iso.forward(n), 400).unwrap();
            let want = if n % 2 == 0 { Denotation::Top } else { Denotation::Bottom };
            assert_eq!(d, Denotation::Pair(Box::new(Denotation::Nat(n)), Box::new(want)));
        }
        let empty = sa_iso_when_ce(&Enumeration::empty());
        assert!(project(&empty.forward(3), Side::Right).take(50, 100).iter().all(|&s| s == 0));
    }

    fn table() -> StageTable {
        // 1 enters at 3 and stays; 2 enters at 2 and leaves at 6; 0 never enters
        StageTable::dce(&[(3, 1, true), (2, 2, true), (6, 2, false)]).unwrap()
    }

    #[test]
    fn proclamations_follow_the_table() {
        let t = table();
        let norm = SaNormRealizer::reference(&t);
        let p0 = norm_to_dce(&norm, 0, 1000);
        assert!(p0.flips.is_empty());
        let p1 = norm_to_dce(&norm, 1, 1000);
        assert_eq!(p1.flips.len(), 1);
        assert!(p1.final_bit());
        let p2 = norm_to_dce(&norm, 2, 1000);
        assert_eq!(p2.flips.len(), 2);
        assert!(!p2.final_bit());
        for p in [p0, p1, p2] {
            assert!(p.well_formed());
            assert_eq!(p.final_bit(), t.limit_contains(p.n));
        }
    }

    #[test]
    fn embedding_phases() {
        let emb = dce_to_embedding(&table(), 16).unwrap();
        let bot0 = emb.iota(0, None).unwrap();
        assert_eq!(bot0.value(), Some(0));
        assert_eq!(bot0.phases, vec![1]);
        let top1 = emb.iota(1, Some(0)).unwrap();
        let eps = top1.epsilon.unwrap();
        assert!(eps > 0);
        assert_eq!(top1.value(), Some(eps));
        assert_eq!(emb.inverse(1, eps), Some(true));
        let bot2 = emb.iota(2, None).unwrap();
        assert_eq!(bot2.phases, vec![1, 2, 3]);
        assert_eq!(bot2.value(), Some(0));
        assert_eq!(bot2.approximations.last().unwrap().radius_exp, 16);
        assert_eq!(emb.inverse(2, 0), Some(false));
        for tr in [&bot0, &top1, &bot2] {
            assert!(tr.refines(16));
        }
        // a flagged name of 2 is invalid after Phase 3 and stops refining
        let stale = emb.iota(2, Some(0)).unwrap();
        assert!(stale.epsilon.is_some());
        assert!(stale.approximations.iter().all(|a| a.stage < 6));
    }

    #[test]
    fn late_entry_exhausts_precision() {
        let t = StageTable::dce(&[(40, 0, true)]).unwrap();
        let emb = dce_to_embedding(&t, 16).unwrap();
        assert!(matches!(emb.iota(0, Some(0)), Err(Error::PrecisionExhausted { .. })));
    }

    #[test]
    fn pi02_membership_matches_limit() {
        let t = StageTable::limit(&[(1, 2, true), (4, 2, false), (2, 5, true), (3, 5, false), (7, 5, true)]).unwrap();
        let sub = delta02_subspace_code(&t);
        for n in 0..=30 {
            let lim = t.limit_contains(n);
            assert!(sub.contains(n, lim));
            assert!(!sub.contains(n, !lim));
        }
    }
}
