//! `D_A`: a discrete two-point space that need not be computably Hausdorff.
//!
//! A name of `a` is the characteristic function of `A` with finitely many
//! 1s turned into 0s; a name of `b` is the same for `ℕ ∖ A`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::kernel::name::split_interleaved;
use crate::kernel::{Fuel, Name, Nat, Word};
use crate::spaces::descriptor::{Denotation, SpaceDescriptor, SpaceTag};
use crate::spaces::open::{DiscretenessWitness, HausdorffWitness};

use super::oracle::{content_lines, expect_header, OracleSet, StageLog};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DaPoint {
    A,
    B,
}

/// A name of `point` with the 1s at `flipped` turned into 0s.
pub fn da_name(a: &OracleSet, point: DaPoint, flipped: &[Nat]) -> Name {
    let (a, flipped) = (a.clone(), flipped.to_vec());
    Name::total(move |k| {
        let k = k as Nat;
        let one = a.contains(k) == (point == DaPoint::A);
        (one && !flipped.contains(&k)) as Nat
    })
}

pub fn da_space(a: &OracleSet) -> SpaceDescriptor {
    let set = a.clone();
    SpaceDescriptor::new(SpaceTag::DA(a.clone()), move |p, h| {
        let k = p.prefix(h).iter().position(|&s| s == 1)? as Nat;
        Some(Denotation::Label(if set.contains(k) { "a" } else { "b" }.into()))
    })
}

/// Confirms once both names show a 1 at a common position.
pub fn da_discreteness(_a: &OracleSet) -> DiscretenessWitness {
    DiscretenessWitness::from_pair_test("da-equal", |l, r, _| l.iter().zip(r).any(|(&x, &y)| x == 1 && y == 1))
}

/// The variant with `ℕ ∖ A` split into blocks `B₀, B₁, …`, one point each.
pub fn da_partition_variant(a: &OracleSet, blocks: Vec<OracleSet>) -> SpaceDescriptor {
    let (set, bl) = (a.clone(), blocks.clone());
    SpaceDescriptor::new(SpaceTag::DAPartition(a.clone(), blocks), move |p, h| {
        let k = p.prefix(h).iter().position(|&s| s == 1)? as Nat;
        if set.contains(k) {
            return Some(Denotation::Label("a".into()));
        }
        let i = bl.iter().position(|b| b.contains(k))?;
        Some(Denotation::Label(format!("b{i}")))
    })
}

/// A name of a point of the partition variant: the characteristic function
/// of `block` with the 1s at `flipped` turned into 0s.
pub fn da_block_name(block: &OracleSet, flipped: &[Nat]) -> Name {
    let (b, flipped) = (block.clone(), flipped.to_vec());
    Name::total(move |k| (b.contains(k as Nat) && !flipped.contains(&(k as Nat))) as Nat)
}

type PairFn = dyn Fn(usize) -> Option<(Word, Word)> + Send + Sync;

/// A candidate Hausdorff witness for `D_A`: pair `i`, available from fuel
/// `i + 1`, claims that names extending `wᵢ` and `uᵢ` denote distinct points.
#[derive(Clone)]
pub struct HwitCandidate {
    pub label: String,
    pairs: Arc<PairFn>,
}

impl fmt::Debug for HwitCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HwitCandidate({})", self.label)
    }
}

impl HwitCandidate {
    pub fn new(
        label: impl Into<String>,
        pairs: impl Fn(usize) -> Option<(Word, Word)> + Send + Sync + 'static,
    ) -> Self {
        HwitCandidate { label: label.into(), pairs: Arc::new(pairs) }
    }

    pub fn from_pairs(label: impl Into<String>, pairs: Vec<(Word, Word)>) -> Self {
        HwitCandidate::new(label, move |i| pairs.get(i).cloned())
    }

    pub fn pair(&self, i: usize) -> Option<(Word, Word)> {
        (self.pairs)(i)
    }

    /// Index of the first pair among the first `fuel` whose sides can both
    /// still be read on names starting with `zeros` zeros.
    pub fn first_compatible(&self, zeros: usize, fuel: Fuel) -> Option<usize> {
        (0..fuel as usize)
            .map_while(|i| self.pair(i).map(|p| (i, p)))
            .find(|(_, (w, u))| {
                w.iter().chain(u.iter()).count() > 0 && zero_through(w, zeros) && zero_through(u, zeros)
            })
            .map(|(i, _)| i)
    }

    /// The candidate read as a Hausdorff realizer: it confirms at fuel `f`
    /// once some pair `i < f` matches both visible coordinate prefixes.
    pub fn as_witness(&self) -> HausdorffWitness {
        let me = self.clone();
        HausdorffWitness::from_pair_test("hwit-candidate", move |l, r, f| me.confirms(l, r, f))
    }

    fn confirms(&self, l: &[Nat], r: &[Nat], f: Fuel) -> bool {
        (0..f as usize).map_while(|i| self.pair(i)).any(|(w, u)| w.is_prefix_of(l) && u.is_prefix_of(r))
    }

    /// The least fuel at which the candidate separates `p` and `q`.
    pub fn confirmation_step(&self, p: &Name, q: &Name, fuel: Fuel) -> Option<Fuel> {
        let w = self.as_witness();
        w.distinct(p, q).observe(fuel).step()
    }

    /// `hwit v1`, then lines `pair <w bits> | <u bits>`.
    pub fn parse(label: &str, text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        expect_header(&mut lines, "hwit v1")?;
        let mut pairs = Vec::new();
        for line in lines {
            let rest = line
                .strip_prefix("pair")
                .ok_or_else(|| Error::Parse(format!("expected `pair <w> | <u>`, found `{line}`")))?;
            let (w, u) = rest.split_once('|').ok_or_else(|| Error::Parse(format!("missing `|` in `{line}`")))?;
            pairs.push((parse_bits(w)?, parse_bits(u)?));
        }
        Ok(HwitCandidate::from_pairs(label, pairs))
    }

    /// The first `count` pairs in file form.
    pub fn to_text(&self, count: usize) -> String {
        let bits = |w: &Word| w.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ");
        let mut s = String::from("hwit v1\n");
        for (w, u) in (0..count).map_while(|i| self.pair(i)) {
            s.push_str(&format!("pair {} | {}\n", bits(&w), bits(&u)));
        }
        s
    }
}

fn parse_bits(s: &str) -> Result<Word> {
    s.split_whitespace()
        .map(|t| match t {
            "0" => Ok(0),
            "1" => Ok(1),
            _ => Err(Error::Parse(format!("expected a bit, found `{t}`"))),
        })
        .collect::<Result<Vec<_>>>()
        .map(Word)
}

fn zero_through(w: &[Nat], zeros: usize) -> bool {
    w.iter().take(zeros).all(|&b| b == 0)
}

/// Ten fixed candidates covering both branches of the construction.
pub fn bundled_candidates() -> Vec<HwitCandidate> {
    let ones_at = |len: usize, ones: &[usize]| Word((0..len).map(|k| ones.contains(&k) as Nat).collect());
    vec![
        HwitCandidate::from_pairs("silent", vec![]),
        HwitCandidate::new("diagonal-0k1", move |i| Some((ones_at(i + 1, &[i]), ones_at(i + 1, &[i])))),
        HwitCandidate::new("shifted", move |i| Some((ones_at(i + 1, &[i]), ones_at(i + 2, &[i + 1])))),
        HwitCandidate::from_pairs(
            "leading-ones",
            vec![(Word(vec![1]), Word(vec![0, 1])), (Word(vec![0, 1]), Word(vec![1]))],
        ),
        HwitCandidate::new("all-zero-prefixes", move |i| Some((ones_at(i, &[]), ones_at(i, &[])))),
        HwitCandidate::new("even-lengths", move |i| {
            let n = 2 * i + 2;
            Some((ones_at(n, &[n - 1]), ones_at(n, &[n - 2])))
        }),
        HwitCandidate::new("late-start", move |i| {
            (i >= 5).then(|| (ones_at(3 * i, &[3 * i - 1]), ones_at(3 * i, &[])))
        }),
        HwitCandidate::new("left-long", move |i| Some((ones_at(2 * i + 3, &[2 * i + 2]), ones_at(1, &[])))),
        HwitCandidate::new("sparse-every-third", move |i| {
            (i % 3 == 0).then(|| (ones_at(i + 4, &[i + 3]), ones_at(i + 4, &[i + 2])))
        }),
        HwitCandidate::from_pairs(
            "finite-short",
            vec![(Word(vec![0, 0, 1]), Word(vec![0, 1])), (Word(vec![0, 1]), Word(vec![0, 0, 1]))],
        ),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DaCertificate {
    /// Among the first `fuel` pairs none fits names starting with
    /// `zeros` zeros, so the two names below are never separated.
    Omission { stage: usize, candidate: String, zeros: usize, name_a: Word, name_b: Word, fuel: Fuel },
    /// Both words are prefixes of names of `a`, yet the candidate
    /// separates them at `step`.
    WrongSeparation { stage: usize, candidate: String, pair_index: usize, name_p: Word, name_q: Word, step: Fuel },
    /// The chosen pair did not confirm within `fuel`.
    Stalled { stage: usize, candidate: String, fuel: Fuel },
}

#[derive(Clone, Debug, Serialize)]
pub struct DaDiagonalization {
    /// `A ∩ {0, …, s}` as decided, position `k` holding `[k ∈ A]`.
    pub a_prefix: Vec<bool>,
    /// `s₀, s₁, …`.
    pub boundaries: Vec<usize>,
    pub certificates: Vec<DaCertificate>,
    #[serde(skip)]
    pub log: StageLog,
}

impl DaDiagonalization {
    pub fn a_oracle(&self) -> OracleSet {
        OracleSet::from_table(self.a_prefix.iter().enumerate().map(|(k, &b)| (k as Nat, b)), false)
    }

    /// Members and non-members decided at each stage.
    pub fn stage_counts(&self) -> Vec<(usize, usize)> {
        self.boundaries
            .windows(2)
            .map(|w| {
                let part = &self.a_prefix[w[0] + 1..=w[1]];
                (part.iter().filter(|&&b| b).count(), part.iter().filter(|&&b| !b).count())
            })
            .collect()
    }
}

/// Stages run for at least this many rounds, with no candidate past the list.
pub const DA_MIN_STAGES: usize = 4;

/// A name prefix: `w` padded with 0s to length `len`.
fn padded(w: &[Nat], len: usize) -> Word {
    let mut v = w.to_vec();
    v.resize(len.max(w.len()), 0);
    Word(v)
}

/// Decides `A ∩ {0, …, sₙ}` in stage `n` against candidate `n`. Starts
/// from `s₀ = 0 ∉ A`.
pub fn da_diagonalize(candidates: &[HwitCandidate], fuel: Fuel) -> DaDiagonalization {
    let mut a = vec![false];
    let mut bounds = vec![0usize];
    let mut certs = Vec::new();
    let mut log = StageLog::new();
    let stages = candidates.len().max(DA_MIN_STAGES);
    for stage in 1..=stages {
        let s = *bounds.last().unwrap();
        let cand = candidates.get(stage - 1);
        let chosen = cand.and_then(|c| c.first_compatible(s + 1, fuel).map(|i| (c, i)));
        let label = cand.map_or("none".to_string(), |c| c.label.clone());
        match chosen {
            None => {
                a.extend([true, false]);
                bounds.push(s + 2);
                let name_a = padded(&[], s + 1).0.into_iter().chain([1, 0]).collect::<Vec<_>>();
                let name_b = padded(&[], s + 1).0.into_iter().chain([0, 1]).collect::<Vec<_>>();
                log.push(stage as u64, "omission", json!({ "candidate": label, "s": s + 2 }));
                if cand.is_some() {
                    certs.push(DaCertificate::Omission {
                        stage,
                        candidate: label,
                        zeros: s + 1,
                        name_a: Word(name_a),
                        name_b: Word(name_b),
                        fuel,
                    });
                }
            }
            Some((c, i)) => {
                let (w, u) = c.pair(i).expect("chosen pair exists");
                let len = w.len().max(u.len()).max(s + 1);
                let next = len + 2;
                a.resize(next + 1, false);
                for (k, bit) in a.iter_mut().enumerate().take(next).skip(s + 1) {
                    *bit = w.get(k) == Some(&1) || u.get(k) == Some(&1);
                }
                a[next] = true;
                bounds.push(next);
                // both names continue as the characteristic function of A
                let extend = |x: &[Nat]| {
                    let mut v = padded(x, next + 1).0;
                    for k in x.len()..=next {
                        v[k] = a[k] as Nat;
                    }
                    Word(v)
                };
                let (p, q) = (extend(&w), extend(&u));
                let step = c.confirmation_step(&Name::from_word(p.clone(), 0), &Name::from_word(q.clone(), 0), fuel);
                log.push(stage as u64, "pair", json!({ "candidate": label, "index": i, "s": next, "step": step }));
                certs.push(match step {
                    Some(step) => DaCertificate::WrongSeparation {
                        stage,
                        candidate: label,
                        pair_index: i,
                        name_p: p,
                        name_q: q,
                        step,
                    },
                    None => DaCertificate::Stalled { stage, candidate: label, fuel },
                });
            }
        }
    }
    DaDiagonalization { a_prefix: a, boundaries: bounds, certificates: certs, log }
}

/// Whether the word can begin a name of `point` for the decided prefix of `A`:
/// every 1 sits on a position of the right set, and some 1 appears.
fn names_point(a_prefix: &[bool], w: &[Nat], point: DaPoint) -> bool {
    w.len() <= a_prefix.len()
        && w.contains(&1)
        && w.iter().zip(a_prefix).all(|(&b, &m)| b == 0 || m == (point == DaPoint::A))
}

/// Rechecks a certificate by simulating the candidate.
pub fn replay_da_certificate(run: &DaDiagonalization, candidate: &HwitCandidate, cert: &DaCertificate) -> bool {
    match cert {
        DaCertificate::Omission { zeros, name_a, name_b, fuel, .. } => {
            candidate.first_compatible(*zeros, *fuel).is_none()
                && names_point(&run.a_prefix, name_a, DaPoint::A)
                && names_point(&run.a_prefix, name_b, DaPoint::B)
                && candidate
                    .confirmation_step(&Name::from_word(name_a.clone(), 0), &Name::from_word(name_b.clone(), 0), *fuel)
                    .is_none()
        }
        DaCertificate::WrongSeparation { name_p, name_q, step, .. } => {
            names_point(&run.a_prefix, name_p, DaPoint::A)
                && names_point(&run.a_prefix, name_q, DaPoint::A)
                && candidate.confirmation_step(
                    &Name::from_word(name_p.clone(), 0),
                    &Name::from_word(name_q.clone(), 0),
                    *step,
                ) == Some(*step)
        }
        DaCertificate::Stalled { .. } => false,
    }
}

/// The interleaved pair prefix split into coordinates, for reports.
pub fn split_pair(prefix: &[Nat]) -> (Word, Word) {
    split_interleaved(prefix)
}

/// Samples of distinct points of the partition variant, by block.
pub fn partition_samples(blocks: &[OracleSet]) -> BTreeMap<usize, Vec<Name>> {
    blocks
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let first = (0..200).find(|&k| b.contains(k));
            (i, vec![da_block_name(b, &[]), da_block_name(b, &first.into_iter().collect::<Vec<_>>())])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discreteness_examples() {
        let a = OracleSet::evens();
        let d = da_discreteness(&a);
        let pa = da_name(&a, DaPoint::A, &[]);
        assert_eq!(d.equal(&pa, &pa).observe(100).step(), Some(2));
        let pb = da_name(&a, DaPoint::B, &[]);
        assert!(!d.equal(&pa, &pb).confirmed_by(100_000));
        let (x, y) = (da_name(&a, DaPoint::A, &[0, 2]), da_name(&a, DaPoint::A, &[4, 6]));
        assert!(d.equal(&x, &y).confirmed_by(100));
        let space = da_space(&a);
        assert_eq!(space.meta_equal(&x, &y, 100), Some(true));
        assert_eq!(space.meta_equal(&pa, &pb, 100), Some(false));
    }

    #[test]
    fn empty_list_alternates() {
        let run = da_diagonalize(&[], 1000);
        assert_eq!(run.a_prefix, vec![false, true, false, true, false, true, false, true, false]);
        assert!(run.certificates.is_empty());
    }

    #[test]
    fn diagonal_candidate_is_defeated() {
        let c = &bundled_candidates()[1];
        let run = da_diagonalize(std::slice::from_ref(c), 10_000);
        let cert = &run.certificates[0];
        assert!(matches!(cert, DaCertificate::WrongSeparation { .. }), "{cert:?}");
        assert!(replay_da_certificate(&run, c, cert));
    }

    #[test]
    fn silent_candidate_gets_omission() {
        let c = &bundled_candidates()[0];
        let run = da_diagonalize(std::slice::from_ref(c), 10_000);
        assert!(matches!(run.certificates[0], DaCertificate::Omission { .. }));
        assert!(replay_da_certificate(&run, c, &run.certificates[0]));
    }

    #[test]
    fn bundled_suite_is_defeated() {
        let cands = bundled_candidates();
        let run = da_diagonalize(&cands, 10_000);
        assert_eq!(run.certificates.len(), 10);
        for (c, cert) in cands.iter().zip(&run.certificates) {
            assert!(replay_da_certificate(&run, c, cert), "{} {cert:?}", c.label);
        }
        for (members, non) in run.stage_counts() {
            assert!(members >= 1 && non >= 1);
        }
    }

    #[test]
    fn hwit_file_round_trip() {
        let c = &bundled_candidates()[2];
        let text = c.to_text(5);
        let back = HwitCandidate::parse("shifted", &text).unwrap();
        assert_eq!(back.to_text(5), text);
        assert!(HwitCandidate::parse("x", "hwit v1\npair 0 2 | 1\n").is_err());
    }

    #[test]
    fn partition_variant_three_points() {
        let a = OracleSet::evens();
        let b0 = OracleSet::rule("odd multiples of 3", |n| n % 2 == 1 && n % 3 == 0);
        let b1 = OracleSet::rule("other odds", |n| n % 2 == 1 && n % 3 != 0);
        let space = da_partition_variant(&a, vec![b0.clone(), b1.clone()]);
        let d = da_discreteness(&a);
        let names =
            [da_name(&a, DaPoint::A, &[]), da_block_name(&b0, &[]), da_block_name(&b1, &[]), da_block_name(&b0, &[3])];
        for (i, x) in names.iter().enumerate() {
            for (j, y) in names.iter().enumerate() {
                let same = space.meta_equal(x, y, 200).unwrap();
                assert_eq!(same, i == j || (i.min(j) == 1 && i.max(j) == 3));
                assert_eq!(d.equal(x, y).confirmed_by(400), same);
            }
        }
        assert_eq!(partition_samples(&[b0, b1]).len(), 2);
    }
}
