//! ℍᶜ, and a discrete Hausdorff space without a computable injection into ℕ.
//!
//! The diagonalizer builds `Xₙ ⊆ O(ℕ)` against candidate `n`. A candidate
//! reads a finite enumeration prefix `w` (a γ-word, 0 is a pause) as the
//! toy-program input `code(w)` and outputs on halting.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::kernel::coding::decode_word;
use crate::kernel::machine::{enumerate_program, interpret, GoedelIndex, RunOutcome, ToyProgram};
use crate::kernel::observe::{dovetail_winner, tasks};
use crate::kernel::{Fuel, Name, Nat, Observation, Word};
use crate::spaces::descriptor::{Denotation, SpaceDescriptor, SpaceTag};
use crate::spaces::open::HausdorffWitness;

use super::oracle::StageLog;

/// Confirms once program `n` halts on input `n`, refuting `n ∈ ℍᶜ`.
pub fn halting_complement_refute(n: Nat) -> Observation {
    let prog = enumerate_program(GoedelIndex(n));
    Observation::new(move |f| interpret(&prog, n, f) != RunOutcome::Running)
}

/// ℍᶜ as a subspace of ℕ; a name is valid while the program has not halted.
pub fn halting_complement_space() -> SpaceDescriptor {
    SpaceDescriptor::new(SpaceTag::HaltingComplement, |p, h| {
        let n = p.at(0, h)?;
        (!halting_complement_refute(n).confirmed_by(h)).then_some(Denotation::Nat(n))
    })
}

/// The set enumerated by a γ-word.
pub fn gamma_set(w: &[Nat]) -> BTreeSet<Nat> {
    w.iter().filter(|&&s| s > 0).map(|&s| s - 1).collect()
}

/// "Enumerations containing all of `all` denote different points than
/// enumerations containing `other`", added at `stage`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HausdorffClause {
    pub stage: u8,
    pub fuel: Fuel,
    pub all: Vec<Nat>,
    pub other: Nat,
}

impl HausdorffClause {
    fn fires(&self, p: &BTreeSet<Nat>, q: &BTreeSet<Nat>) -> bool {
        self.all.iter().all(|x| p.contains(x)) && q.contains(&self.other)
    }
}

/// A search hit: the candidate output `output` on the γ-word with code `code`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hit {
    pub code: Nat,
    pub word: Word,
    pub output: Nat,
    pub fuel: Fuel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode")]
pub enum DiagonalizerFailure {
    /// Phase 1 forever: the candidate is undefined on every name seen.
    Undefined,
    /// Phase 2 forever: undefined on some names or constant.
    ConstantOrPartial { m: Nat },
    /// Phase 3: two enumeration prefixes of names of `I` get different outputs.
    NonExtensional { j: Hit, k: Hit, i: Vec<Nat> },
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalizerRun {
    pub candidate: Nat,
    pub fuel: Fuel,
    pub phase: u8,
    /// The current guess for `I`, if any; the points are `I` and `ℕ ∖ I`.
    pub i_set: Option<Vec<Nat>>,
    pub clauses: Vec<HausdorffClause>,
    pub failure: DiagonalizerFailure,
    #[serde(skip)]
    pub log: StageLog,
}

impl DiagonalizerRun {
    /// The Hausdorff witness as emitted so far.
    pub fn witness(&self) -> HausdorffWitness {
        let clauses = self.clauses.clone();
        HausdorffWitness::from_pair_test("injection-diagonalizer", move |l, r, f| {
            let (p, q) = (gamma_set(l), gamma_set(r));
            clauses.iter().filter(|c| c.fuel <= f).any(|c| c.fires(&p, &q) || c.fires(&q, &p))
        })
    }
}

/// The first γ-word, among those allowed by `valid`, on which the candidate
/// halts, found under the dovetail schedule.
fn search(
    prog: &ToyProgram,
    fuel: Fuel,
    valid: impl Fn(&Word) -> bool + Send + Sync + 'static,
    differs_from: Option<Nat>,
) -> Option<Hit> {
    let prog2 = prog.clone();
    let ts = tasks(move |i| {
        let w = decode_word(i as Nat);
        if !valid(&w) {
            return Some(Observation::never());
        }
        let prog = prog2.clone();
        Some(Observation::new(move |f| match interpret(&prog, i as Nat, f) {
            RunOutcome::Halted { output, .. } => differs_from != Some(output),
            RunOutcome::Running => false,
        }))
    });
    let (i, at) = dovetail_winner(&ts, fuel)?;
    let output = interpret(prog, i as Nat, fuel).output()?;
    Some(Hit { code: i as Nat, word: decode_word(i as Nat), output, fuel: at })
}

/// Runs the three phases against `candidate` within `fuel`. Phase 2 starts
/// its search with the fuel left after Phase 1.
pub fn injection_diagonalizer(candidate: GoedelIndex, fuel: Fuel) -> DiagonalizerRun {
    let prog = enumerate_program(candidate);
    let mut log = StageLog::new();
    let mut run = DiagonalizerRun {
        candidate: candidate.0,
        fuel,
        phase: 1,
        i_set: None,
        clauses: Vec::new(),
        failure: DiagonalizerFailure::Undefined,
        log: StageLog::new(),
    };
    log.push(1, "phase1", json!({ "space": "{N}" }));
    let Some(j) = search(&prog, fuel, |w| !gamma_set(w).is_empty(), None) else {
        run.log = log;
        return run;
    };
    let j_set = gamma_set(&j.word);
    let top = j_set.iter().next_back().expect("J is nonempty") + 1;
    let i2: Vec<Nat> = (0..=top).collect();
    run.phase = 2;
    run.clauses.push(HausdorffClause { stage: 2, fuel: j.fuel, all: i2.clone(), other: top + 1 });
    run.i_set = Some(i2.clone());
    run.failure = DiagonalizerFailure::ConstantOrPartial { m: j.output };
    log.push(2, "phase2", json!({ "J": j_set, "m": j.output, "fuel": j.fuel, "I": i2 }));

    let rest = fuel - j.fuel;
    let m = j.output;
    let k = search(
        &prog,
        rest,
        move |w| {
            let k = gamma_set(w);
            !k.is_empty() && k.iter().all(|&x| x > top)
        },
        Some(m),
    );
    if let Some(mut k) = k {
        k.fuel += j.fuel;
        let k_set = gamma_set(&k.word);
        let i3: Vec<Nat> = j_set.union(&k_set).copied().collect();
        let other = k_set.iter().next_back().expect("K is nonempty") + 1;
        run.phase = 3;
        run.clauses.push(HausdorffClause { stage: 3, fuel: k.fuel, all: i3.clone(), other });
        run.i_set = Some(i3.clone());
        log.push(3, "phase3", json!({ "K": k_set, "l": k.output, "fuel": k.fuel, "I": i3 }));
        run.failure = DiagonalizerFailure::NonExtensional { j, k, i: i3 };
    }
    run.log = log;
    run
}

/// Rechecks a non-extensionality certificate: both words enumerate subsets
/// of `I` and the candidate outputs differ on them.
pub fn replay_injection_certificate(candidate: GoedelIndex, failure: &DiagonalizerFailure, fuel: Fuel) -> bool {
    let DiagonalizerFailure::NonExtensional { j, k, i } = failure else { return false };
    let prog = enumerate_program(candidate);
    let i: BTreeSet<Nat> = i.iter().copied().collect();
    let out_j = interpret(&prog, j.code, fuel).output();
    let out_k = interpret(&prog, k.code, fuel).output();
    gamma_set(&j.word).is_subset(&i)
        && gamma_set(&k.word).is_subset(&i)
        && out_j == Some(j.output)
        && out_k == Some(k.output)
        && j.output != k.output
}

/// A γ-name listing `set` and then pausing.
pub fn enumeration_name(set: &[Nat]) -> Name {
    crate::spaces::basis::gamma_encode(set)
}
