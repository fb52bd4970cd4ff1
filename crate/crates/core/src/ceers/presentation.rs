//! Generator streams for c.e. equivalence relations and the incremental
//! union-find that saturates them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::coding::unpair;
use crate::kernel::machine::{interpret, RunOutcome, ToyProgram};
use crate::kernel::observe::dovetail_budget;
use crate::kernel::{Fuel, Nat, Observation};

/// A generator pair together with the least fuel at which it is emitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimedPair {
    pub fuel: Fuel,
    pub a: Nat,
    pub b: Nat,
}

type EmitFn = dyn Fn(Fuel) -> Vec<TimedPair> + Send + Sync;

#[derive(Clone)]
pub enum GeneratorSource {
    /// Pair `i` is emitted at fuel `i + 1`.
    Pairs(Arc<[(Nat, Nat)]>),
    /// Generator `k` is `unpair(output)` of the program on input `k`,
    /// scheduled with the kernel dovetail budgets.
    Program(ToyProgram),
    /// Any other deterministic, fuel-monotone emitter.
    Stream { label: String, emit: Arc<EmitFn> },
}

/// A c.e. equivalence relation given by generators; the relation is the
/// reflexive-symmetric-transitive closure of the generated pairs.
#[derive(Clone)]
pub struct CeerPresentation {
    source: GeneratorSource,
}

impl fmt::Debug for CeerPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            GeneratorSource::Pairs(p) => write!(f, "Ceer(pairs {:?})", p),
            GeneratorSource::Program(p) => write!(f, "Ceer(prog {p})"),
            GeneratorSource::Stream { label, .. } => write!(f, "Ceer({label})"),
        }
    }
}

impl CeerPresentation {
    pub fn from_pairs(pairs: impl Into<Vec<(Nat, Nat)>>) -> Self {
        CeerPresentation { source: GeneratorSource::Pairs(pairs.into().into()) }
    }

    /// The identity relation.
    pub fn identity() -> Self {
        CeerPresentation::from_pairs(Vec::new())
    }

    pub fn from_program(prog: ToyProgram) -> Self {
        CeerPresentation { source: GeneratorSource::Program(prog) }
    }

    pub fn from_stream(
        label: impl Into<String>,
        emit: impl Fn(Fuel) -> Vec<TimedPair> + Send + Sync + 'static,
    ) -> Self {
        CeerPresentation { source: GeneratorSource::Stream { label: label.into(), emit: Arc::new(emit) } }
    }

    pub fn source(&self) -> &GeneratorSource {
        &self.source
    }

    /// Generators emitted within `fuel`, ordered by emission fuel.
    pub fn emitted(&self, fuel: Fuel) -> Vec<TimedPair> {
        match &self.source {
            GeneratorSource::Pairs(pairs) => pairs
                .iter()
                .take(fuel.min(pairs.len() as Fuel) as usize)
                .enumerate()
                .map(|(i, &(a, b))| TimedPair { fuel: i as Fuel + 1, a, b })
                .collect(),
            GeneratorSource::Program(prog) => program_generators(prog, fuel),
            GeneratorSource::Stream { emit, .. } => emit(fuel),
        }
    }

    /// Text form, see [`CeerPresentation::parse`].
    pub fn to_text(&self) -> Result<String> {
        self.to_text_with_header("ceer v1")
    }

    pub(crate) fn to_text_with_header(&self, header: &str) -> Result<String> {
        match &self.source {
            GeneratorSource::Pairs(pairs) => {
                let mut s = format!("{header}\npairs\n");
                for (a, b) in pairs.iter() {
                    s.push_str(&format!("{a} {b}\n"));
                }
                Ok(s)
            }
            GeneratorSource::Program(prog) => Ok(format!("{header}\nprog\n{}", prog.to_text())),
            GeneratorSource::Stream { label, .. } => {
                Err(Error::Parse(format!("stream presentation `{label}` has no file form")))
            }
        }
    }

    /// Parses `ceer v1` followed by either `pairs` and lines `m n`, or
    /// `prog` and a toy program whose outputs are pair codes.
    pub fn parse(text: &str) -> Result<Self> {
        CeerPresentation::parse_with_header(text, "ceer v1")
    }

    pub(crate) fn parse_with_header(text: &str, header: &str) -> Result<Self> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        if lines.next() != Some(header) {
            return Err(Error::Parse(format!("expected header `{header}`")));
        }
        match lines.next() {
            Some("pairs") => {
                let mut pairs = Vec::new();
                for line in lines {
                    pairs.push(parse_pair_line(line)?);
                }
                Ok(CeerPresentation::from_pairs(pairs))
            }
            Some("prog") => {
                let body: Vec<&str> = lines.collect();
                Ok(CeerPresentation::from_program(ToyProgram::parse(&body.join("\n"))?))
            }
            other => Err(Error::Parse(format!("expected `pairs` or `prog`, found {other:?}"))),
        }
    }
}

pub(crate) fn parse_pair_line(line: &str) -> Result<(Nat, Nat)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    match toks.as_slice() {
        [a, b] => Ok((
            a.parse().map_err(|_| Error::Parse(format!("bad number `{a}`")))?,
            b.parse().map_err(|_| Error::Parse(format!("bad number `{b}`")))?,
        )),
        _ => Err(Error::Parse(format!("expected `m n`, found `{line}`"))),
    }
}

/// Parses the comma-separated short form `"0 1,1 2"` used on the command line.
pub fn parse_pair_list(s: &str) -> Result<Vec<(Nat, Nat)>> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(parse_pair_line).collect()
}

fn program_generators(prog: &ToyProgram, fuel: Fuel) -> Vec<TimedPair> {
    let mut out = Vec::new();
    for k in 0.. {
        let budget = dovetail_budget(k, fuel);
        if budget == 0 {
            break;
        }
        if let RunOutcome::Halted { output, steps } = interpret(prog, k as Nat, budget) {
            let (a, b) = unpair(output);
            out.push(TimedPair { fuel: (k as Fuel + 2) * steps.max(1), a, b });
        }
    }
    out.sort_by_key(|t| t.fuel);
    out
}

/// One effective union, as recorded in the event log.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeEvent {
    pub fuel: Fuel,
    pub a: Nat,
    pub b: Nat,
}

impl fmt::Display for MergeEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fuel={} merge {} {}", self.fuel, self.a, self.b)
    }
}

/// Union-find over the naturals touched so far. Untouched naturals are
/// singleton classes.
#[derive(Clone, Debug, Default)]
pub struct ClosureState {
    parent: BTreeMap<Nat, Nat>,
    size: BTreeMap<Nat, u64>,
    events: Vec<MergeEvent>,
    consumed: usize,
}

impl ClosureState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn find(&self, mut x: Nat) -> Nat {
        while let Some(&p) = self.parent.get(&x) {
            if p == x {
                break;
            }
            x = p;
        }
        x
    }

    fn find_compress(&mut self, x: Nat) -> Nat {
        let root = self.find(x);
        let mut cur = x;
        while let Some(&p) = self.parent.get(&cur) {
            if p == root {
                break;
            }
            self.parent.insert(cur, root);
            cur = p;
        }
        root
    }

    /// Unions the classes of `a` and `b`; returns whether they were distinct.
    pub fn union(&mut self, a: Nat, b: Nat) -> bool {
        self.parent.entry(a).or_insert(a);
        self.parent.entry(b).or_insert(b);
        let (ra, rb) = (self.find_compress(a), self.find_compress(b));
        if ra == rb {
            return false;
        }
        let sa = *self.size.get(&ra).unwrap_or(&1);
        let sb = *self.size.get(&rb).unwrap_or(&1);
        let (big, small) = if sa > sb || (sa == sb && ra < rb) { (ra, rb) } else { (rb, ra) };
        self.parent.insert(small, big);
        self.size.insert(big, sa + sb);
        true
    }

    pub fn same(&self, a: Nat, b: Nat) -> bool {
        a == b || self.find(a) == self.find(b)
    }

    pub fn events(&self) -> &[MergeEvent] {
        &self.events
    }

    pub fn consumed(&self) -> usize {
        self.consumed
    }

    /// Elements that have appeared in some generator.
    pub fn touched(&self) -> impl Iterator<Item = Nat> + '_ {
        self.parent.keys().copied()
    }

    /// Least touched element equivalent to `x` (or `x` itself).
    pub fn canonical(&self, x: Nat) -> Nat {
        let root = self.find(x);
        if root == x && !self.parent.contains_key(&x) {
            return x;
        }
        self.parent.keys().copied().find(|&y| self.find(y) == root).unwrap_or(x).min(x)
    }

    /// The nontrivial classes, each sorted, in order of least element.
    pub fn classes(&self) -> Vec<Vec<Nat>> {
        let mut by_root: BTreeMap<Nat, Vec<Nat>> = BTreeMap::new();
        for &x in self.parent.keys() {
            by_root.entry(self.find(x)).or_default().push(x);
        }
        let mut out: Vec<Vec<Nat>> = by_root.into_values().filter(|c| c.len() > 1).collect();
        out.sort();
        out
    }

    /// The class of `x` among touched elements (always contains `x`).
    pub fn class_of(&self, x: Nat) -> Vec<Nat> {
        let root = self.find(x);
        let mut out: Vec<Nat> = self.parent.keys().copied().filter(|&y| self.find(y) == root).collect();
        if !out.contains(&x) {
            out.push(x);
            out.sort();
        }
        out
    }
}

/// Consumes the generators emitted within `fuel` into a fresh closure.
pub fn saturate(pres: &CeerPresentation, fuel: Fuel) -> ClosureState {
    let mut state = ClosureState::new();
    for g in pres.emitted(fuel) {
        state.consumed += 1;
        if state.union(g.a, g.b) {
            state.events.push(MergeEvent { fuel: g.fuel, a: g.a, b: g.b });
        }
    }
    state
}

/// Semidecides `n R m`. The confirmation fuel is the least fuel at which
/// the saturation has merged the two, so if `(a, b)` and `(b, c)` both
/// confirm by fuel `f` then so does `(a, c)`.
pub fn ceer_equal(pres: &CeerPresentation, n: Nat, m: Nat) -> Observation {
    if n == m {
        return Observation::always();
    }
    let pres = pres.clone();
    Observation::new(move |fuel| saturate(&pres, fuel).same(n, m))
}
