//! Oracle sets, staged approximations and the stage log.
//!
//! Non-computable parameters are supplied as data: a finite exception table
//! over a default bit, or a named rule. Staged tables record the mind
//! changes of a d.c.e. or limit-computable approximation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Fuel, Nat};

type Rule = dyn Fn(Nat) -> bool + Send + Sync;

/// A set of naturals given by table or by rule.
#[derive(Clone)]
pub struct OracleSet {
    default: bool,
    table: BTreeMap<Nat, bool>,
    rule: Option<(String, Arc<Rule>)>,
}

impl fmt::Debug for OracleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rule {
            Some((label, _)) => write!(f, "OracleSet({label})"),
            None => write!(f, "OracleSet(default={}, {:?})", self.default, self.table),
        }
    }
}

impl OracleSet {
    /// The finite set of the given members.
    pub fn finite(members: impl IntoIterator<Item = Nat>) -> Self {
        OracleSet::from_table(members.into_iter().map(|n| (n, true)), false)
    }

    /// All naturals except the given ones.
    pub fn cofinite(non_members: impl IntoIterator<Item = Nat>) -> Self {
        OracleSet::from_table(non_members.into_iter().map(|n| (n, false)), true)
    }

    pub fn from_table(entries: impl IntoIterator<Item = (Nat, bool)>, default: bool) -> Self {
        OracleSet { default, table: entries.into_iter().collect(), rule: None }
    }

    /// A set given by a decidable rule; table entries still override it.
    pub fn rule(label: impl Into<String>, f: impl Fn(Nat) -> bool + Send + Sync + 'static) -> Self {
        OracleSet { default: false, table: BTreeMap::new(), rule: Some((label.into(), Arc::new(f))) }
    }

    pub fn evens() -> Self {
        OracleSet::rule("evens", |n| n % 2 == 0)
    }

    pub fn contains(&self, n: Nat) -> bool {
        if let Some(&b) = self.table.get(&n) {
            return b;
        }
        match &self.rule {
            Some((_, f)) => f(n),
            None => self.default,
        }
    }

    pub fn members_below(&self, bound: Nat) -> Vec<Nat> {
        (0..bound).filter(|&n| self.contains(n)).collect()
    }

    pub fn complement(&self) -> OracleSet {
        let me = self.clone();
        OracleSet::rule(format!("complement of {me:?}"), move |n| !me.contains(n))
    }

    pub fn label(&self) -> String {
        format!("{self:?}")
    }

    /// `oracle v1`, an optional `default <bit>` line, then lines `n bit`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        expect_header(&mut lines, "oracle v1")?;
        let mut default = false;
        let mut table = BTreeMap::new();
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                ["default", b] => default = parse_bit(b)?,
                [n, b] => {
                    table.insert(parse_nat(n)?, parse_bit(b)?);
                }
                _ => return Err(Error::Parse(format!("expected `n bit`, found `{line}`"))),
            }
        }
        Ok(OracleSet::from_table(table, default))
    }

    pub fn to_text(&self) -> Result<String> {
        if let Some((label, _)) = &self.rule {
            return Err(Error::Parse(format!("rule oracle `{label}` has no file form")));
        }
        let mut s = String::from("oracle v1\n");
        if self.default {
            s.push_str("default 1\n");
        }
        for (n, b) in &self.table {
            s.push_str(&format!("{n} {}\n", u8::from(*b)));
        }
        Ok(s)
    }
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty())
}

pub(crate) fn expect_header<'a>(lines: &mut impl Iterator<Item = &'a str>, header: &str) -> Result<()> {
    match lines.next() {
        Some(h) if h == header => Ok(()),
        other => Err(Error::Parse(format!("expected header `{header}`, found {other:?}"))),
    }
}

pub(crate) fn parse_nat(s: &str) -> Result<Nat> {
    s.parse().map_err(|_| Error::Parse(format!("bad number `{s}`")))
}

pub(crate) fn parse_bit(s: &str) -> Result<bool> {
    match s {
        "0" => Ok(false),
        "1" => Ok(true),
        _ => Err(Error::Parse(format!("bad bit `{s}`"))),
    }
}

/// A stream that lists a set, position by position; `None` is a pause.
/// Position `k` is available from fuel `k + 1`.
#[derive(Clone)]
pub struct Enumeration {
    label: String,
    emit: Arc<dyn Fn(usize) -> Option<Nat> + Send + Sync>,
}

impl fmt::Debug for Enumeration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Enumeration({})", self.label)
    }
}

impl Enumeration {
    pub fn new(label: impl Into<String>, emit: impl Fn(usize) -> Option<Nat> + Send + Sync + 'static) -> Self {
        Enumeration { label: label.into(), emit: Arc::new(emit) }
    }

    /// Position `k` emits `k` when `k` is in the set.
    pub fn listing(set: &OracleSet) -> Self {
        let set = set.clone();
        Enumeration::new(format!("listing {set:?}"), move |k| Some(k as Nat).filter(|&n| set.contains(n)))
    }

    /// Lists the given finite set in order, then pauses forever.
    pub fn of_finite(members: &[Nat]) -> Self {
        let mut v = members.to_vec();
        v.sort_unstable();
        v.dedup();
        Enumeration::new(format!("finite {v:?}"), move |k| v.get(k).copied())
    }

    pub fn empty() -> Self {
        Enumeration::new("empty", |_| None)
    }

    pub fn at(&self, k: usize) -> Option<Nat> {
        (self.emit)(k)
    }

    /// The fuel at which `n` first appears, if within `fuel`.
    pub fn first_step(&self, n: Nat, fuel: Fuel) -> Option<Fuel> {
        (0..fuel as usize).find(|&k| self.at(k) == Some(n)).map(|k| k as Fuel + 1)
    }

    pub fn emitted(&self, fuel: Fuel) -> BTreeSet<Nat> {
        (0..fuel as usize).filter_map(|k| self.at(k)).collect()
    }
}

/// One recorded approximation change: from `stage` on, `n` has membership `bit`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEntry {
    pub stage: u64,
    pub n: Nat,
    pub bit: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StageKind {
    /// At most two changes per element, `0 → 1 → 0`.
    Dce,
    /// Finitely many changes per element.
    Limit,
}

/// A staged approximation. Elements without entries are out at every stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageTable {
    kind: StageKind,
    entries: Vec<StageEntry>,
}

impl StageTable {
    /// Sorts the entries by stage and checks the kind's discipline.
    pub fn new(kind: StageKind, mut entries: Vec<StageEntry>) -> Result<Self> {
        entries.sort_by_key(|e| (e.stage, e.n));
        let table = StageTable { kind, entries };
        table.validate()?;
        Ok(table)
    }

    pub fn dce(entries: &[(u64, Nat, bool)]) -> Result<Self> {
        StageTable::new(StageKind::Dce, entries.iter().map(|&(stage, n, bit)| StageEntry { stage, n, bit }).collect())
    }

    pub fn limit(entries: &[(u64, Nat, bool)]) -> Result<Self> {
        StageTable::new(StageKind::Limit, entries.iter().map(|&(stage, n, bit)| StageEntry { stage, n, bit }).collect())
    }

    fn validate(&self) -> Result<()> {
        let mut seen: BTreeMap<Nat, Vec<(u64, bool)>> = BTreeMap::new();
        for e in &self.entries {
            seen.entry(e.n).or_default().push((e.stage, e.bit));
        }
        for (n, hist) in seen {
            if hist.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Precondition(format!("element {n} changes twice at one stage")));
            }
            let changes = self.changes_in(&hist);
            if self.kind == StageKind::Dce && changes.len() > 2 {
                return Err(Error::Precondition(format!("element {n} changes more than twice")));
            }
            if self.kind == StageKind::Dce && changes.first().is_some_and(|&(_, b)| !b) {
                return Err(Error::Precondition(format!("element {n} must enter before leaving")));
            }
        }
        Ok(())
    }

    /// The effective changes of a history, dropping entries that repeat the current bit.
    fn changes_in(&self, hist: &[(u64, bool)]) -> Vec<(u64, bool)> {
        let mut cur = false;
        let mut out = Vec::new();
        for &(s, b) in hist {
            if b != cur {
                out.push((s, b));
                cur = b;
            }
        }
        out
    }

    pub fn kind(&self) -> StageKind {
        self.kind
    }

    pub fn entries(&self) -> &[StageEntry] {
        &self.entries
    }

    /// Membership of `n` as approximated at `stage`.
    pub fn at_stage(&self, n: Nat, stage: u64) -> bool {
        self.entries.iter().rfind(|e| e.n == n && e.stage <= stage).is_some_and(|e| e.bit)
    }

    /// The effective mind changes of `n`, as `(stage, new bit)`.
    pub fn changes(&self, n: Nat) -> Vec<(u64, bool)> {
        let hist: Vec<(u64, bool)> = self.entries.iter().filter(|e| e.n == n).map(|e| (e.stage, e.bit)).collect();
        self.changes_in(&hist)
    }

    /// The limit membership.
    pub fn limit_contains(&self, n: Nat) -> bool {
        self.at_stage(n, u64::MAX)
    }

    pub fn last_stage(&self) -> u64 {
        self.entries.last().map_or(0, |e| e.stage)
    }

    /// The limit as an oracle set.
    pub fn limit_set(&self) -> OracleSet {
        let mut table = BTreeMap::new();
        for e in &self.entries {
            table.insert(e.n, self.limit_contains(e.n));
        }
        OracleSet::from_table(table, false)
    }

    /// `dce v1` or `lim v1`, then lines `stage n bit`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let kind = match lines.next() {
            Some("dce v1") => StageKind::Dce,
            Some("lim v1") => StageKind::Limit,
            other => return Err(Error::Parse(format!("expected `dce v1` or `lim v1`, found {other:?}"))),
        };
        let mut entries = Vec::new();
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [s, n, b] = toks.as_slice() else {
                return Err(Error::Parse(format!("expected `stage n bit`, found `{line}`")));
            };
            entries.push(StageEntry { stage: parse_nat(s)?, n: parse_nat(n)?, bit: parse_bit(b)? });
        }
        StageTable::new(kind, entries)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from(match self.kind {
            StageKind::Dce => "dce v1\n",
            StageKind::Limit => "lim v1\n",
        });
        for e in &self.entries {
            s.push_str(&format!("{} {} {}\n", e.stage, e.n, u8::from(e.bit)));
        }
        s
    }
}

/// One event of a phased construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageEvent {
    pub stage: u64,
    pub event: String,
    pub data: serde_json::Value,
}

/// Append-only record of a phased construction, written as JSON lines.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StageLog {
    events: Vec<StageEvent>,
}

impl StageLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, stage: u64, event: &str, data: serde_json::Value) {
        self.events.push(StageEvent { stage, event: event.to_string(), data });
    }

    pub fn events(&self) -> &[StageEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for e in &self.events {
            s.push_str(&serde_json::to_string(e).expect("stage events serialize"));
            s.push('\n');
        }
        s
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let events = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| serde_json::from_str(l).map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Ok(StageLog { events })
    }
}
