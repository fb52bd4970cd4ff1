//! `repspace ceer …`

use std::collections::{BTreeMap, VecDeque};

use clap::Subcommand;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use repspace::ceers::{
    ceer_discreteness, example35_edge_of, inseparability_probe, iso_with_quotient, out_degree_violations, saturate,
    CeerPresentation, Example35Audit, FailureCertificate, SeparationVerdict, TimedPair,
};
use repspace::kernel::{enumerate_program, Fuel, GoedelIndex, Name, Nat};

use crate::inputs::CeerSource;
use crate::report::{Outcome, ReportBuilder};
use crate::{CliResult, Ctx};

#[derive(Debug, Subcommand)]
pub enum CeerCmd {
    /// Saturate the generators and list the classes with their merge log.
    Closure {
        #[command(flatten)]
        source: CeerSource,
    },
    /// Semidecide `n R m`, with a generator path as certificate.
    Equal {
        #[command(flatten)]
        source: CeerSource,
        n: Nat,
        m: Nat,
    },
    /// Round trip through the isomorphism between ℕ/R and its name space.
    Iso {
        #[command(flatten)]
        source: CeerSource,
        #[arg(long, default_value_t = 40)]
        bound: Nat,
    },
    /// Build the edge log of the no-computable-map relation and audit
    /// candidate maps against it.
    Example35 {
        /// Audit toy programs 0..K.
        #[arg(long, default_value_t = 20)]
        audit: Nat,
        #[arg(long, default_value_t = 20)]
        max_sample: Nat,
        /// Include the full edge log in the report.
        #[arg(long)]
        edges: bool,
    },
    /// Test whether a toy program separates the classes of `a` and `b`.
    Probe {
        #[command(flatten)]
        source: CeerSource,
        #[arg(long)]
        a: Nat,
        #[arg(long)]
        b: Nat,
        /// Gödel index of the separator.
        #[arg(long)]
        separator: Nat,
    },
}

/// A chain of emitted generators from `n` to `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename = "merge-path")]
pub struct MergePath {
    pub n: Nat,
    pub m: Nat,
    pub fuel: Fuel,
    pub steps: Vec<TimedPair>,
}

impl MergePath {
    /// Whether the steps chain from `n` to `m`, each used within `fuel`.
    pub fn chains(&self) -> bool {
        let mut at = self.n;
        for s in &self.steps {
            if s.fuel > self.fuel {
                return false;
            }
            at = if s.a == at {
                s.b
            } else if s.b == at {
                s.a
            } else {
                return false;
            };
        }
        at == self.m
    }
}

/// Breadth-first search over the generators emitted within `fuel`.
pub fn merge_path(pres: &CeerPresentation, n: Nat, m: Nat, fuel: Fuel) -> Option<MergePath> {
    let gens = pres.emitted(fuel);
    let mut adj: BTreeMap<Nat, Vec<(Nat, TimedPair)>> = BTreeMap::new();
    for g in &gens {
        adj.entry(g.a).or_default().push((g.b, *g));
        adj.entry(g.b).or_default().push((g.a, *g));
    }
    let mut prev: BTreeMap<Nat, Option<(Nat, TimedPair)>> = BTreeMap::from([(n, None)]);
    let mut queue = VecDeque::from([n]);
    while let Some(x) = queue.pop_front() {
        if x == m {
            let mut steps = Vec::new();
            let mut at = m;
            while let Some(Some((p, g))) = prev.get(&at) {
                steps.push(*g);
                at = *p;
            }
            steps.reverse();
            return Some(MergePath { n, m, fuel, steps });
        }
        for &(y, g) in adj.get(&x).into_iter().flatten() {
            if let std::collections::btree_map::Entry::Vacant(e) = prev.entry(y) {
                e.insert(Some((x, g)));
                queue.push_back(y);
            }
        }
    }
    None
}

/// An audited candidate of the example35 relation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateCertificate {
    pub candidate: Nat,
    pub certificate: FailureCertificate,
}

pub fn run(ctx: &Ctx, cmd: &CeerCmd) -> CliResult<ReportBuilder> {
    match cmd {
        CeerCmd::Closure { source } => closure(ctx, source),
        CeerCmd::Equal { source, n, m } => equal(ctx, source, *n, *m),
        CeerCmd::Iso { source, bound } => iso(ctx, source, *bound),
        CeerCmd::Example35 { audit, max_sample, edges } => example35(ctx, *audit, *max_sample, *edges),
        CeerCmd::Probe { source, a, b, separator } => probe(ctx, source, *a, *b, *separator),
    }
}

fn closure(ctx: &Ctx, source: &CeerSource) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(1000);
    let (pres, src) = source.load()?;
    let mut r = ReportBuilder::new("ceer-closure", ctx.config(1000, json!({ "source": src })));
    let st = saturate(&pres, fuel);
    r.check("saturated", Outcome::Verified, json!({ "generators": st.consumed(), "merges": st.events().len() }));
    r.data(json!({ "classes": st.classes(), "merges": st.events() })).fuel(fuel);
    Ok(r)
}

fn equal(ctx: &Ctx, source: &CeerSource, n: Nat, m: Nat) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(1000);
    let (pres, src) = source.load()?;
    let config = ctx.config(1000, json!({ "source": src, "spec": source, "n": n, "m": m }));
    let mut r = ReportBuilder::new("ceer-equal", config);
    match repspace::ceers::ceer_equal(&pres, n, m).observe(fuel).step() {
        Some(at) => {
            let path = merge_path(&pres, n, m, at).expect("a confirmed merge has a generator path");
            r.expect("merge path chains", path.chains(), json!({ "confirmed_at": at, "length": path.steps.len() }));
            r.certificate(&path).fuel(at);
        }
        None => {
            r.check("merged", Outcome::Inconclusive, json!({ "verdict": "NotYet", "fuel": fuel }));
            r.fuel(fuel);
        }
    }
    Ok(r)
}

fn iso(ctx: &Ctx, source: &CeerSource, bound: Nat) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(20_000);
    let (pres, src) = source.load()?;
    let mut r = ReportBuilder::new("ceer-iso", ctx.config(20_000, json!({ "source": src, "bound": bound })));
    let iso = iso_with_quotient(Name::constant, &ceer_discreteness(&pres));
    let st = saturate(&pres, fuel);
    let mut rows = Vec::new();
    let mut outcome = Outcome::Verified;
    for n in 0..=bound {
        let row = match iso.phi_inv(&iso.phi(n), fuel) {
            Ok(back) => {
                let same = st.same(back, n);
                if !same {
                    outcome = outcome.and(Outcome::Refuted);
                }
                json!({ "n": n, "back": back, "merged": same })
            }
            Err(e) => {
                outcome = outcome.and(Outcome::Inconclusive);
                json!({ "n": n, "error": e.to_string() })
            }
        };
        rows.push(row);
    }
    r.check(format!("phi_inv(phi(n)) ~ n for n <= {bound}"), outcome, Value::Null);
    r.data(json!({ "rows": rows })).fuel(fuel);
    Ok(r)
}

fn example35(ctx: &Ctx, audit: Nat, max_sample: Nat, with_edges: bool) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(100_000);
    let config = ctx.config(100_000, json!({ "audit": audit, "max_sample": max_sample, "edges": with_edges }));
    let mut r = ReportBuilder::new("example35", config);
    let run = Example35Audit::new(fuel, max_sample);
    let bad = out_degree_violations(&run.edges);
    r.expect("out-degree <= 1", bad.is_empty(), json!({ "edges": run.edges.len(), "violations": bad }));
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut replay_ok = true;
    let mut inconclusive = 0;
    for c in 0..audit {
        let cert = run.check(GoedelIndex(c));
        let kind = match &cert {
            FailureCertificate::NonTotal { .. } => "NonTotal",
            FailureCertificate::Constant { .. } => "Constant",
            FailureCertificate::NonExtensional { .. } => "NonExtensional",
            FailureCertificate::Inconclusive { .. } => {
                inconclusive += 1;
                "Inconclusive"
            }
        };
        *counts.entry(kind).or_default() += 1;
        replay_ok &= run.replay(GoedelIndex(c), &cert);
        r.certificate(CandidateCertificate { candidate: c, certificate: cert });
    }
    r.expect("certificates replay", replay_ok, json!(counts));
    if inconclusive > 0 {
        r.check("every candidate defeated", Outcome::Inconclusive, json!({ "inconclusive": inconclusive }));
    }
    let data = if with_edges { json!({ "edges": run.edges }) } else { json!({ "edge_count": run.edges.len() }) };
    r.data(data).fuel(fuel);
    Ok(r)
}

/// Rechecks an audited candidate without rebuilding the whole edge log: a
/// NonExtensional edge is recomputed for its vertex alone.
pub fn replay_candidate(c: &CandidateCertificate) -> bool {
    let pres = match c.certificate {
        FailureCertificate::NonExtensional { from, to, fuel, .. } => {
            if example35_edge_of(from, fuel).map(|e| e.to) != Some(to) {
                return false;
            }
            CeerPresentation::from_pairs(vec![(from, to)])
        }
        _ => CeerPresentation::identity(),
    };
    repspace::ceers::replay_certificate(&pres, &enumerate_program(GoedelIndex(c.candidate)), &c.certificate)
}

fn probe(ctx: &Ctx, source: &CeerSource, a: Nat, b: Nat, separator: Nat) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(10_000);
    let (pres, src) = source.load()?;
    let config = ctx.config(10_000, json!({ "source": src, "a": a, "b": b, "separator": separator }));
    let mut r = ReportBuilder::new("ceer-probe", config);
    if saturate(&pres, fuel).same(a, b) {
        let path = merge_path(&pres, a, b, fuel).expect("merged classes have a generator path");
        r.expect("classes of a and b distinct", false, json!({ "merged_within": fuel }));
        r.certificate(&path).fuel(fuel);
        return Ok(r);
    }
    let verdict = inseparability_probe(&pres, a, b, &enumerate_program(GoedelIndex(separator)), fuel)?;
    let separates = matches!(verdict, SeparationVerdict::SeparatesOnSamples { separates: true, .. });
    r.expect("separator separates the visible classes", separates, Value::Null);
    r.certificate(&verdict).fuel(fuel);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_path_follows_generators() {
        let pres = CeerPresentation::from_pairs(vec![(5, 6), (0, 1), (2, 1), (2, 3)]);
        let p = merge_path(&pres, 0, 3, 10).unwrap();
        assert!(p.chains());
        assert_eq!(p.steps.len(), 3);
        assert!(merge_path(&pres, 0, 5, 10).is_none());
        let mut forged = p.clone();
        forged.steps.pop();
        assert!(!forged.chains());
    }
}
