//! An infinite discrete space on which every computable map to ℕ is constant.
//!
//! The graph on ℕ: vertex `n` first waits for program `n` to halt on `n`
//! with output `aₙ`, then searches for some `m ≠ n` on which program `n`
//! halts with a different output, and draws the edge `n → m` for the first
//! hit. The ceer is undirected connectivity.
//!
//! The search runs candidate `m` for its `(s + 1)`-th step at work unit
//! `pair(m, s)`, so a hit at `m` taking `t` steps is found at unit
//! `pair(m, t - 1)`. Vertex `n` spends `t₁ + k + 1` units in total when
//! the halting run on `n` takes `t₁` steps and the first hit is at unit
//! `k`, and runs with the dovetail budget `F / (n + 2)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::coding::pair;
use crate::kernel::machine::{enumerate_program, interpret, GoedelIndex, RunOutcome, ToyProgram};
use crate::kernel::observe::{dovetail_budget, dovetail_width};
use crate::kernel::{Fuel, Nat};

use super::presentation::{ceer_equal, saturate, CeerPresentation, TimedPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: Nat,
    pub to: Nat,
    /// Global fuel at which the edge is emitted.
    pub fuel: Fuel,
    pub a_from: Nat,
    pub a_to: Nat,
}

/// The edge out of vertex `n`, if found within `budget` work units.
fn vertex_edge(n: Nat, budget: Fuel) -> Option<(Nat, Fuel, Nat, Nat)> {
    let prog = enumerate_program(GoedelIndex(n));
    let RunOutcome::Halted { output: a_n, steps: t1 } = interpret(&prog, n, budget) else {
        return None;
    };
    let rest = budget - t1;
    let mut best: Option<(Nat, Nat, Nat)> = None;
    let mut m = 0;
    while pair(m, 0) < rest {
        if m != n {
            let mut smax = 0;
            while pair(m, smax + 1) < rest {
                smax += 1;
            }
            if let RunOutcome::Halted { output, steps } = interpret(&prog, m, smax + 1) {
                let k = pair(m, steps - 1);
                if output != a_n && best.is_none_or(|b| k < b.0) {
                    best = Some((k, m, output));
                }
            }
        }
        m += 1;
    }
    best.map(|(k, m, a_m)| (m, t1 + k + 1, a_n, a_m))
}

/// All edges emitted within global fuel `fuel`, ordered by emission fuel.
pub fn example35_edges(fuel: Fuel) -> Vec<Edge> {
    let mut out = Vec::new();
    for n in 0..dovetail_width(fuel) {
        let budget = dovetail_budget(n, fuel);
        if let Some((to, work, a_from, a_to)) = vertex_edge(n as Nat, budget) {
            out.push(Edge { from: n as Nat, to, fuel: (n as Fuel + 2) * work, a_from, a_to });
        }
    }
    out.sort_by_key(|e| (e.fuel, e.from));
    out
}

/// The edge out of vertex `n` when the construction runs with global fuel
/// `fuel`, computed for that vertex alone.
pub fn example35_edge_of(n: Nat, fuel: Fuel) -> Option<Edge> {
    if n as usize >= dovetail_width(fuel) {
        return None;
    }
    let (to, work, a_from, a_to) = vertex_edge(n, dovetail_budget(n as usize, fuel))?;
    Some(Edge { from: n, to, fuel: (n + 2) * work, a_from, a_to })
}

pub fn example35_ceer() -> CeerPresentation {
    CeerPresentation::from_stream("example35", |fuel| {
        example35_edges(fuel).into_iter().map(|e| TimedPair { fuel: e.fuel, a: e.from, b: e.to }).collect()
    })
}

/// Vertices with more than one outgoing edge in `edges`.
pub fn out_degree_violations(edges: &[Edge]) -> Vec<Nat> {
    let mut deg: BTreeMap<Nat, usize> = BTreeMap::new();
    for e in edges {
        *deg.entry(e.from).or_default() += 1;
    }
    deg.into_iter().filter(|&(_, d)| d > 1).map(|(n, _)| n).collect()
}

/// Why a candidate program does not compute a non-constant map on the
/// quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FailureCertificate {
    /// The candidate did not halt on `point` within `fuel`.
    NonTotal {
        point: Nat,
        fuel: Fuel,
    },
    /// Every sample `0..=max_sample` gave `value`.
    Constant {
        value: Nat,
        max_sample: Nat,
        fuel: Fuel,
    },
    /// `from ≡ to` yet the outputs differ.
    NonExtensional {
        from: Nat,
        to: Nat,
        a_from: Nat,
        a_to: Nat,
        fuel: Fuel,
    },
    Inconclusive {
        reason: String,
    },
}

/// The construction evaluated at a fixed fuel, for auditing many candidates.
#[derive(Clone, Debug)]
pub struct Example35Audit {
    pub fuel: Fuel,
    pub edges: Vec<Edge>,
    pub max_sample: Nat,
}

impl Example35Audit {
    pub fn new(fuel: Fuel, max_sample: Nat) -> Self {
        Example35Audit { fuel, edges: example35_edges(fuel), max_sample }
    }

    pub fn edge_from(&self, n: Nat) -> Option<&Edge> {
        self.edges.iter().find(|e| e.from == n)
    }

    /// Classifies candidate `c` as a would-be map `[n] ↦ Φ_c(n)`.
    pub fn check(&self, c: GoedelIndex) -> FailureCertificate {
        if let Some(e) = self.edge_from(c.0) {
            return FailureCertificate::NonExtensional {
                from: e.from,
                to: e.to,
                a_from: e.a_from,
                a_to: e.a_to,
                fuel: self.fuel,
            };
        }
        let budget = self.fuel;
        let prog = enumerate_program(c);
        let Some(value) = interpret(&prog, c.0, budget).output() else {
            return FailureCertificate::NonTotal { point: c.0, fuel: budget };
        };
        for m in 0..=self.max_sample {
            match interpret(&prog, m, budget).output() {
                None => return FailureCertificate::NonTotal { point: m, fuel: budget },
                Some(v) if v != value => {
                    return FailureCertificate::Inconclusive {
                        reason: format!("sample {m} differs but no edge from {} within fuel", c.0),
                    }
                }
                Some(_) => {}
            }
        }
        FailureCertificate::Constant { value, max_sample: self.max_sample, fuel: budget }
    }

    /// The audited edge log as a presentation.
    pub fn log_presentation(&self) -> CeerPresentation {
        let edges = self.edges.clone();
        CeerPresentation::from_stream("example35-log", move |f| {
            edges.iter().filter(|e| e.fuel <= f).map(|e| TimedPair { fuel: e.fuel, a: e.from, b: e.to }).collect()
        })
    }

    /// Rechecks a certificate for candidate `c` against the edge log; an
    /// edge is also recomputed for its vertex alone.
    pub fn replay(&self, c: GoedelIndex, cert: &FailureCertificate) -> bool {
        if let FailureCertificate::NonExtensional { from, to, fuel, .. } = *cert {
            if example35_edge_of(from, fuel).map(|e| e.to) != Some(to) {
                return false;
            }
        }
        replay_certificate(&self.log_presentation(), &enumerate_program(c), cert)
    }
}

/// Rechecks a certificate against `pres` and the candidate program.
pub fn replay_certificate(pres: &CeerPresentation, prog: &ToyProgram, cert: &FailureCertificate) -> bool {
    match *cert {
        FailureCertificate::NonTotal { point, fuel } => interpret(prog, point, fuel) == RunOutcome::Running,
        FailureCertificate::Constant { value, max_sample, fuel } => {
            (0..=max_sample).all(|m| interpret(prog, m, fuel).output() == Some(value))
        }
        FailureCertificate::NonExtensional { from, to, a_from, a_to, fuel } => {
            a_from != a_to
                && ceer_equal(pres, from, to).confirmed_by(fuel)
                && interpret(prog, from, fuel).output() == Some(a_from)
                && interpret(prog, to, fuel).output() == Some(a_to)
        }
        FailureCertificate::Inconclusive { .. } => true,
    }
}

pub fn check_no_decidable_property(candidate: GoedelIndex, fuel: Fuel) -> FailureCertificate {
    Example35Audit::new(fuel, 20).check(candidate)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum SeparationVerdict {
    SeparatorNonTotal {
        point: Nat,
    },
    /// `n` and `m` are merged but receive different outputs.
    SeparatorNonExtensional {
        n: Nat,
        m: Nat,
        out_n: Nat,
        out_m: Nat,
    },
    /// Whether class A samples all give 0 and class B samples all give 1.
    SeparatesOnSamples {
        separates: bool,
        samples_a: Vec<Nat>,
        samples_b: Vec<Nat>,
    },
}

/// Probes whether `separator` separates the classes of `a` and `b`, on the
/// class members visible at `fuel`.
pub fn inseparability_probe(
    pres: &CeerPresentation,
    a: Nat,
    b: Nat,
    separator: &ToyProgram,
    fuel: Fuel,
) -> Result<SeparationVerdict> {
    let st = saturate(pres, fuel);
    if st.same(a, b) {
        return Err(Error::Precondition(format!("{a} and {b} are merged at fuel {fuel}")));
    }
    let (ca, cb) = (st.class_of(a), st.class_of(b));
    let mut outputs = BTreeMap::new();
    for &x in ca.iter().chain(&cb) {
        match interpret(separator, x, fuel).output() {
            Some(v) => {
                outputs.insert(x, v);
            }
            None => return Ok(SeparationVerdict::SeparatorNonTotal { point: x }),
        }
    }
    for class in [&ca, &cb] {
        let first = class[0];
        if let Some(&m) = class.iter().find(|&&m| outputs[&m] != outputs[&first]) {
            return Ok(SeparationVerdict::SeparatorNonExtensional {
                n: first,
                m,
                out_n: outputs[&first],
                out_m: outputs[&m],
            });
        }
    }
    let separates = ca.iter().all(|x| outputs[x] == 0) && cb.iter().all(|x| outputs[x] == 1);
    Ok(SeparationVerdict::SeparatesOnSamples { separates, samples_a: ca, samples_b: cb })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::machine::{encode_program, library};

    /// Independent search for vertex `n` with unlimited budget: halting run
    /// on `n`, then the least `pair(m, t - 1)` over differing hits.
    fn oracle_edge(n: Nat, steps: Fuel, max_m: Nat) -> Option<Nat> {
        let prog = enumerate_program(GoedelIndex(n));
        let a_n = interpret(&prog, n, steps).output()?;
        (0..=max_m)
            .filter(|&m| m != n)
            .filter_map(|m| match interpret(&prog, m, steps) {
                RunOutcome::Halted { output, steps: t } if output != a_n => Some((pair(m, t - 1), m)),
                _ => None,
            })
            .min()
            .map(|(_, m)| m)
    }

    #[test]
    fn echo_vertex_links_to_first_other() {
        let echo = encode_program(&library::echo()).unwrap().0;
        let edges = example35_edges(2000);
        let e = edges.iter().find(|e| e.from == echo).expect("echo gets an edge");
        assert_eq!(Some(e.to), oracle_edge(echo, 100, 40));
        assert_ne!(e.a_from, e.a_to);
    }

    #[test]
    fn looping_and_constant_vertices_stay_isolated() {
        for prog in [library::looping(), library::constant(0)] {
            let n = encode_program(&prog).unwrap().0;
            assert_eq!(vertex_edge(n, 20_000), None);
        }
    }

    #[test]
    fn out_degree_and_monotone_emission() {
        let small = example35_edges(3000);
        let big = example35_edges(6000);
        assert!(out_degree_violations(&big).is_empty());
        for e in &small {
            assert!(big.contains(e));
        }
        for e in &big {
            assert_eq!(small.contains(e), e.fuel <= 3000);
        }
    }

    #[test]
    fn edges_agree_with_unbounded_search() {
        for e in example35_edges(5000) {
            assert_eq!(Some(e.to), oracle_edge(e.from, 5000, 200), "vertex {}", e.from);
        }
    }

    #[test]
    fn certificates_replay() {
        let audit = Example35Audit::new(5000, 10);
        let pres = example35_ceer();
        let echo = encode_program(&library::echo()).unwrap();
        let cert = audit.check(echo);
        assert!(matches!(cert, FailureCertificate::NonExtensional { .. }));
        assert!(replay_certificate(&pres, &library::echo(), &cert));
        assert!(audit.replay(echo, &cert));
        let FailureCertificate::NonExtensional { from, to, .. } = cert else { unreachable!() };
        assert_eq!(example35_edge_of(from, 5000).map(|e| e.to), Some(to));
        assert_eq!(
            example35_edges(5000).iter().filter_map(|e| example35_edge_of(e.from, 5000)).collect::<Vec<_>>().len(),
            audit.edges.len()
        );
        let forged = FailureCertificate::NonExtensional { from, to: to + 1, a_from: 0, a_to: 1, fuel: 5000 };
        assert!(!audit.replay(echo, &forged));
        let looping = encode_program(&library::looping()).unwrap();
        assert!(matches!(audit.check(looping), FailureCertificate::NonTotal { .. }));
        // the constant program has a large index, so it needs more fuel to halt on it
        let zero = encode_program(&library::constant(0)).unwrap();
        assert!(matches!(audit.check(zero), FailureCertificate::NonTotal { .. }));
        let wide = Example35Audit { fuel: 1_000_000, edges: Vec::new(), max_sample: 10 };
        let cert = wide.check(zero);
        assert!(matches!(cert, FailureCertificate::Constant { value: 0, .. }), "{cert:?}");
        assert!(replay_certificate(&pres, &library::constant(0), &cert));
    }

    #[test]
    fn probe_verdicts() {
        let pres = CeerPresentation::from_pairs(vec![(0, 2), (1, 3)]);
        let v = inseparability_probe(&pres, 0, 1, &library::constant(0), 100).unwrap();
        assert!(matches!(v, SeparationVerdict::SeparatesOnSamples { separates: false, .. }));
        let v = inseparability_probe(&pres, 0, 1, &library::looping(), 100).unwrap();
        assert_eq!(v, SeparationVerdict::SeparatorNonTotal { point: 0 });
        let pres = CeerPresentation::from_pairs(vec![(0, 1)]);
        let v = inseparability_probe(&pres, 0, 2, &library::echo(), 100).unwrap();
        assert!(matches!(v, SeparationVerdict::SeparatorNonExtensional { n: 0, m: 1, .. }));
        assert!(inseparability_probe(&pres, 0, 1, &library::echo(), 100).is_err());
    }
}
