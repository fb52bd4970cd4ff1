//! Ideal spaces of c.e. transitive relations.
//!
//! An ideal of `≪` is a downward closed, upward directed set. A name of an
//! ideal lists its elements, `I = {p(k) | k}`; repetition pads finite ideals.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::ceers::presentation::parse_pair_line;
use crate::ceers::{saturate, CeerPresentation};
use crate::counterexamples::oracle::{content_lines, expect_header};
use crate::error::{Error, Result};
use crate::kernel::{Fuel, Nat};

/// A c.e. relation `x ≪ y`, either listed (pair `i` at fuel `i + 1`) or
/// induced by a ceer, in which case `x ≪ y` iff `x R y`.
#[derive(Clone, Debug)]
pub enum RelationPresentation {
    Pairs(Vec<(Nat, Nat)>),
    Ceer(CeerPresentation),
}

impl RelationPresentation {
    pub fn from_pairs(pairs: impl Into<Vec<(Nat, Nat)>>) -> Self {
        RelationPresentation::Pairs(pairs.into())
    }

    /// Whether `x ≪ y` has been enumerated within `fuel`.
    pub fn related(&self, x: Nat, y: Nat, fuel: Fuel) -> bool {
        match self {
            RelationPresentation::Pairs(p) => p.iter().take(fuel as usize).any(|&e| e == (x, y)),
            RelationPresentation::Ceer(c) => saturate(c, fuel).same(x, y),
        }
    }

    /// All `x` with `x ≪ y` enumerated within `fuel`.
    pub fn predecessors(&self, y: Nat, fuel: Fuel) -> BTreeSet<Nat> {
        match self {
            RelationPresentation::Pairs(p) => p.iter().take(fuel as usize).filter(|e| e.1 == y).map(|e| e.0).collect(),
            RelationPresentation::Ceer(c) => saturate(c, fuel).class_of(y).into_iter().collect(),
        }
    }

    /// Triples `(x, y, z)` with `x ≪ y ≪ z` listed but `x ≪ z` not, within
    /// `fuel`. Only listed relations can show violations.
    pub fn transitivity_violations(&self, fuel: Fuel) -> Vec<(Nat, Nat, Nat)> {
        let RelationPresentation::Pairs(p) = self else { return Vec::new() };
        let seen: BTreeSet<(Nat, Nat)> = p.iter().take(fuel as usize).copied().collect();
        let mut out = Vec::new();
        for &(x, y) in &seen {
            for &(y2, z) in &seen {
                if y == y2 && !seen.contains(&(x, z)) {
                    out.push((x, y, z));
                }
            }
        }
        out
    }

    /// `rel v1`, an optional `pairs` line, then lines `x y`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text).peekable();
        expect_header(&mut lines, "rel v1")?;
        if lines.peek() == Some(&"pairs") {
            lines.next();
        }
        let pairs = lines.map(parse_pair_line).collect::<Result<Vec<_>>>()?;
        Ok(RelationPresentation::Pairs(pairs))
    }

    pub fn to_text(&self) -> Result<String> {
        match self {
            RelationPresentation::Pairs(p) => {
                let mut s = String::from("rel v1\npairs\n");
                for (x, y) in p {
                    s.push_str(&format!("{x} {y}\n"));
                }
                Ok(s)
            }
            RelationPresentation::Ceer(_) => Err(Error::Parse("ceer-induced relation has no file form".into())),
        }
    }
}

/// Outstanding obligations of a finite part of an ideal name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdealObligations {
    /// `(x, y)`: `x ≪ y`, `y` listed, `x` not yet listed.
    pub pending_down: BTreeSet<(Nat, Nat)>,
    /// `(x, y)`: distinct listed elements without a listed common upper bound.
    pub pending_directed: BTreeSet<(Nat, Nat)>,
}

impl IdealObligations {
    pub fn is_empty(&self) -> bool {
        self.pending_down.is_empty() && self.pending_directed.is_empty()
    }
}

/// Lists the obligations visible from the relation pairs enumerated within
/// `fuel` for the set listed by `prefix`.
pub fn validate_ideal_prefix(rel: &RelationPresentation, prefix: &[Nat], fuel: Fuel) -> IdealObligations {
    let listed: BTreeSet<Nat> = prefix.iter().copied().collect();
    let mut out = IdealObligations::default();
    for &y in &listed {
        for x in rel.predecessors(y, fuel) {
            if !listed.contains(&x) {
                out.pending_down.insert((x, y));
            }
        }
    }
    for &x in &listed {
        for &y in listed.range(x + 1..) {
            let bounded = listed.iter().any(|&z| rel.related(x, z, fuel) && rel.related(y, z, fuel));
            if !bounded {
                out.pending_directed.insert((x, y));
            }
        }
    }
    out
}

/// The relation whose ideals are exactly the classes of the ceer.
pub fn ceer_to_ideal_space(pres: &CeerPresentation) -> RelationPresentation {
    RelationPresentation::Ceer(pres.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_relation_has_no_obligations() {
        let rel = RelationPresentation::from_pairs(vec![]);
        assert!(validate_ideal_prefix(&rel, &[3, 1, 4], 100).pending_down.is_empty());
        assert!(validate_ideal_prefix(&rel, &[5], 100).is_empty());
    }

    #[test]
    fn downward_obligation() {
        let rel = RelationPresentation::from_pairs(vec![(0, 1)]);
        let ob = validate_ideal_prefix(&rel, &[1], 10);
        assert!(ob.pending_down.contains(&(0, 1)));
    }

    #[test]
    fn directedness_obligation() {
        let rel = RelationPresentation::from_pairs(vec![(0, 0), (1, 1)]);
        let ob = validate_ideal_prefix(&rel, &[0, 1], 10);
        assert!(ob.pending_directed.contains(&(0, 1)));
    }

    #[test]
    fn identity_ceer_ideals_are_singletons() {
        let rel = ceer_to_ideal_space(&CeerPresentation::identity());
        assert!(validate_ideal_prefix(&rel, &[4], 10).is_empty());
        assert!(!validate_ideal_prefix(&rel, &[4, 5], 10).is_empty());
    }

    #[test]
    fn subsets_of_a_three_element_class() {
        let rel = ceer_to_ideal_space(&CeerPresentation::from_pairs(vec![(0, 1), (1, 2)]));
        assert!(validate_ideal_prefix(&rel, &[0, 1, 2], 10).is_empty());
        assert!(validate_ideal_prefix(&rel, &[2, 0, 2, 1], 10).is_empty());
        for s in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
            let ob = validate_ideal_prefix(&rel, &s, 10);
            assert!(!ob.pending_down.is_empty(), "{s:?}");
            assert!(ob.pending_directed.is_empty());
        }
    }

    #[test]
    fn mixed_classes_never_direct() {
        let rel = ceer_to_ideal_space(&CeerPresentation::from_pairs(vec![(0, 1)]));
        for f in [1, 10, 1000] {
            assert!(validate_ideal_prefix(&rel, &[0, 2], f).pending_directed.contains(&(0, 2)));
        }
    }

    #[test]
    fn transitivity_and_file_format() {
        let rel = RelationPresentation::parse("rel v1\npairs\n0 1\n1 2\n").unwrap();
        assert_eq!(rel.transitivity_violations(10), vec![(0, 1, 2)]);
        let text = rel.to_text().unwrap();
        assert!(RelationPresentation::parse(&text).is_ok());
        assert!(RelationPresentation::parse("rel v1\n0 1\n").is_ok());
        assert!(RelationPresentation::parse("ceer v1\n0 1\n").is_err());
    }
}
