//! Codes for open, closed and overt sets, and the discreteness and
//! Hausdorff witnesses.

use std::fmt;
use std::sync::Arc;

use crate::kernel::name::{interleave, interleave_words, split_interleaved};
use crate::kernel::transducer::{library, signals_top, CodeSpec};
use crate::kernel::{Fuel, Name, Nat, Observation, Transducer, Word};

use super::descriptor::Point;

/// An open set, coded by a transducer from names to a Sierpiński output.
#[derive(Clone, Debug)]
pub struct OpenSetCode {
    pub code: Transducer,
}

impl OpenSetCode {
    pub fn new(code: Transducer) -> Self {
        OpenSetCode { code }
    }

    /// Accepts once `accepts(prefix, fuel)` holds; `accepts` must be monotone.
    pub fn from_predicate(
        tag: &str,
        params: Vec<Nat>,
        accepts: impl Fn(&[Nat], Fuel) -> bool + Send + Sync + 'static,
    ) -> Self {
        OpenSetCode::new(Transducer::acceptor(CodeSpec::native(tag, params), accepts))
    }

    pub fn everything() -> Self {
        OpenSetCode::new(library::accept_all())
    }

    pub fn nothing() -> Self {
        OpenSetCode::new(library::accept_none())
    }

    /// Does the code accept this finite prefix within `fuel`?
    pub fn accepts_prefix(&self, prefix: &[Nat], fuel: Fuel) -> bool {
        signals_top(&self.code.run(prefix, fuel))
    }

    /// Membership of the point named by `name`.
    pub fn member(&self, name: &Name) -> Observation {
        let (u, name) = (self.clone(), name.clone());
        Observation::new(move |f| u.accepts_prefix(&name.prefix(f), f))
    }

    pub fn union(&self, other: &OpenSetCode) -> OpenSetCode {
        let (a, b) = (self.clone(), other.clone());
        OpenSetCode::from_predicate("union", vec![], move |w, f| a.accepts_prefix(w, f) || b.accepts_prefix(w, f))
    }

    pub fn intersect(&self, other: &OpenSetCode) -> OpenSetCode {
        let (a, b) = (self.clone(), other.clone());
        OpenSetCode::from_predicate("intersection", vec![], move |w, f| {
            a.accepts_prefix(w, f) && b.accepts_prefix(w, f)
        })
    }

    /// Preimage along a name transformation given on prefixes.
    pub fn pull_back(&self, tag: &str, map: impl Fn(&[Nat]) -> Word + Send + Sync + 'static) -> OpenSetCode {
        let u = self.clone();
        OpenSetCode::from_predicate(tag, vec![], move |w, f| u.accepts_prefix(&map(w), f))
    }
}

/// Membership of a point in an open set, as a semidecision.
pub fn open_member(u: &OpenSetCode, x: &Point) -> Observation {
    u.member(&x.name)
}

/// A closed set, coded by its open complement.
#[derive(Clone, Debug)]
pub struct ClosedSetCode {
    pub complement: OpenSetCode,
}

impl ClosedSetCode {
    pub fn complement_of(u: OpenSetCode) -> Self {
        ClosedSetCode { complement: u }
    }

    pub fn empty() -> Self {
        ClosedSetCode::complement_of(OpenSetCode::everything())
    }

    pub fn whole() -> Self {
        ClosedSetCode::complement_of(OpenSetCode::nothing())
    }

    /// Semidecides non-membership.
    pub fn refutes(&self, name: &Name) -> Observation {
        self.complement.member(name)
    }
}

type OvertFn = dyn Fn(&OpenSetCode, Fuel) -> bool + Send + Sync;

/// An overt set: semidecides which opens it meets.
#[derive(Clone)]
pub struct OvertCode {
    label: String,
    meets: Arc<OvertFn>,
}

impl fmt::Debug for OvertCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OvertCode({})", self.label)
    }
}

impl OvertCode {
    /// `meets(U, fuel)` must be monotone in fuel.
    pub fn new(label: impl Into<String>, meets: impl Fn(&OpenSetCode, Fuel) -> bool + Send + Sync + 'static) -> Self {
        OvertCode { label: label.into(), meets: Arc::new(meets) }
    }

    /// The overt set with the given dense family of names: `U` is met iff
    /// it accepts some name of the family, searched by dovetailing.
    pub fn from_names(label: impl Into<String>, names: impl Fn(usize) -> Option<Name> + Send + Sync + 'static) -> Self {
        OvertCode::new(label, move |u, fuel| {
            (0..crate::kernel::observe::dovetail_width(fuel)).map_while(&names).enumerate().any(|(i, p)| {
                let b = crate::kernel::dovetail_budget(i, fuel);
                u.accepts_prefix(&p.prefix(b), b)
            })
        })
    }

    pub fn meets(&self, u: &OpenSetCode) -> Observation {
        let (me, u) = (self.clone(), u.clone());
        Observation::new(move |f| (me.meets)(&u, f))
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Semidecides equality of two points, reading their interleaved names.
#[derive(Clone, Debug)]
pub struct DiscretenessWitness {
    pub code: OpenSetCode,
}

/// Semidecides inequality of two points, reading their interleaved names.
#[derive(Clone, Debug)]
pub struct HausdorffWitness {
    pub code: OpenSetCode,
}

impl DiscretenessWitness {
    pub fn new(code: OpenSetCode) -> Self {
        DiscretenessWitness { code }
    }

    /// Builds the witness from a monotone test on the two coordinate prefixes.
    pub fn from_pair_test(tag: &str, test: impl Fn(&[Nat], &[Nat], Fuel) -> bool + Send + Sync + 'static) -> Self {
        DiscretenessWitness::new(pair_code(tag, test))
    }

    pub fn equal(&self, p: &Name, q: &Name) -> Observation {
        self.code.member(&interleave(p, q))
    }
}

impl HausdorffWitness {
    pub fn new(code: OpenSetCode) -> Self {
        HausdorffWitness { code }
    }

    pub fn from_pair_test(tag: &str, test: impl Fn(&[Nat], &[Nat], Fuel) -> bool + Send + Sync + 'static) -> Self {
        HausdorffWitness::new(pair_code(tag, test))
    }

    pub fn distinct(&self, p: &Name, q: &Name) -> Observation {
        self.code.member(&interleave(p, q))
    }
}

fn pair_code(tag: &str, test: impl Fn(&[Nat], &[Nat], Fuel) -> bool + Send + Sync + 'static) -> OpenSetCode {
    OpenSetCode::from_predicate(tag, vec![], move |w, f| {
        let (l, r) = split_interleaved(w);
        test(&l, &r, f)
    })
}

/// Runs a product-name code with the left coordinate fixed to `x`.
pub(crate) fn section(code: &OpenSetCode, x: &Name, tag: &str) -> OpenSetCode {
    let (code, x) = (code.clone(), x.clone());
    OpenSetCode::from_predicate(tag, vec![], move |w, f| {
        let left = x.take(w.len(), f);
        code.accepts_prefix(&interleave_words(&left, w), f)
    })
}

type OpenSeq = dyn Fn(usize) -> Option<OpenSetCode> + Send + Sync;

/// Two sequences of opens whose products `Uᵢ × Vᵢ` cover exactly the
/// off-diagonal. `None` ends a finite sequence.
#[derive(Clone)]
pub struct HausdorffWitnessSequence {
    u: Arc<OpenSeq>,
    v: Arc<OpenSeq>,
}

impl fmt::Debug for HausdorffWitnessSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("HausdorffWitnessSequence")
    }
}

impl HausdorffWitnessSequence {
    pub fn new(
        u: impl Fn(usize) -> Option<OpenSetCode> + Send + Sync + 'static,
        v: impl Fn(usize) -> Option<OpenSetCode> + Send + Sync + 'static,
    ) -> Self {
        HausdorffWitnessSequence { u: Arc::new(u), v: Arc::new(v) }
    }

    pub fn get(&self, i: usize) -> Option<(OpenSetCode, OpenSetCode)> {
        Some(((self.u)(i)?, (self.v)(i)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Verdict;

    #[test]
    fn open_member_examples() {
        let x = Name::from_word(vec![3], 0);
        assert!(OpenSetCode::everything().member(&x).observe(1).is_confirmed());
        assert_eq!(OpenSetCode::nothing().member(&x).observe(10_000), Verdict::NotYet);
        let first_is_3 = OpenSetCode::new(library::symbol_equals(0, 3));
        assert_eq!(first_is_3.member(&x).observe(100), Verdict::Confirmed(1));
    }

    #[test]
    fn union_and_intersection() {
        let a = OpenSetCode::new(library::symbol_equals(0, 1));
        let b = OpenSetCode::new(library::symbol_equals(1, 2));
        let n = Name::from_word(vec![1, 5], 0);
        assert!(a.union(&b).member(&n).confirmed_by(10));
        assert!(!a.intersect(&b).member(&n).confirmed_by(10));
    }

    #[test]
    fn overt_from_names_searches_family() {
        let o = OvertCode::from_names("naturals", |i| Some(Name::constant(i as Nat)));
        let seven = OpenSetCode::new(library::symbol_equals(0, 7));
        assert!(o.meets(&seven).confirmed_by(100));
        assert!(!o.meets(&OpenSetCode::nothing()).confirmed_by(1000));
    }

    #[test]
    fn witnesses_read_both_coordinates() {
        let d = DiscretenessWitness::from_pair_test("eq0", |l, r, _| !l.is_empty() && !r.is_empty() && l[0] == r[0]);
        assert!(d.equal(&Name::constant(4), &Name::from_word(vec![4], 9)).confirmed_by(4));
        assert!(!d.equal(&Name::constant(4), &Name::constant(5)).confirmed_by(1000));
        let s = section(&d.code, &Name::constant(4), "eq-4");
        assert!(s.member(&Name::constant(4)).confirmed_by(4));
    }
}
