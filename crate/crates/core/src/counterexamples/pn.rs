//! `pℕ`: ℕ named by `0ⁿ 1 q` with `q` carrying a fixed oracle `p`.
//!
//! `p` is an oracle set read as the bit stream `k ↦ [k ∈ p]`; the overtness
//! realizer below uses `p` itself.

use crate::kernel::observe::{dovetail_winner, tasks};
use crate::kernel::{Fuel, Name, Nat};
use crate::spaces::descriptor::{Denotation, SpaceDescriptor, SpaceTag};
use crate::spaces::open::{DiscretenessWitness, HausdorffWitness, OpenSetCode, OvertCode};

use super::oracle::OracleSet;

/// The bit stream of `p`.
pub fn oracle_stream(p: &OracleSet) -> Name {
    let p = p.clone();
    Name::total(move |k| p.contains(k as Nat) as Nat)
}

/// `0ⁿ 1 p`.
pub fn pn_name(n: Nat, p: &OracleSet) -> Name {
    let mut w = vec![0; n as usize];
    w.push(1);
    Name::prepend(w, oracle_stream(p))
}

/// The length of the leading 0-run, once its terminating 1 is visible.
fn run_length(w: &[Nat]) -> Option<usize> {
    w.iter().position(|&b| b != 0)
}

#[derive(Clone, Debug)]
pub struct PnSpace {
    pub p: OracleSet,
    pub descriptor: SpaceDescriptor,
    pub discreteness: DiscretenessWitness,
    pub hausdorff: HausdorffWitness,
    pub overt: OvertCode,
}

impl PnSpace {
    /// The least `n` whose name `0ⁿ 1 p` the open accepts, with the global
    /// fuel of the dovetailed search.
    pub fn overt_probe(&self, u: &OpenSetCode, fuel: Fuel) -> Option<(Nat, Fuel)> {
        let (u, p) = (u.clone(), self.p.clone());
        let ts = tasks(move |n| Some(u.member(&pn_name(n as Nat, &p))));
        dovetail_winner(&ts, fuel).map(|(n, f)| (n as Nat, f))
    }
}

pub fn pn_space(p: &OracleSet) -> PnSpace {
    let descriptor = SpaceDescriptor::new(SpaceTag::PN(p.clone()), |q, h| {
        run_length(&q.prefix(h)).map(|n| Denotation::Nat(n as Nat))
    });
    let discreteness = DiscretenessWitness::from_pair_test(
        "pn-equal",
        |l, r, _| matches!((run_length(l), run_length(r)), (Some(a), Some(b)) if a == b),
    );
    let hausdorff = HausdorffWitness::from_pair_test("pn-distinct", |l, r, _| match (run_length(l), run_length(r)) {
        (Some(a), Some(b)) => a != b,
        // a finished run differs from a longer unfinished one
        (Some(a), None) => r.len() > a,
        (None, Some(b)) => l.len() > b,
        (None, None) => false,
    });
    let p2 = p.clone();
    let overt = OvertCode::from_names("pn-overt", move |n| Some(pn_name(n as Nat, &p2)));
    PnSpace { p: p.clone(), descriptor, discreteness, hausdorff, overt }
}
