//! Injections of finite spaces into `{0, …, n-1}`.

use crate::error::{Error, Result};
use crate::kernel::observe::{dovetail_winner, tasks};
use crate::kernel::{Fuel, Name, Word};
use crate::spaces::basis::FibreOvertRep;
use crate::spaces::open::{DiscretenessWitness, HausdorffWitness};

/// The index `i` such that `x` has a name starting with `wᵢ`, found by
/// dovetailing the fibre-overtness queries. The prefixes must be pairwise
/// incompatible, one per point.
pub fn finite_injection(rep: &FibreOvertRep, prefixes: &[Word], x: &Name, fuel: Fuel) -> Result<usize> {
    let (rep, ws, x) = (rep.clone(), prefixes.to_vec(), x.clone());
    let ts = tasks(move |i| ws.get(i).map(|w| rep.fibre_meets(&x, w)));
    dovetail_winner(&ts, fuel)
        .map(|(i, _)| i)
        .ok_or(Error::FuelExhausted { fuel, context: "no prefix matched a name of the point".into() })
}

/// Either kind of separation witness for a finite space.
#[derive(Clone, Debug)]
pub enum PointWitness {
    Discrete(DiscretenessWitness),
    Hausdorff(HausdorffWitness),
}

/// The inverse of a bijection `s: {0, …, n-1} → X`. With a discreteness
/// witness, the first `i` confirmed equal to `x`; with a Hausdorff
/// witness, the one index left once the other `n - 1` are confirmed distinct.
pub fn bijection_upgrade(s: &[Name], witness: &PointWitness, x: &Name, fuel: Fuel) -> Result<usize> {
    let exhausted = |context: &str| Error::FuelExhausted { fuel, context: context.into() };
    match s.len() {
        0 => return Err(Error::Precondition("the bijection has an empty domain".into())),
        1 => return Ok(0),
        _ => {}
    }
    match witness {
        PointWitness::Discrete(d) => {
            let (d, s, x) = (d.clone(), s.to_vec(), x.clone());
            let ts = tasks(move |i| s.get(i).map(|p| d.equal(p, &x)));
            dovetail_winner(&ts, fuel).map(|(i, _)| i).ok_or_else(|| exhausted("no equality confirmed"))
        }
        PointWitness::Hausdorff(h) => {
            let open: Vec<usize> = (0..s.len()).filter(|&i| !h.distinct(&s[i], x).confirmed_by(fuel)).collect();
            match open[..] {
                [j] => Ok(j),
                [] => Err(Error::Precondition("every index was separated from the point".into())),
                _ => Err(exhausted("more than one index left")),
            }
        }
    }
}
