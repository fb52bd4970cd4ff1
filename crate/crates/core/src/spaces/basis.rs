//! The γ-representation of O(ℕ), effective bases, fibre-overt
//! representations and extension of opens from a subspace.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::ceers::{saturate, CeerPresentation};
use crate::kernel::coding::{decode_word, pair, unpair};
use crate::kernel::name::split_interleaved;
use crate::kernel::observe::{dovetail_budget, dovetail_width};
use crate::kernel::transducer::library;
use crate::kernel::{Fuel, Name, Nat, Observation};

use super::descriptor::SpaceDescriptor;
use super::open::{OpenSetCode, OvertCode};

/// Reads the set `{n | p(k) = n + 1 for some k}` from the positions of `p`
/// available within `fuel`. Zeros are pauses.
pub fn gamma_decode(p: &Name, fuel: Fuel) -> BTreeSet<Nat> {
    p.prefix(fuel).iter().filter(|&&s| s > 0).map(|&s| s - 1).collect()
}

/// The γ-name listing a finite set once, then pausing forever.
pub fn gamma_encode(set: &[Nat]) -> Name {
    let mut v: Vec<Nat> = set.iter().map(|&n| n + 1).collect();
    v.sort_unstable();
    v.dedup();
    Name::from_word(v, 0)
}

/// The γ-name of an enumerated set: position `k` carries `e(k) + 1`, or 0.
pub fn gamma_encode_stream(e: impl Fn(usize) -> Option<Nat> + Send + Sync + 'static) -> Name {
    Name::total(move |k| e(k).map_or(0, |n| n + 1))
}

/// The cylinder of names extending the word coded by `index`.
pub fn baire_basis(index: Nat) -> OpenSetCode {
    OpenSetCode::new(library::cylinder(decode_word(index)))
}

type BasisFn = dyn Fn(Nat) -> OpenSetCode + Send + Sync;
type DecomposeFn = dyn Fn(&OpenSetCode) -> Name + Send + Sync;

/// A computable basis with a decomposition of every open into basic indices,
/// returned as a γ-name.
#[derive(Clone)]
pub struct EffectiveBasis {
    label: String,
    basis_at: Arc<BasisFn>,
    decompose: Arc<DecomposeFn>,
}

impl fmt::Debug for EffectiveBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EffectiveBasis({})", self.label)
    }
}

impl EffectiveBasis {
    pub fn new(
        label: impl Into<String>,
        basis_at: impl Fn(Nat) -> OpenSetCode + Send + Sync + 'static,
        decompose: impl Fn(&OpenSetCode) -> Name + Send + Sync + 'static,
    ) -> Self {
        EffectiveBasis { label: label.into(), basis_at: Arc::new(basis_at), decompose: Arc::new(decompose) }
    }

    pub fn basis_at(&self, n: Nat) -> OpenSetCode {
        (self.basis_at)(n)
    }

    pub fn decompose(&self, u: &OpenSetCode) -> Name {
        (self.decompose)(u)
    }

    /// ℕ with `B_0 = ℕ` and `B_{n+1} = {n}`.
    pub fn nat() -> Self {
        EffectiveBasis::new(
            "nat singletons",
            |i| match i {
                0 => OpenSetCode::everything(),
                n => OpenSetCode::new(library::symbol_equals(0, n - 1)),
            },
            |u| {
                let u = u.clone();
                // position pair(n, s): index n + 1 once U accepts n at fuel s
                Name::total(move |k| {
                    let (n, s) = unpair(k as Nat);
                    if u.accepts_prefix(&SpaceDescriptor::nat_name(n).take(s as usize, s), s) {
                        n + 2
                    } else {
                        0
                    }
                })
            },
        )
    }

    /// ℕ/R with `B_m = [m]`.
    pub fn ceer_quotient(pres: &CeerPresentation) -> Self {
        let p2 = pres.clone();
        EffectiveBasis::new(
            "ceer classes",
            move |m| {
                let pres = p2.clone();
                OpenSetCode::from_predicate("ceer-class", vec![m], move |w, f| {
                    w.first().is_some_and(|&n| saturate(&pres, f).same(n, m))
                })
            },
            |u| {
                let u = u.clone();
                Name::total(move |k| {
                    let (m, s) = unpair(k as Nat);
                    if u.accepts_prefix(&SpaceDescriptor::nat_name(m).take(s as usize, s), s) {
                        m + 1
                    } else {
                        0
                    }
                })
            },
        )
    }

    /// 𝕊 with `B_0 = 𝕊` and `B_1 = {⊤}`.
    pub fn sierpinski() -> Self {
        EffectiveBasis::new(
            "sierpinski",
            |i| match i {
                0 => OpenSetCode::everything(),
                1 => OpenSetCode::from_predicate("top", vec![], |w, _| w.iter().any(|&s| s != 0)),
                _ => OpenSetCode::nothing(),
            },
            |u| {
                let u = u.clone();
                Name::total(move |k| {
                    let s = (k / 2) as Fuel;
                    if k % 2 == 0 {
                        if u.accepts_prefix(&vec![0; s as usize], s) {
                            1
                        } else {
                            0
                        }
                    } else if u.accepts_prefix(&[1], s) {
                        2
                    } else {
                        0
                    }
                })
            },
        )
    }

    /// Baire space with the cylinder basis.
    pub fn baire() -> Self {
        EffectiveBasis::new("baire cylinders", baire_basis, |u| {
            let u = u.clone();
            Name::total(move |k| {
                let (i, s) = unpair(k as Nat);
                if u.accepts_prefix(&decode_word(i), s) {
                    i + 1
                } else {
                    0
                }
            })
        })
    }

    /// The indiscrete basis `{X ⊎ {⊥}}` of an adjoined-bottom space. An open
    /// is nonempty iff it contains ⊥.
    pub fn adjoin_bottom() -> Self {
        EffectiveBasis::new(
            "indiscrete",
            |i| if i == 0 { OpenSetCode::everything() } else { OpenSetCode::nothing() },
            |u| {
                let (u, bot) = (u.clone(), SpaceDescriptor::bottom_name());
                Name::total(move |k| if u.accepts_prefix(&bot.prefix(k as Fuel), k as Fuel) { 1 } else { 0 })
            },
        )
    }
}

/// `i(x) = {n | x ∈ B_n}` as a γ-name: position `pair(n, s)` carries
/// `n + 1` once `B_n` accepts `x` at fuel `s`.
pub fn embed_into_opens_of_nat(basis: &EffectiveBasis, x: &Name) -> Name {
    let (basis, x) = (basis.clone(), x.clone());
    Name::total(move |k| {
        let (n, s) = unpair(k as Nat);
        if basis.basis_at(n).accepts_prefix(&x.prefix(s), s) {
            n + 1
        } else {
            0
        }
    })
}

/// The least `n` listed in a γ-name within `fuel`, read in position order.
pub fn first_listed(p: &Name, fuel: Fuel) -> Option<Nat> {
    p.prefix(fuel).iter().find(|&&s| s > 0).map(|&s| s - 1)
}

type FibreFn = dyn Fn(&[Nat], &[Nat], Fuel) -> bool + Send + Sync;
type PreimageFn = dyn Fn(&Name) -> Name + Send + Sync;

/// A representation whose name fibres are uniformly overt.
///
/// `fibre(x_prefix, w, fuel)` semidecides, from a name prefix of `x`,
/// whether `x` has some name extending `w`; it must be monotone.
#[derive(Clone)]
pub struct FibreOvertRep {
    pub space: SpaceDescriptor,
    preimage: Arc<PreimageFn>,
    fibre: Arc<FibreFn>,
}

impl fmt::Debug for FibreOvertRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FibreOvertRep({:?})", self.space)
    }
}

impl FibreOvertRep {
    pub fn new(
        space: SpaceDescriptor,
        preimage: impl Fn(&Name) -> Name + Send + Sync + 'static,
        fibre: impl Fn(&[Nat], &[Nat], Fuel) -> bool + Send + Sync + 'static,
    ) -> Self {
        FibreOvertRep { space, preimage: Arc::new(preimage), fibre: Arc::new(fibre) }
    }

    /// Some name of the point, computed from a given one.
    pub fn preimage(&self, x: &Name) -> Name {
        (self.preimage)(x)
    }

    pub fn fibre_meets(&self, x: &Name, w: &[Nat]) -> Observation {
        let (fibre, x, w) = (self.fibre.clone(), x.clone(), w.to_vec());
        Observation::new(move |f| fibre(&x.prefix(f), &w, f))
    }

    pub(crate) fn fibre_at(&self, x_prefix: &[Nat], w: &[Nat], fuel: Fuel) -> bool {
        (self.fibre)(x_prefix, w, fuel)
    }

    /// The closure of the fibre of `x` as an overt subset of Baire space.
    pub fn fibre_overt(&self, x: &Name) -> OvertCode {
        let (rep, x) = (self.clone(), x.clone());
        OvertCode::new("fibre", move |u, fuel| {
            (0..dovetail_width(fuel)).any(|i| {
                let b = dovetail_budget(i, fuel);
                let w = decode_word(i as Nat);
                u.accepts_prefix(&w, b) && rep.fibre_at(&x.prefix(b), &w, b)
            })
        })
    }

    /// ℕ with `δ(p) = p(0)`.
    pub fn nat() -> Self {
        FibreOvertRep::new(
            SpaceDescriptor::nat(),
            |x| {
                let x = x.clone();
                Name::from_producer(move |_, f| x.at(0, f))
            },
            |xp, w, _| match (w.first(), xp.first()) {
                (None, _) => true,
                (Some(a), Some(b)) => a == b,
                (Some(_), None) => false,
            },
        )
    }

    /// ℕ/R, where `x` has a name extending `w` iff `w(0) R x(0)`.
    pub fn ceer_quotient(pres: &CeerPresentation) -> Self {
        let p2 = pres.clone();
        FibreOvertRep::new(
            SpaceDescriptor::ceer_quotient(pres.clone()),
            |x| {
                let x = x.clone();
                Name::from_producer(move |_, f| x.at(0, f))
            },
            move |xp, w, f| match (w.first(), xp.first()) {
                (None, _) => true,
                (Some(&a), Some(&b)) => saturate(&p2, f).same(a, b),
                (Some(_), None) => false,
            },
        )
    }

    /// ℕ × 𝕊 with interleaved names.
    pub fn nat_times_sierpinski() -> Self {
        FibreOvertRep::new(
            SpaceDescriptor::product(SpaceDescriptor::nat(), SpaceDescriptor::sierpinski()),
            |x| x.clone(),
            |xp, w, _| {
                let (wl, wr) = split_interleaved(w);
                let (xl, xr) = split_interleaved(xp);
                let head_ok = match (wl.first(), xl.first()) {
                    (None, _) => true,
                    (Some(a), Some(b)) => a == b,
                    (Some(_), None) => false,
                };
                let flag_ok = !wr.iter().any(|&s| s != 0) || xr.iter().any(|&s| s != 0);
                head_ok && flag_ok
            },
        )
    }
}

/// Extends an open `V` of a name-subspace `X ⊆ Y` to an open `U` of `Y`
/// with `U ∩ X = V`: `y ∈ U` iff some word accepted by `V` extends to a
/// name of `y`, found by dovetailing over all words.
pub fn extend_open(y: &FibreOvertRep, v: &OpenSetCode) -> OpenSetCode {
    let (rep, v) = (y.clone(), v.clone());
    OpenSetCode::from_predicate("extend-open", vec![], move |yp, fuel| {
        (0..dovetail_width(fuel)).any(|i| {
            let b = dovetail_budget(i, fuel);
            let w = decode_word(i as Nat);
            v.accepts_prefix(&w, b) && rep.fibre_at(yp, &w, b)
        })
    })
}

/// Index of the basic open `{n}` in [`EffectiveBasis::nat`].
pub fn nat_singleton_index(n: Nat) -> Nat {
    n + 1
}

/// The word-coded index of the cylinder `[w]`.
pub fn cylinder_index(w: &[Nat]) -> Option<Nat> {
    crate::kernel::encode_word(w)
}

/// γ-position at which the embedding checks basic open `n` with fuel `s`.
pub fn embedding_position(n: Nat, s: Fuel) -> usize {
    pair(n, s) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::interleave;

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_decode(&Name::from_word(vec![1, 0, 3], 0), 10), BTreeSet::from([0, 2]));
        assert!(gamma_decode(&Name::constant(0), 100).is_empty());
        assert_eq!(gamma_decode(&gamma_encode(&[1, 4, 9]), 100), BTreeSet::from([1, 4, 9]));
    }

    #[test]
    fn baire_basis_examples() {
        let any = baire_basis(0);
        assert!(any.member(&Name::constant(5)).confirmed_by(1));
        let i = cylinder_index(&[3, 1]).unwrap();
        assert!(baire_basis(i).member(&Name::from_word(vec![3, 1, 7], 0)).confirmed_by(10));
        assert!(!baire_basis(i).member(&Name::from_word(vec![3, 2], 0)).confirmed_by(10_000));
    }

    #[test]
    fn nat_embedding_lists_whole_space_and_singleton() {
        let b = EffectiveBasis::nat();
        let e = embed_into_opens_of_nat(&b, &Name::constant(5));
        let listed = gamma_decode(&e, embedding_position(40, 40) as Fuel);
        assert!(listed.contains(&0) && listed.contains(&nat_singleton_index(5)));
        assert_eq!(listed.len(), 2);
    }

    #[test]
    fn decomposition_reproduces_open() {
        let b = EffectiveBasis::nat();
        let u = OpenSetCode::from_predicate("small", vec![], |w, _| w.first().is_some_and(|&n| n < 3));
        let listed = gamma_decode(&b.decompose(&u), 2000);
        assert_eq!(listed, BTreeSet::from([1, 2, 3]));
        let baire = EffectiveBasis::baire();
        let cyl = baire_basis(cylinder_index(&[2]).unwrap());
        let got = gamma_decode(&baire.decompose(&cyl), 3000);
        assert!(got.iter().all(|&i| decode_word(i).first() == Some(&2)));
        assert!(got.contains(&cylinder_index(&[2]).unwrap()));
    }

    #[test]
    fn sierpinski_and_bottom_bases() {
        let s = EffectiveBasis::sierpinski();
        let top = s.basis_at(1);
        let listed = gamma_decode(&s.decompose(&top), 50);
        assert_eq!(listed, BTreeSet::from([1]));
        let ind = EffectiveBasis::adjoin_bottom();
        assert_eq!(gamma_decode(&ind.decompose(&OpenSetCode::everything()), 10), BTreeSet::from([0]));
        assert!(gamma_decode(&ind.decompose(&OpenSetCode::nothing()), 100).is_empty());
    }

    #[test]
    fn extend_open_trivial_cases() {
        let rep = FibreOvertRep::nat();
        let none = extend_open(&rep, &OpenSetCode::nothing());
        let all = extend_open(&rep, &OpenSetCode::everything());
        for n in 0..10 {
            assert!(!none.member(&Name::constant(n)).confirmed_by(2000));
            assert!(all.member(&Name::constant(n)).confirmed_by(2000));
        }
    }

    #[test]
    fn fibre_overt_of_nat_point() {
        let rep = FibreOvertRep::nat();
        let o = rep.fibre_overt(&Name::constant(2));
        assert!(o.meets(&baire_basis(cylinder_index(&[2, 9]).unwrap())).confirmed_by(20_000));
        assert!(!o.meets(&baire_basis(cylinder_index(&[3]).unwrap())).confirmed_by(5000));
        let prod = FibreOvertRep::nat_times_sierpinski();
        let bot = interleave(&Name::constant(4), &Name::constant(0));
        assert!(!prod.fibre_meets(&bot, &[4, 1]).confirmed_by(100));
        assert!(prod.fibre_meets(&bot, &[4, 0]).confirmed_by(100));
    }
}
