//! Space descriptors and points.
//!
//! A descriptor carries a tag and a meta-level denotation used only by
//! tests and reports to decide whether two names denote the same point.
//! Realizers never consult it.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::ceers::{saturate, CeerPresentation};
use crate::counterexamples::nprime::BbTable;
use crate::counterexamples::oracle::OracleSet;
use crate::ideals::RelationPresentation;
use crate::kernel::name::{project, Side};
use crate::kernel::{Fuel, Name, Nat};

/// The point a name denotes, as far as a finite horizon can tell.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Denotation {
    Nat(Nat),
    Top,
    Bottom,
    Pair(Box<Denotation>, Box<Denotation>),
    Label(String),
}

impl fmt::Display for Denotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Denotation::Nat(n) => write!(f, "{n}"),
            Denotation::Top => f.write_str("⊤"),
            Denotation::Bottom => f.write_str("⊥"),
            Denotation::Pair(a, b) => write!(f, "({a}, {b})"),
            Denotation::Label(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug)]
pub enum SpaceTag {
    Nat,
    Sierpinski,
    Product(Box<SpaceDescriptor>, Box<SpaceDescriptor>),
    CeerQuotient(CeerPresentation),
    IdealSpace(RelationPresentation),
    SA(OracleSet),
    DA(OracleSet),
    DAPartition(OracleSet, Vec<OracleSet>),
    HA(OracleSet),
    PN(OracleSet),
    NPrime(BbTable),
    HaltingComplement,
    AdjoinBottom(Box<SpaceDescriptor>),
    Custom(String),
}

type DenoteFn = dyn Fn(&Name, Fuel) -> Option<Denotation> + Send + Sync;

#[derive(Clone)]
pub struct SpaceDescriptor {
    tag: SpaceTag,
    denote: Arc<DenoteFn>,
}

impl fmt::Debug for SpaceDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Space({:?})", self.tag)
    }
}

impl SpaceDescriptor {
    /// `denote(name, horizon)` reads at most the name's prefix at `horizon`
    /// and returns `None` when that is not enough to tell.
    pub fn new(tag: SpaceTag, denote: impl Fn(&Name, Fuel) -> Option<Denotation> + Send + Sync + 'static) -> Self {
        SpaceDescriptor { tag, denote: Arc::new(denote) }
    }

    pub fn custom(label: &str, denote: impl Fn(&Name, Fuel) -> Option<Denotation> + Send + Sync + 'static) -> Self {
        SpaceDescriptor::new(SpaceTag::Custom(label.to_string()), denote)
    }

    pub fn tag(&self) -> &SpaceTag {
        &self.tag
    }

    pub fn denote(&self, name: &Name, horizon: Fuel) -> Option<Denotation> {
        (self.denote)(name, horizon)
    }

    /// Meta-equality at a horizon; `None` when either side is undetermined.
    pub fn meta_equal(&self, p: &Name, q: &Name, horizon: Fuel) -> Option<bool> {
        Some(self.denote(p, horizon)? == self.denote(q, horizon)?)
    }

    /// ℕ with `δ(p) = p(0)`.
    pub fn nat() -> Self {
        SpaceDescriptor::new(SpaceTag::Nat, |p, h| p.at(0, h).map(Denotation::Nat))
    }

    /// 𝕊 with `δ(p) = ⊤` iff `p` has a nonzero symbol. Reading only a finite
    /// horizon, `⊥` here means "no nonzero symbol yet".
    pub fn sierpinski() -> Self {
        SpaceDescriptor::new(SpaceTag::Sierpinski, |p, h| {
            Some(if p.prefix(h).iter().any(|&s| s != 0) { Denotation::Top } else { Denotation::Bottom })
        })
    }

    /// Product with interleaved names.
    pub fn product(x: SpaceDescriptor, y: SpaceDescriptor) -> Self {
        let (dx, dy) = (x.clone(), y.clone());
        SpaceDescriptor::new(SpaceTag::Product(Box::new(x), Box::new(y)), move |r, h| {
            let a = dx.denote(&project(r, Side::Left), h)?;
            let b = dy.denote(&project(r, Side::Right), h)?;
            Some(Denotation::Pair(Box::new(a), Box::new(b)))
        })
    }

    /// ℕ/R, named by any representative in position 0. Points denote the
    /// least representative known at the horizon.
    pub fn ceer_quotient(pres: CeerPresentation) -> Self {
        let p2 = pres.clone();
        SpaceDescriptor::new(SpaceTag::CeerQuotient(pres), move |p, h| {
            let n = p.at(0, h)?;
            Some(Denotation::Nat(saturate(&p2, h).canonical(n)))
        })
    }

    /// `X ⊎ {⊥}` named by `⟨p, q⟩`: `⊥` if `p` has infinitely many 1s,
    /// otherwise the point named by `q`. At a horizon, a 1 in the last
    /// quarter of the visible part of `p` is read as infinitely many.
    pub fn adjoin_bottom(x: SpaceDescriptor) -> Self {
        let inner = x.clone();
        SpaceDescriptor::new(SpaceTag::AdjoinBottom(Box::new(x)), move |r, h| {
            let p = project(r, Side::Left).prefix(h / 2);
            let tail = &p[p.len() - p.len() / 4..];
            if tail.contains(&1) {
                Some(Denotation::Bottom)
            } else {
                inner.denote(&project(r, Side::Right), h)
            }
        })
    }

    /// Canonical name of `n` in ℕ and in quotients of ℕ.
    pub fn nat_name(n: Nat) -> Name {
        Name::constant(n)
    }

    /// Canonical names of ⊤ and ⊥ in 𝕊.
    pub fn sierpinski_name(top: bool) -> Name {
        if top {
            Name::constant(1)
        } else {
            Name::constant(0)
        }
    }

    /// The canonical name of ⊥ in an adjoined-bottom space.
    pub fn bottom_name() -> Name {
        crate::kernel::interleave(&Name::constant(1), &Name::constant(0))
    }

    /// Embeds a name of `X` into `X ⊎ {⊥}` unchanged in meaning.
    pub fn lift_name(q: &Name) -> Name {
        crate::kernel::interleave(&Name::constant(0), q)
    }
}

/// A name together with the space it names a point of.
#[derive(Clone, Debug)]
pub struct Point {
    pub space: SpaceDescriptor,
    pub name: Name,
}

impl Point {
    pub fn new(space: SpaceDescriptor, name: Name) -> Self {
        Point { space, name }
    }

    pub fn denote(&self, horizon: Fuel) -> Option<Denotation> {
        self.space.denote(&self.name, horizon)
    }
}
