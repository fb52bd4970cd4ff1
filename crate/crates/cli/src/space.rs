//! `repspace space …`

use std::path::PathBuf;

use clap::{Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use repspace::ceers::{ceer_discreteness, saturate};
use repspace::counterexamples::ha::ha_guess_witness_sequence;
use repspace::counterexamples::{
    da_discreteness, da_name, ha_hausdorff, pn_name, pn_space, sa_name, sa_witnesses, DaPoint, Enumeration, HaSpace,
    OracleSet,
};
use repspace::kernel::{Fuel, Name, Nat, Observation};
use repspace::spaces::basis::{extend_open, FibreOvertRep};
use repspace::spaces::separation::{
    check_hausdorff_witness_sequence, nat_samples, nat_singleton_witness_sequence, SamplePair,
};
use repspace::spaces::{
    canonical_enumeration, grid_report, separate_by_balls, DiscretenessWitness, DyadicBall, DyadicPoint,
    HausdorffWitness, OpenSetCode,
};

use crate::inputs::{self, CeerSource};
use crate::report::{Outcome, ReportBuilder};
use crate::{CliError, CliResult, Ctx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Nat,
    Ceer,
    Sa,
    Da,
    Pn,
    Ha,
}

#[derive(Debug, Subcommand)]
pub enum SpaceCmd {
    /// Check a discreteness witness on sampled name pairs.
    Discrete {
        #[arg(long, value_enum)]
        space: SpaceKind,
        #[command(flatten)]
        source: CeerSource,
        /// Oracle file for A (default: the even numbers).
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        bound: Nat,
    },
    /// Check a Hausdorff witness on sampled name pairs.
    Hausdorff {
        #[arg(long, value_enum)]
        space: SpaceKind,
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        bound: Nat,
    },
    /// Check a sequence of separating open pairs for coverage and disjointness.
    WitnessSeq {
        #[arg(long, value_enum)]
        space: SpaceKind,
        #[arg(long)]
        oracle: Option<PathBuf>,
        /// For `ha`: the guessed members of A, e.g. "0,2,4".
        #[arg(long)]
        guess: Option<String>,
        #[arg(long, default_value_t = 20)]
        bound: Nat,
    },
    /// Extend the open "first symbol in SET" of names to the quotient ℕ/R.
    ExtendOpen {
        #[command(flatten)]
        source: CeerSource,
        /// Comma-separated naturals.
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 20)]
        bound: Nat,
    },
    /// Separate two disjoint closed boxes by opens built from balls.
    SeparateBalls {
        /// Instance 0..=9.
        #[arg(long, default_value_t = 0)]
        instance: u64,
    },
}

pub fn run(ctx: &Ctx, cmd: &SpaceCmd) -> CliResult<ReportBuilder> {
    match cmd {
        SpaceCmd::Discrete { space, source, oracle, bound } => discrete(ctx, *space, source, oracle.as_ref(), *bound),
        SpaceCmd::Hausdorff { space, oracle, bound } => hausdorff(ctx, *space, oracle.as_ref(), *bound),
        SpaceCmd::WitnessSeq { space, oracle, guess, bound } => {
            witness_seq(ctx, *space, oracle.as_ref(), guess.as_deref(), *bound)
        }
        SpaceCmd::ExtendOpen { source, set, bound } => extend(ctx, source, set, *bound),
        SpaceCmd::SeparateBalls { instance } => balls(ctx, *instance),
    }
}

pub(crate) fn load_oracle(path: Option<&PathBuf>) -> CliResult<(OracleSet, Value)> {
    inputs::oracle(path, ("evens", OracleSet::evens()))
}

fn pair(label: String, x: Name, y: Name, equal: bool) -> SamplePair {
    SamplePair { label, x, y, equal }
}

/// Distinct and equal pairs of names of `(n, [n ∈ A])`, with flag delays.
pub(crate) fn sa_samples(a: &OracleSet, bound: Nat) -> Vec<SamplePair> {
    let name = |n: Nat, delay: usize| sa_name(n, a.contains(n).then_some(delay));
    let mut out = Vec::new();
    for n in 0..=bound {
        out.push(pair(format!("({n}) delays 0/5"), name(n, 0), name(n, 5), true));
        out.push(pair(format!("({n}, {})", n + 1), name(n, 1), name(n + 1, 0), false));
    }
    out
}

/// Names of `a` and `b` with a few leading 1s turned off.
fn da_samples(a: &OracleSet, bound: Nat) -> Vec<SamplePair> {
    let ones = |p: DaPoint, k: usize| -> Vec<Nat> {
        (0..200).filter(|&n| a.contains(n) == (p == DaPoint::A)).take(k).collect()
    };
    let mut out = Vec::new();
    for i in 0..=bound as usize {
        for p in [DaPoint::A, DaPoint::B] {
            let label = format!("{p:?} flips {i}/{}", i / 2);
            out.push(pair(label, da_name(a, p, &ones(p, i)), da_name(a, p, &ones(p, i / 2)), true));
        }
        out.push(pair(
            format!("A/B flips {i}"),
            da_name(a, DaPoint::A, &ones(DaPoint::A, i)),
            da_name(a, DaPoint::B, &[]),
            false,
        ));
    }
    out
}

pub(crate) fn pn_samples(p: &OracleSet, bound: Nat) -> Vec<SamplePair> {
    let mut out = Vec::new();
    for n in 0..=bound {
        out.push(pair(format!("({n}, {n})"), pn_name(n, p), pn_name(n, p), true));
        out.push(pair(format!("({n}, {})", n + 1), pn_name(n, p), pn_name(n + 1, p), false));
    }
    out
}

/// Distinct-name pairs of ℕ/R, with equality as seen at `fuel`.
fn ceer_samples(source: &CeerSource, bound: Nat, fuel: Fuel) -> CliResult<(Vec<SamplePair>, Value)> {
    let (pres, src) = source.load()?;
    let st = saturate(&pres, fuel);
    let mut out = Vec::new();
    for n in 0..=bound {
        for m in n..=bound {
            out.push(pair(format!("({n}, {m})"), Name::constant(n), Name::constant(m), st.same(n, m)));
        }
    }
    Ok((out, src))
}

#[derive(Serialize)]
struct Row {
    label: String,
    equal: bool,
    confirmed_at: Option<Fuel>,
}

/// Runs `test` on every sample; `want_equal` says which pairs it must confirm.
pub(crate) fn sampled_check(
    r: &mut ReportBuilder,
    samples: &[SamplePair],
    test: impl Fn(&Name, &Name) -> Observation,
    want_equal: bool,
    fuel: Fuel,
) -> Value {
    let rows: Vec<Row> = samples
        .iter()
        .map(|s| Row { label: s.label.clone(), equal: s.equal, confirmed_at: test(&s.x, &s.y).observe(fuel).step() })
        .collect();
    let wrong: Vec<&Row> = rows.iter().filter(|row| row.equal != want_equal && row.confirmed_at.is_some()).collect();
    let missing: Vec<&str> = rows
        .iter()
        .filter(|row| row.equal == want_equal && row.confirmed_at.is_none())
        .map(|row| row.label.as_str())
        .collect();
    let (yes, no) = if want_equal { ("equal", "distinct") } else { ("distinct", "equal") };
    r.expect(
        format!("no {no} pair confirmed"),
        wrong.is_empty(),
        json!(wrong.iter().map(|w| &w.label).collect::<Vec<_>>()),
    );
    let outcome = if missing.is_empty() { Outcome::Verified } else { Outcome::Inconclusive };
    r.check(format!("every {yes} pair confirmed"), outcome, json!({ "unconfirmed": missing }));
    r.fuel(fuel);
    json!(rows)
}

fn discrete(
    ctx: &Ctx,
    space: SpaceKind,
    source: &CeerSource,
    oracle: Option<&PathBuf>,
    bound: Nat,
) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(10_000);
    let (a, oracle_rec) = load_oracle(oracle)?;
    let (witness, samples, src): (DiscretenessWitness, Vec<SamplePair>, Value) = match space {
        SpaceKind::Nat => (
            DiscretenessWitness::from_pair_test(
                "nat-equal",
                |l, r, _| matches!((l.first(), r.first()), (Some(x), Some(y)) if x == y),
            ),
            nat_samples(bound),
            Value::Null,
        ),
        SpaceKind::Ceer => {
            let (pres, _) = source.load()?;
            let (samples, src) = ceer_samples(source, bound, fuel)?;
            (ceer_discreteness(&pres), samples, src)
        }
        SpaceKind::Sa => (sa_witnesses(&a).0, sa_samples(&a, bound), oracle_rec),
        SpaceKind::Da => (da_discreteness(&a), da_samples(&a, bound), oracle_rec),
        SpaceKind::Pn => (pn_space(&a).discreteness, pn_samples(&a, bound), oracle_rec),
        SpaceKind::Ha => return Err(CliError::Usage("ha has no discreteness witness; see `space hausdorff`".into())),
    };
    let config = ctx.config(10_000, json!({ "space": space, "bound": bound, "input": src }));
    let mut r = ReportBuilder::new("space-discrete", config);
    let rows = sampled_check(&mut r, &samples, |x, y| witness.equal(x, y), true, fuel);
    r.data(json!({ "rows": rows }));
    Ok(r)
}

fn hausdorff(ctx: &Ctx, space: SpaceKind, oracle: Option<&PathBuf>, bound: Nat) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(10_000);
    let (a, oracle_rec) = load_oracle(oracle)?;
    let (witness, samples, src): (HausdorffWitness, Vec<SamplePair>, Value) = match space {
        SpaceKind::Nat => (
            HausdorffWitness::from_pair_test(
                "nat-distinct",
                |l, r, _| matches!((l.first(), r.first()), (Some(x), Some(y)) if x != y),
            ),
            nat_samples(bound),
            Value::Null,
        ),
        SpaceKind::Sa => (sa_witnesses(&a).1, sa_samples(&a, bound), oracle_rec),
        SpaceKind::Pn => (pn_space(&a).hausdorff, pn_samples(&a, bound), oracle_rec),
        SpaceKind::Ha => {
            let s = HaSpace::new(&a)?;
            let n = bound as usize + 1;
            (ha_hausdorff(&s), s.sample_pairs(n, n), oracle_rec)
        }
        SpaceKind::Ceer | SpaceKind::Da => {
            return Err(CliError::Usage(format!("{space:?} has no bundled Hausdorff witness; see `example da diag`")))
        }
    };
    let config = ctx.config(10_000, json!({ "space": space, "bound": bound, "input": src }));
    let mut r = ReportBuilder::new("space-hausdorff", config);
    let rows = sampled_check(&mut r, &samples, |x, y| witness.distinct(x, y), false, fuel);
    r.data(json!({ "rows": rows }));
    Ok(r)
}

pub(crate) fn witness_seq(
    ctx: &Ctx,
    space: SpaceKind,
    oracle: Option<&PathBuf>,
    guess: Option<&str>,
    bound: Nat,
) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(20_000);
    let (ws, samples, input) = match space {
        SpaceKind::Nat => (nat_singleton_witness_sequence(), nat_samples(bound), Value::Null),
        SpaceKind::Ha => {
            let (a, rec) = load_oracle(oracle)?;
            let s = HaSpace::new(&a)?;
            let guessed = match guess {
                Some(g) => inputs::nat_list(g)?,
                None => a.members_below(6),
            };
            let n = bound as usize + 1;
            let input = json!({ "oracle": rec, "guess": guessed });
            (ha_guess_witness_sequence(&Enumeration::of_finite(&guessed)), s.sample_pairs(n, n), input)
        }
        other => return Err(CliError::Usage(format!("no witness sequence for {other:?}; use nat or ha"))),
    };
    let config = ctx.config(20_000, json!({ "space": space, "bound": bound, "input": input }));
    let mut r = ReportBuilder::new("space-witness-seq", config);
    let report = check_hausdorff_witness_sequence(&ws, &samples, fuel);
    let violations: Vec<_> = report.rows.iter().filter(|row| row.equal && row.violation.is_some()).collect();
    let uncovered: Vec<_> = report.rows.iter().filter(|row| !row.equal && row.covered_by.is_none()).collect();
    r.expect("equal pairs never covered", violations.is_empty(), json!(violations.len()));
    r.expect("distinct pairs covered", uncovered.is_empty(), json!({ "failures": uncovered.len() }));
    for row in violations.iter().chain(&uncovered) {
        r.certificate(row);
    }
    r.data(&report).fuel(fuel);
    Ok(r)
}

fn extend(ctx: &Ctx, source: &CeerSource, set: &str, bound: Nat) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(20_000);
    let (pres, src) = source.load()?;
    let targets = inputs::nat_list(set)?;
    let config = ctx.config(20_000, json!({ "source": src, "set": targets, "bound": bound }));
    let mut r = ReportBuilder::new("space-extend-open", config);
    let t2 = targets.clone();
    let v = OpenSetCode::from_predicate("first-in-set", targets.clone(), move |w, _| {
        w.first().is_some_and(|x| t2.contains(x))
    });
    let u = extend_open(&FibreOvertRep::ceer_quotient(&pres), &v);
    let st = saturate(&pres, fuel);
    let mut rows = Vec::new();
    let (mut unsound, mut late) = (Vec::new(), Vec::new());
    for n in 0..=bound {
        let expected = targets.iter().any(|&t| st.same(n, t));
        let at = u.member(&Name::constant(n)).observe(fuel).step();
        if at.is_some() && !expected {
            unsound.push(n);
        }
        if at.is_none() && expected {
            late.push(n);
        }
        rows.push(json!({ "n": n, "class_meets_set": expected, "accepted_at": at }));
    }
    r.expect("accepted points have a class meeting the set", unsound.is_empty(), json!(unsound));
    let outcome = if late.is_empty() { Outcome::Verified } else { Outcome::Inconclusive };
    r.check("every class meeting the set accepted", outcome, json!({ "pending": late }));
    r.data(json!({ "rows": rows })).fuel(fuel);
    Ok(r)
}

/// Ten fixed instances of two disjoint closed boxes at precision 6, in
/// dimension 1 to 3.
pub fn ball_instance(k: u64) -> (usize, DyadicBall, DyadicBall) {
    let dim = 1 + (k % 3) as usize;
    let a = DyadicBall::new((0..dim as u64).map(|i| 12 + (k * 5 + i * 3) % 8).collect(), 4 + k % 3, 6);
    let b = DyadicBall::new((0..dim as u64).map(|i| 44 + (k * 7 + i) % 10).collect(), 3 + k % 4, 6);
    (dim, a, b)
}

/// Every `len / count`-th grid point of the box at its own precision.
fn stride_points(ball: &DyadicBall, count: usize) -> Vec<DyadicPoint> {
    let side = 2 * ball.radius + 1;
    let total = side.pow(ball.dim() as u32);
    let stride = (total / count as u64).max(1);
    (0..total)
        .step_by(stride as usize)
        .take(count)
        .map(|idx| {
            let mut rest = idx;
            let coords = ball
                .center
                .iter()
                .map(|&c| {
                    let off = rest % side;
                    rest /= side;
                    c - ball.radius + off
                })
                .collect();
            DyadicPoint::new(coords, ball.precision).expect("box inside the unit cube")
        })
        .collect()
}

fn balls(ctx: &Ctx, instance: u64) -> CliResult<ReportBuilder> {
    if instance > 9 {
        return Err(CliError::Usage(format!("instance {instance} out of range 0..=9")));
    }
    let fuel = ctx.fuel_or(100_000);
    let (dim, a, b) = ball_instance(instance);
    let config = ctx.config(100_000, json!({ "instance": instance, "depth": 4, "grid": 8, "samples": 50 }));
    let mut r = ReportBuilder::new("space-separate-balls", config);
    let missing_a = canonical_enumeration(dim, std::slice::from_ref(&a), 4);
    let missing_b = canonical_enumeration(dim, std::slice::from_ref(&b), 4);
    let (u, v) = separate_by_balls(dim, &missing_a, &missing_b, fuel)?;
    let grid = grid_report(&u, &v, 8)?;
    r.expect("U and V disjoint on the 2^-8 grid", grid.in_both == 0, json!(&grid));
    let covered = |pts: &[DyadicPoint], region: &repspace::spaces::BallRegion| -> CliResult<Vec<Vec<u64>>> {
        let mut missed = Vec::new();
        for p in pts {
            if !region.contains(p)? {
                missed.push(p.coords.clone());
            }
        }
        Ok(missed)
    };
    let (pa, pb) = (stride_points(&a, 50), stride_points(&b, 50));
    let (ma, mb) = (covered(&pa, &u)?, covered(&pb, &v)?);
    r.expect("A sample inside U", ma.is_empty(), json!({ "points": pa.len(), "missed": ma }));
    r.expect("B sample inside V", mb.is_empty(), json!({ "points": pb.len(), "missed": mb }));
    r.data(json!({
        "dim": dim,
        "a": { "center": a.center, "radius": a.radius },
        "b": { "center": b.center, "radius": b.radius },
        "balls_missing_a": missing_a.len(),
        "balls_missing_b": missing_b.len(),
    }));
    r.fuel(fuel.min((missing_a.len() + missing_b.len()) as Fuel));
    Ok(r)
}
