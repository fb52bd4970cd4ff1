//! `repspace example …`

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::Subcommand;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use repspace::counterexamples::da::{
    da_partition_variant, partition_samples, replay_da_certificate, DaDiagonalization,
};
use repspace::counterexamples::halting::replay_injection_certificate;
use repspace::counterexamples::sa::SaNormRealizer;
use repspace::counterexamples::{
    da_diagonalize, da_discreteness, dce_to_embedding, delta02_subspace_code, ha_hausdorff, ha_medvedev,
    ha_overt_to_cototal, ha_reference_overt, injection_diagonalizer, norm_to_dce, pn_space, sa_iso_when_ce,
    sa_witnesses, DaCertificate, DiagonalizerFailure, Enumeration, HaSpace, NPrime, OracleSet, StageLog, StageTable,
};
use repspace::kernel::{Fuel, GoedelIndex, Nat};
use repspace::spaces::{Denotation, OpenSetCode};

use crate::inputs;
use crate::report::{Outcome, ReportBuilder};
use crate::space::{load_oracle, pn_samples, sa_samples, sampled_check, witness_seq, SpaceKind};
use crate::{CliError, CliResult, Ctx};

#[derive(Debug, Subcommand)]
pub enum ExampleCmd {
    /// The subspace S_A of ℕ × 𝕊.
    Sa {
        #[command(subcommand)]
        cmd: SaCmd,
    },
    /// The discrete space D_A with no computable Hausdorff witness.
    Da {
        #[command(subcommand)]
        cmd: DaCmd,
    },
    /// The Hausdorff space H_A.
    Ha {
        #[command(subcommand)]
        cmd: HaCmd,
    },
    /// ℕ with names 0ⁿ 1 p.
    Pn {
        /// Oracle file for p (default: the even numbers).
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        bound: Nat,
    },
    /// ℕ′, decoded through a busy-beaver table.
    Nprime {
        /// A `bb v1` table (default: computed for cutoff 3).
        #[arg(long)]
        bb: Option<PathBuf>,
        #[command(subcommand)]
        cmd: NprimeCmd,
    },
    /// Diagonalize a toy program posing as an injection into ℕ.
    DiagInj {
        #[arg(long)]
        candidate: Nat,
    },
    /// Same as `da diag`.
    DiagDa {
        #[arg(long)]
        witnesses: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum SaCmd {
    /// Discreteness and Hausdorff witnesses through the first coordinate.
    Witness {
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        bound: Nat,
    },
    /// ℕ ≅ S_A for an enumerated A.
    Iso {
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        bound: Nat,
    },
    /// Recover the d.c.e. approximation from the reference normality realizer.
    Norm {
        #[arg(long)]
        dce: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        bound: Nat,
    },
    /// Embed S_A into the reals for a d.c.e. A, at `--precision`.
    Embed {
        #[arg(long)]
        dce: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        bound: Nat,
    },
    /// S_A as a Π⁰₂ subspace for a limit-computable A.
    Pi02 {
        /// A `dce v1` or `lim v1` table.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        bound: Nat,
    },
}

#[derive(Debug, Subcommand)]
pub enum DaCmd {
    /// Build A against candidate Hausdorff witnesses.
    Diag {
        /// An `hwit v1` candidate (default: the ten bundled candidates).
        #[arg(long)]
        witnesses: Option<PathBuf>,
    },
    /// The variant with ℕ ∖ A split into residue blocks.
    Partition {
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        blocks: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum HaCmd {
    /// The Hausdorff realizer on sampled pairs.
    Hausdorff {
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Enumerations of A ↔ realizers of {b}, for a finite A.
    Medvedev {
        /// Comma-separated members of A.
        #[arg(long, default_value = "2,5,11")]
        members: String,
        #[arg(long, default_value_t = 100)]
        bound: Nat,
    },
    /// Enumerate A from the overt realizer and an enumeration of ℕ ∖ A.
    Cototal {
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        bound: Nat,
    },
    /// A witness sequence built from a finite guess at A.
    WitnessSeq {
        #[arg(long)]
        oracle: Option<PathBuf>,
        #[arg(long)]
        guess: Option<String>,
        #[arg(long, default_value_t = 20)]
        bound: Nat,
    },
}

#[derive(Debug, Subcommand)]
pub enum NprimeCmd {
    /// Decode canonical names for every n up to the cutoff.
    Roundtrip,
    /// Read an upper bound for BB(m) off the canonical realizer of {0}.
    Extract { m: Nat },
}

/// The default d.c.e. table: columns with zero, one and two mind changes.
pub fn default_dce() -> StageTable {
    StageTable::dce(&[
        (2, 1, true),
        (3, 4, true),
        (8, 4, false),
        (1, 6, true),
        (5, 9, true),
        (6, 9, false),
        (4, 12, true),
    ])
    .expect("valid d.c.e. table")
}

fn dce_or_default(path: Option<&PathBuf>) -> CliResult<(StageTable, Value)> {
    match path {
        Some(p) => inputs::stage_table(p),
        None => Ok((default_dce(), json!("default"))),
    }
}

pub fn run(ctx: &Ctx, cmd: &ExampleCmd) -> CliResult<ReportBuilder> {
    match cmd {
        ExampleCmd::Sa { cmd } => sa(ctx, cmd),
        ExampleCmd::Da { cmd: DaCmd::Diag { witnesses } } | ExampleCmd::DiagDa { witnesses } => {
            da_diag(ctx, witnesses.as_ref())
        }
        ExampleCmd::Da { cmd: DaCmd::Partition { oracle, blocks } } => da_partition(ctx, oracle.as_ref(), *blocks),
        ExampleCmd::Ha { cmd } => ha(ctx, cmd),
        ExampleCmd::Pn { oracle, bound } => pn(ctx, oracle.as_ref(), *bound),
        ExampleCmd::Nprime { bb, cmd } => nprime(ctx, bb.as_ref(), cmd),
        ExampleCmd::DiagInj { candidate } => diag_inj(ctx, *candidate),
    }
}

fn sa(ctx: &Ctx, cmd: &SaCmd) -> CliResult<ReportBuilder> {
    match cmd {
        SaCmd::Witness { oracle, bound } => {
            let fuel = ctx.fuel_or(10_000);
            let (a, rec) = load_oracle(oracle.as_ref())?;
            let mut r = ReportBuilder::new("sa-witness", ctx.config(10_000, json!({ "oracle": rec, "bound": bound })));
            let (d, h) = sa_witnesses(&a);
            let samples = sa_samples(&a, *bound);
            let hausdorff_rows = sampled_check(&mut r, &samples, |x, y| h.distinct(x, y), false, fuel);
            let discrete_rows = sampled_check(&mut r, &samples, |x, y| d.equal(x, y), true, fuel);
            r.data(json!({ "hausdorff": hausdorff_rows, "discrete": discrete_rows }));
            Ok(r)
        }
        SaCmd::Iso { oracle, bound } => {
            let fuel = ctx.fuel_or(1000);
            let (a, rec) = load_oracle(oracle.as_ref())?;
            let mut r = ReportBuilder::new("sa-iso", ctx.config(1000, json!({ "oracle": rec, "bound": bound })));
            let iso = sa_iso_when_ce(&Enumeration::listing(&a));
            let mut bad = Vec::new();
            let mut rows = Vec::new();
            for n in 0..=*bound {
                let x = iso.forward(n);
                let back = iso.backward(&x).at(0, fuel);
                let flag_up = (0..fuel as usize / 2).any(|k| x.at(2 * k + 1, fuel) == Some(1));
                if back != Some(n) || flag_up != a.contains(n) {
                    bad.push(n);
                }
                rows.push(json!({ "n": n, "back": back, "flag": flag_up }));
            }
            r.expect(format!("backward(forward(n)) = n with the right flag, n <= {bound}"), bad.is_empty(), json!(bad));
            r.data(json!({ "rows": rows })).fuel(fuel);
            Ok(r)
        }
        SaCmd::Norm { dce, bound } => {
            let fuel = ctx.fuel_or(1000);
            let (table, rec) = dce_or_default(dce.as_ref())?;
            let mut r = ReportBuilder::new("sa-norm", ctx.config(1000, json!({ "dce": rec, "bound": bound })));
            let norm = SaNormRealizer::reference(&table);
            let mut bad = Vec::new();
            let mut by_flips = [0usize; 3];
            let mut rows = Vec::new();
            for n in 0..=*bound {
                let pr = norm_to_dce(&norm, n, fuel);
                if !pr.well_formed() || pr.final_bit() != table.limit_contains(n) {
                    bad.push(n);
                }
                by_flips[table.changes(n).len().min(2)] += 1;
                rows.push(json!({ "n": n, "flips": pr.flips }));
            }
            r.expect("proclamations reach the final membership", bad.is_empty(), json!(bad));
            r.expect("columns with 0, 1 and 2 changes all occur", by_flips.iter().all(|&c| c > 0), json!(by_flips));
            r.data(json!({ "rows": rows })).fuel(fuel);
            Ok(r)
        }
        SaCmd::Embed { dce, bound } => {
            let (table, rec) = dce_or_default(dce.as_ref())?;
            let config = ctx.config(0, json!({ "dce": rec, "bound": bound }));
            let mut r = ReportBuilder::new("sa-embed", config);
            let emb = dce_to_embedding(&table, ctx.precision)?;
            let mut bad = Vec::new();
            let mut phases = BTreeSet::new();
            let mut rows = Vec::new();
            for n in 0..=*bound {
                let member = table.limit_contains(n);
                let tr = emb.iota(n, member.then_some(0))?;
                phases.extend(tr.phases.iter().copied());
                let back = tr.value().and_then(|x| emb.inverse(n, x));
                if !tr.refines(ctx.precision) || back != Some(member) {
                    bad.push(n);
                }
                rows.push(json!({ "n": n, "member": member, "value": tr.value(), "epsilon": tr.epsilon, "phases": tr.phases }));
            }
            r.expect(format!("inverse(iota(n)) = n at 2^-{}", ctx.precision), bad.is_empty(), json!(bad));
            r.expect("phases 1, 2 and 3 exercised", phases.len() == 3, json!(phases));
            r.data(json!({ "rows": rows }));
            Ok(r)
        }
        SaCmd::Pi02 { table, bound } => {
            let (table, rec) = dce_or_default(table.as_ref())?;
            let mut r = ReportBuilder::new("sa-pi02", ctx.config(0, json!({ "table": rec, "bound": bound })));
            let code = delta02_subspace_code(&table);
            let mut bad = Vec::new();
            for n in 0..=*bound {
                for top in [false, true] {
                    if code.contains(n, top) != (top == table.limit_contains(n)) {
                        bad.push(json!({ "n": n, "top": top }));
                    }
                }
            }
            r.expect("(n, flag) satisfies every clause iff flag = [n in A]", bad.is_empty(), json!(bad));
            Ok(r)
        }
    }
}

/// What `example da diag` records, enough to replay its certificates.
#[derive(Debug, Serialize, Deserialize)]
pub struct DaRecord {
    pub a_prefix: String,
    pub boundaries: Vec<usize>,
    pub stage_counts: Vec<(usize, usize)>,
}

pub fn da_run_from_record(rec: &DaRecord) -> DaDiagonalization {
    DaDiagonalization {
        a_prefix: rec.a_prefix.chars().map(|c| c == '1').collect(),
        boundaries: rec.boundaries.clone(),
        certificates: Vec::new(),
        log: StageLog::new(),
    }
}

fn da_diag(ctx: &Ctx, witnesses: Option<&PathBuf>) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(10_000);
    let (cands, rec) = inputs::candidates(witnesses)?;
    let mut r = ReportBuilder::new("diag-da", ctx.config(10_000, json!({ "witnesses": rec, "spec": witnesses })));
    let run = da_diagonalize(&cands, fuel);
    let mut replayed = Vec::new();
    for (c, cert) in cands.iter().zip(&run.certificates) {
        let ok = replay_da_certificate(&run, c, cert);
        let outcome = match cert {
            DaCertificate::Stalled { .. } => Outcome::Inconclusive,
            _ if ok => Outcome::Verified,
            _ => Outcome::Refuted,
        };
        replayed.push(json!({ "candidate": c.label, "outcome": outcome }));
        r.check(format!("candidate {} defeated", c.label), outcome, Value::Null);
        r.certificate(cert);
    }
    let counts = run.stage_counts();
    let mixed = counts.iter().all(|&(members, others)| members >= 1 && others >= 1);
    r.expect("every stage decides a member and a non-member", mixed, json!(counts));
    let record = DaRecord {
        a_prefix: run.a_prefix.iter().map(|&b| if b { '1' } else { '0' }).collect(),
        boundaries: run.boundaries.clone(),
        stage_counts: counts,
    };
    r.data(json!({ "run": record, "log": run.log.events() })).fuel(fuel);
    Ok(r)
}

fn da_partition(ctx: &Ctx, oracle: Option<&PathBuf>, blocks: u64) -> CliResult<ReportBuilder> {
    if blocks == 0 {
        return Err(CliError::Usage("--blocks must be at least 1".into()));
    }
    let fuel = ctx.fuel_or(1000);
    let (a, rec) = load_oracle(oracle)?;
    let mut r = ReportBuilder::new("da-partition", ctx.config(1000, json!({ "oracle": rec, "blocks": blocks })));
    let parts: Vec<OracleSet> = (0..blocks)
        .map(|i| {
            let a = a.clone();
            OracleSet::rule(format!("block {i} of {blocks}"), move |n| !a.contains(n) && (n / 2) % blocks == i)
        })
        .collect();
    let space = da_partition_variant(&a, parts.clone());
    let samples = partition_samples(&parts);
    let eq = da_discreteness(&a);
    let mut mislabelled = Vec::new();
    let mut merged = Vec::new();
    for (&i, names) in &samples {
        for x in names {
            if space.denote(x, fuel) != Some(Denotation::Label(format!("b{i}"))) {
                mislabelled.push(i);
            }
        }
        for (&j, others) in samples.range(i + 1..) {
            if eq.equal(&names[0], &others[0]).confirmed_by(fuel) {
                merged.push((i, j));
            }
        }
    }
    r.expect("sample names denote their block", mislabelled.is_empty(), json!(mislabelled));
    r.expect("different blocks never confirmed equal", merged.is_empty(), json!(merged));
    r.data(json!({ "blocks": samples.len() })).fuel(fuel);
    Ok(r)
}

fn ha(ctx: &Ctx, cmd: &HaCmd) -> CliResult<ReportBuilder> {
    match cmd {
        HaCmd::Hausdorff { oracle, samples } => {
            let fuel = ctx.fuel_or(100_000);
            let (a, rec) = load_oracle(oracle.as_ref())?;
            let s = HaSpace::new(&a)?;
            let mut r =
                ReportBuilder::new("ha-hausdorff", ctx.config(100_000, json!({ "oracle": rec, "samples": samples })));
            let h = ha_hausdorff(&s);
            let rows = sampled_check(&mut r, &s.sample_pairs(*samples, *samples), |x, y| h.distinct(x, y), false, fuel);
            r.data(json!({ "rows": rows }));
            Ok(r)
        }
        HaCmd::Medvedev { members, bound } => {
            let v = inputs::nat_list(members)?;
            let fuel = ctx.fuel_or(v.len() as u64 + 1);
            let config = ctx.config(v.len() as u64 + 1, json!({ "members": v, "bound": bound }));
            let mut r = ReportBuilder::new("ha-medvedev", config);
            let med = ha_medvedev(&OracleSet::finite(v.clone()))?;
            let got = med.round_trip(&Enumeration::of_finite(&v), *bound, fuel);
            let want: BTreeSet<Nat> = v.iter().copied().filter(|&n| n <= *bound).collect();
            r.expect(
                format!("round trip reproduces A on [0, {bound}]"),
                got == want,
                json!({ "got": got, "want": want }),
            );
            r.fuel(fuel);
            Ok(r)
        }
        HaCmd::Cototal { oracle, bound } => {
            let fuel = ctx.fuel_or(2000);
            let (a, rec) = load_oracle(oracle.as_ref())?;
            let s = HaSpace::new(&a)?;
            let mut r = ReportBuilder::new("ha-cototal", ctx.config(2000, json!({ "oracle": rec, "bound": bound })));
            let x = ha_overt_to_cototal(&s, &ha_reference_overt(&s), &Enumeration::listing(&a.complement()));
            let got = x.emitted_up_to(*bound, fuel);
            let want: BTreeSet<Nat> = a.members_below(*bound + 1).into_iter().collect();
            let outcome = if got == want {
                Outcome::Verified
            } else if got.is_subset(&want) {
                Outcome::Inconclusive
            } else {
                Outcome::Refuted
            };
            r.check(format!("emits exactly A on [0, {bound}]"), outcome, json!({ "got": got, "want": want }));
            r.fuel(fuel);
            Ok(r)
        }
        HaCmd::WitnessSeq { oracle, guess, bound } => {
            witness_seq(ctx, SpaceKind::Ha, oracle.as_ref(), guess.as_deref(), *bound)
        }
    }
}

fn pn(ctx: &Ctx, oracle: Option<&PathBuf>, bound: Nat) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(10_000);
    let (p, rec) = load_oracle(oracle)?;
    let mut r = ReportBuilder::new("pn", ctx.config(10_000, json!({ "oracle": rec, "bound": bound })));
    let s = pn_space(&p);
    let samples = pn_samples(&p, bound);
    let discrete_rows = sampled_check(&mut r, &samples, |x, y| s.discreteness.equal(x, y), true, fuel);
    let hausdorff_rows = sampled_check(&mut r, &samples, |x, y| s.hausdorff.distinct(x, y), false, fuel);
    let mut found = Vec::new();
    for target in 0..=bound {
        let u = OpenSetCode::from_predicate("leading-zeros", vec![target], move |w, _| {
            w.iter().position(|&b| b != 0) == Some(target as usize)
        });
        let hit = s.overt_probe(&u, fuel);
        if hit.map(|h| h.0) != Some(target) {
            found.push(json!({ "target": target, "hit": hit }));
        }
    }
    r.expect("overt search finds the point of each run-length open", found.is_empty(), json!(found));
    r.data(json!({ "discrete": discrete_rows, "hausdorff": hausdorff_rows }));
    Ok(r)
}

fn nprime(ctx: &Ctx, bb: Option<&PathBuf>, cmd: &NprimeCmd) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(100_000);
    let (table, rec) = inputs::bb_table(bb)?;
    let np = NPrime::new(table.clone());
    match cmd {
        NprimeCmd::Roundtrip => {
            let mut r = ReportBuilder::new("nprime-roundtrip", ctx.config(100_000, json!({ "bb": rec })));
            let bad: Vec<Nat> =
                (0..=table.cutoff as Nat).filter(|&n| np.decode(&np.encode(n), fuel).ok() != Some(n)).collect();
            r.expect("decode(encode(n)) = n up to the cutoff", bad.is_empty(), json!(bad));
            r.data(json!({ "table": table.entries })).fuel(fuel);
            Ok(r)
        }
        NprimeCmd::Extract { m } => {
            let mut r = ReportBuilder::new("nprime-extract", ctx.config(100_000, json!({ "bb": rec, "m": m })));
            let entry = table.get(*m)?;
            let bound = np.bound_extractor(&np.canonical_singleton(0), *m, 0, fuel)?;
            r.expect(
                format!("bound for BB({m}) >= table entry"),
                bound >= entry,
                json!({ "bound": bound, "entry": entry }),
            );
            r.fuel(bound);
            Ok(r)
        }
    }
}

/// What `example diag-inj` certifies about its candidate.
#[derive(Debug, Serialize, Deserialize)]
pub struct InjectionCertificate {
    pub candidate: Nat,
    pub fuel: Fuel,
    pub failure: DiagonalizerFailure,
}

fn diag_inj(ctx: &Ctx, candidate: Nat) -> CliResult<ReportBuilder> {
    let fuel = ctx.fuel_or(20_000);
    let mut r = ReportBuilder::new("diag-inj", ctx.config(20_000, json!({ "candidate": candidate })));
    let run = injection_diagonalizer(GoedelIndex(candidate), fuel);
    match run.phase {
        3 => {
            let ok = replay_injection_certificate(GoedelIndex(candidate), &run.failure, fuel);
            r.expect("candidate is not extensional on the final point", ok, json!({ "phase": 3 }));
        }
        phase => {
            r.check("candidate defeated", Outcome::Inconclusive, json!({ "phase": phase }));
        }
    }
    r.certificate(InjectionCertificate { candidate, fuel, failure: run.failure.clone() });
    r.data(json!({ "run": run, "log": run.log.events() })).fuel(fuel);
    Ok(r)
}
