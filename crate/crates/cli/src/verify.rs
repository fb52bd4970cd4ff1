//! `repspace --verify REPORT`: re-checks the certificates embedded in a
//! saved report against the inputs named in its configuration.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use repspace::ceers::example35_edge_of;
use repspace::counterexamples::da::replay_da_certificate;
use repspace::counterexamples::halting::replay_injection_certificate;
use repspace::counterexamples::{DaCertificate, DiagonalizerFailure};
use repspace::kernel::GoedelIndex;

use crate::ceer::{replay_candidate, CandidateCertificate, MergePath};
use crate::example::{da_run_from_record, DaRecord, InjectionCertificate};
use crate::inputs::{self, file_record, CeerSource};
use crate::report::{Outcome, Report, ReportBuilder};
use crate::{CliError, CliResult, Ctx};

fn parse<T: DeserializeOwned>(v: &Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v.clone()).map_err(|e| CliError::Usage(format!("malformed {what} in report: {e}")))
}

/// Whether every file recorded in `v` still has the recorded digest.
fn inputs_unchanged(v: &Value, stale: &mut Vec<String>) {
    match v {
        Value::Object(map) => {
            if let (Some(Value::String(path)), Some(Value::String(_))) = (map.get("path"), map.get("sha256")) {
                let now = inputs::read(Path::new(path)).map(|t| file_record(Path::new(path), &t));
                if now.as_ref().ok() != Some(v) {
                    stale.push(path.clone());
                }
                return;
            }
            map.values().for_each(|x| inputs_unchanged(x, stale));
        }
        Value::Array(xs) => xs.iter().for_each(|x| inputs_unchanged(x, stale)),
        _ => {}
    }
}

pub fn verify(ctx: &Ctx, path: &Path) -> CliResult<ReportBuilder> {
    let text = inputs::read(path)?;
    let report: Report =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{} is not a report: {e}", path.display())))?;
    let config = json!({ "report": file_record(path, &text), "kind": report.kind, "precision": ctx.precision });
    let mut r = ReportBuilder::new("verify", config);
    let mut stale = Vec::new();
    inputs_unchanged(&report.config, &mut stale);
    r.expect("input files unchanged", stale.is_empty(), json!(stale));
    if !stale.is_empty() {
        return Ok(r);
    }
    let args = &report.config["args"];
    let mut results = Vec::new();
    for (i, cert) in report.certificates.iter().enumerate() {
        let outcome = match report.kind.as_str() {
            "ceer-equal" => {
                let source: CeerSource = parse(&args["spec"], "ceer source")?;
                merge_path_holds(&source, &parse(cert, "merge path")?)?
            }
            "example35" => Outcome::from_bool(replay_candidate(&parse::<CandidateCertificate>(cert, "certificate")?)),
            "diag-inj" => {
                let c: InjectionCertificate = parse(cert, "certificate")?;
                match c.failure {
                    DiagonalizerFailure::NonExtensional { .. } => {
                        Outcome::from_bool(replay_injection_certificate(GoedelIndex(c.candidate), &c.failure, c.fuel))
                    }
                    _ => Outcome::Inconclusive,
                }
            }
            "diag-da" => {
                let spec: Option<PathBuf> = parse(&args["spec"], "witness path")?;
                let (cands, _) = inputs::candidates(spec.as_ref())?;
                let record: DaRecord = parse(&report.data["run"], "run record")?;
                let run = da_run_from_record(&record);
                let c: DaCertificate = parse(cert, "certificate")?;
                let label = match &c {
                    DaCertificate::Omission { candidate, .. }
                    | DaCertificate::WrongSeparation { candidate, .. }
                    | DaCertificate::Stalled { candidate, .. } => candidate,
                };
                match (cands.iter().find(|k| &k.label == label), &c) {
                    (_, DaCertificate::Stalled { .. }) => Outcome::Inconclusive,
                    (Some(k), _) => Outcome::from_bool(replay_da_certificate(&run, k, &c)),
                    (None, _) => Outcome::Refuted,
                }
            }
            _ => Outcome::Inconclusive,
        };
        results.push(json!({ "index": i, "outcome": outcome }));
        r.check(format!("certificate {i}"), outcome, Value::Null);
    }
    if report.kind == "diag-da" {
        let record: DaRecord = parse(&report.data["run"], "run record")?;
        let counts = da_run_from_record(&record).stage_counts();
        let mixed = counts.iter().all(|&(members, others)| members >= 1 && others >= 1);
        r.expect("stage counts match the prefix", counts == record.stage_counts && mixed, json!(counts));
    }
    if report.certificates.is_empty() {
        r.check("no certificates to replay", Outcome::Inconclusive, json!({ "kind": report.kind }));
    }
    r.data(json!({ "original_outcome": report.outcome, "certificates": results }));
    Ok(r)
}

/// Each step must be a generator the source emits at the recorded fuel.
fn merge_path_holds(source: &CeerSource, path: &MergePath) -> CliResult<Outcome> {
    if !path.chains() {
        return Ok(Outcome::Refuted);
    }
    let emitted = |step: &repspace::ceers::TimedPair| -> CliResult<bool> {
        if source.example35 {
            let is_edge =
                |from, to| example35_edge_of(from, step.fuel).is_some_and(|e| e.to == to && e.fuel == step.fuel);
            return Ok(is_edge(step.a, step.b) || is_edge(step.b, step.a));
        }
        let (pres, _) = source.load()?;
        Ok(pres.emitted(step.fuel).contains(step))
    };
    for step in &path.steps {
        if !emitted(step)? {
            return Ok(Outcome::Refuted);
        }
    }
    Ok(Outcome::Verified)
}
