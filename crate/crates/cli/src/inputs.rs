//! Reading input files, recording their digests in the configuration.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use repspace::ceers::{example35_ceer, parse_pair_list, CeerPresentation};
use repspace::counterexamples::da::HwitCandidate;
use repspace::counterexamples::oracle::StageTable;
use repspace::counterexamples::{bundled_candidates, BbTable, OracleSet};

use crate::{CliError, CliResult};

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

/// `{ "path": …, "sha256": … }` for a file that was read.
pub fn file_record(path: &Path, text: &str) -> Value {
    json!({ "path": path.display().to_string(), "sha256": digest(text) })
}

/// Where a ceer comes from.
#[derive(Clone, Debug, Default, Args, Serialize, Deserialize)]
pub struct CeerSource {
    /// Generator pairs, e.g. "0 1,1 2".
    #[arg(long, conflicts_with_all = ["file", "example35"])]
    pub pairs: Option<String>,
    /// A `ceer v1` file.
    #[arg(long, conflicts_with = "example35")]
    pub file: Option<PathBuf>,
    /// The relation built against all toy programs.
    #[arg(long)]
    pub example35: bool,
}

impl CeerSource {
    pub fn load(&self) -> CliResult<(CeerPresentation, Value)> {
        if let Some(p) = &self.pairs {
            return Ok((CeerPresentation::from_pairs(parse_pair_list(p)?), json!({ "pairs": p })));
        }
        if let Some(path) = &self.file {
            let text = read(path)?;
            return Ok((CeerPresentation::parse(&text)?, json!({ "file": file_record(path, &text) })));
        }
        if self.example35 {
            return Ok((example35_ceer(), json!("example35")));
        }
        Ok((CeerPresentation::identity(), json!("identity")))
    }
}

/// An oracle file, or a named default.
pub fn oracle(path: Option<&PathBuf>, default: (&str, OracleSet)) -> CliResult<(OracleSet, Value)> {
    match path {
        Some(path) => {
            let text = read(path)?;
            Ok((OracleSet::parse(&text)?, file_record(path, &text)))
        }
        None => Ok((default.1, json!(default.0))),
    }
}

pub fn stage_table(path: &Path) -> CliResult<(StageTable, Value)> {
    let text = read(path)?;
    Ok((StageTable::parse(&text)?, file_record(path, &text)))
}

/// Candidates from an `hwit v1` file, or the bundled ten.
pub fn candidates(path: Option<&PathBuf>) -> CliResult<(Vec<HwitCandidate>, Value)> {
    match path {
        Some(path) => {
            let text = read(path)?;
            let label = path.file_stem().map_or("file".into(), |s| s.to_string_lossy().into_owned());
            Ok((vec![HwitCandidate::parse(&label, &text)?], file_record(path, &text)))
        }
        None => Ok((bundled_candidates(), json!("bundled"))),
    }
}

/// A `bb v1` table, or the default audit (cutoff 3, ceiling 1000, 2 registers).
pub fn bb_table(path: Option<&PathBuf>) -> CliResult<(BbTable, Value)> {
    match path {
        Some(path) => {
            let text = read(path)?;
            Ok((BbTable::parse(&text)?, file_record(path, &text)))
        }
        None => Ok((BbTable::compute(3, 1000, 2), json!("computed cutoff 3, fuel 1000, registers 2"))),
    }
}

/// Comma-separated naturals, e.g. "2,5".
pub fn nat_list(s: &str) -> CliResult<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| CliError::Usage(format!("bad number `{t}` in list `{s}`"))))
        .collect()
}
