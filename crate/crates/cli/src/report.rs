//! Deterministic JSON reports.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Verified,
    Refuted,
    Inconclusive,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verified => 0,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 2,
        }
    }

    pub fn from_bool(ok: bool) -> Outcome {
        if ok {
            Outcome::Verified
        } else {
            Outcome::Refuted
        }
    }

    /// The worse of two outcomes: refuted beats inconclusive beats verified.
    pub fn and(self, other: Outcome) -> Outcome {
        use Outcome::*;
        match (self, other) {
            (Refuted, _) | (_, Refuted) => Refuted,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Verified,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub kind: String,
    pub config: Value,
    pub config_hash: String,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub certificates: Vec<Value>,
    pub data: Value,
    /// Work measured in fuel, so reruns stay byte-identical.
    pub fuel_used: u64,
}

/// Hex SHA-256 of the compact JSON form of the configuration.
pub fn config_hash(config: &Value) -> String {
    let bytes = serde_json::to_vec(config).expect("JSON values serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Accumulates checks and certificates for one command.
#[derive(Debug)]
pub struct ReportBuilder {
    kind: String,
    config: Value,
    checks: Vec<Check>,
    certificates: Vec<Value>,
    data: Value,
    fuel_used: u64,
}

impl ReportBuilder {
    pub fn new(kind: &str, config: Value) -> Self {
        ReportBuilder {
            kind: kind.into(),
            config,
            checks: Vec::new(),
            certificates: Vec::new(),
            data: Value::Null,
            fuel_used: 0,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, outcome: Outcome, detail: Value) -> &mut Self {
        self.checks.push(Check { name: name.into(), outcome, detail });
        self
    }

    /// A check that either holds or is refuted.
    pub fn expect(&mut self, name: impl Into<String>, ok: bool, detail: Value) -> &mut Self {
        self.check(name, Outcome::from_bool(ok), detail)
    }

    pub fn certificate(&mut self, cert: impl Serialize) -> &mut Self {
        self.certificates.push(serde_json::to_value(cert).expect("certificates serialize"));
        self
    }

    pub fn data(&mut self, data: impl Serialize) -> &mut Self {
        self.data = serde_json::to_value(data).expect("report data serializes");
        self
    }

    pub fn fuel(&mut self, fuel: u64) -> &mut Self {
        self.fuel_used = self.fuel_used.max(fuel);
        self
    }

    pub fn finish(self, command: Vec<String>) -> Report {
        let outcome = self.checks.iter().fold(Outcome::Verified, |acc, c| acc.and(c.outcome));
        Report {
            command,
            kind: self.kind,
            config_hash: config_hash(&self.config),
            config: self.config,
            outcome,
            checks: self.checks,
            certificates: self.certificates,
            data: self.data,
            fuel_used: self.fuel_used,
        }
    }
}
