//! The result record shared by the JSON and text outputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use clint_core::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Inconclusive,
    Mismatch,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Value {
    /// An ideal given by canonical generators.
    Ideal {
        generators: Vec<String>,
    },
    /// Several ideals, each by canonical generators.
    Ideals {
        members: Vec<Vec<String>>,
    },
    /// A submodule of a dual module, by functionals on the monomial basis.
    Functionals {
        generators: Vec<String>,
    },
    Flag {
        value: bool,
    },
    Count {
        value: u64,
    },
    Text {
        value: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Output {
    pub label: String,
    #[serde(flatten)]
    pub value: Value,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub mode: Option<String>,
    pub ring: Option<String>,
    pub field: Option<String>,
    pub closure: Option<String>,
    pub precision: Option<Vec<u32>>,
    /// First index of the stable window of an interior computation.
    pub stabilized_at: Option<u32>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: u32,
    pub command: String,
    pub args: BTreeMap<String, String>,
    /// SHA-256 of each input, hex encoded.
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<Output>,
    pub provenance: Provenance,
    pub notes: Vec<String>,
    pub status: Status,
    pub exit_code: u8,
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

/// Exit code of an error class.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Parse { .. } | Error::Domain(_) | Error::Construction(_) => 1,
        Error::Inconclusive(_) => 2,
        Error::Capability(_) => 3,
        Error::Resource(_) => 4,
        Error::Anomaly(_) => 5,
    }
}

impl ResultRecord {
    pub fn new(command: &str, args: BTreeMap<String, String>, seed: u64) -> ResultRecord {
        ResultRecord {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            args,
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
            provenance: Provenance { seed, ..Provenance::default() },
            notes: Vec::new(),
            status: Status::Ok,
            exit_code: 0,
            error: None,
            elapsed_ms: 0,
        }
    }

    pub fn push(&mut self, label: impl Into<String>, value: Value) {
        self.outputs.push(Output { label: label.into(), value });
    }

    pub fn fail(&mut self, e: &Error) {
        self.status = match e {
            Error::Inconclusive(_) => Status::Inconclusive,
            Error::Anomaly(_) => Status::Mismatch,
            _ => Status::Error,
        };
        self.exit_code = exit_code(e);
        self.error = Some(e.to_string());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("records serialize")
    }

    /// Plain-text rendering: one `key  value` line per field.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &str| writeln!(out, "{k:<12}  {v}").unwrap();
        line("command", &self.command);
        for (k, v) in &self.args {
            line(&format!("  {k}"), v);
        }
        let p = &self.provenance;
        for (k, v) in [("ring", &p.ring), ("field", &p.field), ("closure", &p.closure), ("mode", &p.mode)] {
            if let Some(v) = v {
                line(k, v);
            }
        }
        if let Some(prec) = &p.precision {
            line("precision", &format!("{prec:?}"));
        }
        if let Some(t) = p.stabilized_at {
            line("stabilized", &format!("from t = {t}"));
        }
        line("seed", &p.seed.to_string());
        for o in &self.outputs {
            let v = match &o.value {
                Value::Ideal { generators } | Value::Functionals { generators } => {
                    format!("({})", generators.join(", "))
                }
                Value::Ideals { members } => {
                    let parts: Vec<String> = members.iter().map(|g| format!("({})", g.join(", "))).collect();
                    format!("{} ideal(s): {}", members.len(), parts.join("; "))
                }
                Value::Flag { value } => value.to_string(),
                Value::Count { value } => value.to_string(),
                Value::Text { value } => value.clone(),
            };
            line(&o.label, &v);
        }
        for n in &self.notes {
            line("note", n);
        }
        let status = match self.status {
            Status::Ok => "ok",
            Status::Inconclusive => "inconclusive",
            Status::Mismatch => "mismatch",
            Status::Error => "error",
        };
        line("status", &format!("{status} (exit {})", self.exit_code));
        if let Some(e) = &self.error {
            line("error", e);
        }
        line("elapsed", &format!("{} ms", self.elapsed_ms));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_class() {
        assert_eq!(exit_code(&Error::Usage(String::new())), 1);
        assert_eq!(exit_code(&Error::Parse { line: 1, column: 1, message: String::new() }), 1);
        assert_eq!(exit_code(&Error::Inconclusive(String::new())), 2);
        assert_eq!(exit_code(&Error::Capability(String::new())), 3);
        assert_eq!(exit_code(&Error::Resource(String::new())), 4);
        assert_eq!(exit_code(&Error::Anomaly(String::new())), 5);
    }

    #[test]
    fn json_round_trips() {
        let mut r = ResultRecord::new("hull", BTreeMap::from([("ideal".into(), "(t^4, t^5)".into())]), 7);
        r.push("hull", Value::Ideal { generators: vec!["t^2".into(), "t^3".into()] });
        r.push("expansions", Value::Count { value: 4 });
        let back: ResultRecord = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
