//! Verification reports: one record per enabled check, rendered as text or
//! as a JSON document.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: &'static str,
    pub anchor: &'static str,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub input_sha256: String,
    pub seed: u64,
    pub mode: String,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl VerificationReport {
    pub fn new(input: &str, seed: u64, mode: String) -> Self {
        VerificationReport {
            input_sha256: digest(input),
            seed,
            mode,
            checks: Vec::new(),
            summary: Summary::default(),
        }
    }

    pub fn push(&mut self, record: CheckRecord) {
        match record.status {
            Status::Pass => self.summary.passed += 1,
            Status::Fail => self.summary.failed += 1,
            Status::Skip => self.summary.skipped += 1,
        }
        self.checks.push(record);
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|r| r.name == name)
    }

    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        writeln!(out, "input sha256 {}", self.input_sha256).unwrap();
        writeln!(out, "seed {}", self.seed).unwrap();
        writeln!(out, "mode {}", self.mode).unwrap();
        for r in &self.checks {
            write!(out, "{} {:width$}  {}", r.status.tag(), r.name, r.detail).unwrap();
            if let Some(ms) = r.millis {
                write!(out, " ({ms} ms)").unwrap();
            }
            out.push('\n');
            writeln!(out, "     {:width$}  checks: {}", "", r.anchor).unwrap();
            if let Some(w) = &r.witness {
                writeln!(out, "     {:width$}  witness: {w}", "").unwrap();
            }
        }
        let s = self.summary;
        writeln!(out, "summary {} passed, {} failed, {} skipped", s.passed, s.failed, s.skipped).unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
