use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::graph::{FactTag, Relation};
use super::interval::DimInterval;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssertionStatus {
    Entailed,
    NotEntailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertionRecord {
    pub line: usize,
    pub text: String,
    pub cell: String,
    pub relation: Relation,
    pub expected: u64,
    pub interval: DimInterval,
    pub status: AssertionStatus,
    /// Derivation of the cell's bounds, dependencies first.
    pub chain: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactRecord {
    pub line: usize,
    pub tag: FactTag,
    pub cell: String,
    pub relation: Relation,
    pub value: u64,
}

/// Oracle value of a cell next to the engine's final interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub cell: String,
    pub oracle: u64,
    pub engine: DimInterval,
    pub agree: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub script: String,
    pub params: BTreeMap<String, i64>,
    pub seed: u64,
    pub assertions: Vec<AssertionRecord>,
    pub facts: Vec<FactRecord>,
    pub oracle_checks: Vec<OracleCheck>,
}

impl Report {
    pub fn new(script: &str, params: BTreeMap<String, i64>, seed: u64) -> Self {
        Self { schema: REPORT_SCHEMA, script: script.to_string(), params, seed, ..Default::default() }
    }

    pub fn all_entailed(&self) -> bool {
        self.assertions.iter().all(|a| a.status == AssertionStatus::Entailed)
    }

    pub fn oracle_mismatches(&self) -> usize {
        self.oracle_checks.iter().filter(|c| !c.agree).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "script {} [{}] seed {}", self.script, params.join(" "), self.seed);
        for a in &self.assertions {
            let mark = if a.status == AssertionStatus::Entailed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{mark} line {:>3}: {}  (have {})", a.line, a.text, a.interval);
            if a.status == AssertionStatus::NotEntailed {
                for step in &a.chain {
                    let _ = writeln!(out, "         {step}");
                }
            }
        }
        if !self.oracle_checks.is_empty() {
            let _ = writeln!(
                out,
                "oracle checks: {} cells, {} mismatches",
                self.oracle_checks.len(),
                self.oracle_mismatches()
            );
            for c in self.oracle_checks.iter().filter(|c| !c.agree) {
                let _ = writeln!(out, "  mismatch {}: oracle {} engine {}", c.cell, c.oracle, c.engine);
            }
        }
        out
    }
}
