use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::validation::Verdict;

/// One named verdict with whatever witness data backs it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, detail: Value) -> Check {
        Check {
            name: name.into(),
            verdict,
            detail,
        }
    }

    pub fn from_bool(name: impl Into<String>, ok: bool, detail: Value) -> Check {
        Check::new(name, Verdict::from_bool(ok), detail)
    }
}

/// The outcome of a command. The overall verdict is the conjunction of the
/// checks, so any failing check makes the exit code nonzero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub exit_code: i32,
    pub checks: Vec<Check>,
    /// Command output that is not a verdict (dimensions, written files, ...).
    pub data: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, checks: Vec<Check>, data: Value) -> Report {
        let verdict = Verdict::all(checks.iter().map(|c| c.verdict));
        Report {
            command: command.into(),
            verdict,
            exit_code: exit_code(verdict),
            checks,
            data,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {}\n", self.command, label(self.verdict));
        for c in &self.checks {
            let _ = write!(out, "  [{}] {}", label(c.verdict), c.name);
            if !c.detail.is_null() {
                let _ = write!(out, ": {}", compact(&c.detail));
            }
            out.push('\n');
        }
        if !self.data.is_null() {
            let _ = writeln!(
                out,
                "{}",
                serde_json::to_string_pretty(&self.data).expect("values serialize")
            );
        }
        out
    }
}

fn label(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "pass",
        Verdict::No => "FAIL",
        Verdict::Unknown => "unknown",
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        v => v.to_string(),
    }
}

/// 0 pass, 1 fail, 2 unknown.
pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Yes => 0,
        Verdict::No => 1,
        Verdict::Unknown => 2,
    }
}

const SCHEMA: &str = r##"{
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "dgker report",
  "type": "object",
  "required": ["command", "verdict", "exit_code", "checks", "data"],
  "additionalProperties": false,
  "definitions": {
    "verdict": { "enum": ["yes", "no", "unknown"] }
  },
  "properties": {
    "command": { "type": "string", "minLength": 1 },
    "verdict": { "$ref": "#/definitions/verdict" },
    "exit_code": { "enum": [0, 1, 2] },
    "checks": {
      "type": "array",
      "items": {
        "type": "object",
        "required": ["name", "verdict", "detail"],
        "additionalProperties": false,
        "properties": {
          "name": { "type": "string" },
          "verdict": { "$ref": "#/definitions/verdict" },
          "detail": {}
        }
      }
    },
    "data": {}
  }
}
"##;

/// The published JSON schema of machine-readable reports.
pub fn report_schema() -> &'static str {
    SCHEMA
}
