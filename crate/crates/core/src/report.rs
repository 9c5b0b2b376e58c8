//! Versioned, deterministic verification reports.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::Error;

pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// Not applicable to this input, e.g. a basis change that needs division.
    Skipped,
}

/// One identity checked on one input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_floor: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl Check {
    pub fn new(id: &str, passed: bool) -> Self {
        Check {
            id: id.to_string(),
            status: if passed { Status::Pass } else { Status::Fail },
            precision_floor: None,
            witness: None,
            detail: Value::Null,
        }
    }

    pub fn skipped(id: &str, reason: &str) -> Self {
        Check {
            witness: Some(reason.to_string()),
            status: Status::Skipped,
            ..Check::new(id, true)
        }
    }

    pub fn floor(mut self, prec: u32) -> Self {
        self.precision_floor = Some(prec);
        self
    }

    pub fn witness(mut self, w: Option<String>) -> Self {
        if self.status == Status::Fail {
            self.witness = w;
        }
        self
    }

    pub fn detail(mut self, v: impl Serialize) -> Self {
        self.detail = serde_json::to_value(v).unwrap_or(Value::Null);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    InputError,
    PrecisionExhausted,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::InputError => 2,
            Outcome::PrecisionExhausted => 3,
        }
    }

    /// Classifies an error raised before or during checking.
    pub fn of_error(e: &Error) -> Self {
        match e {
            Error::PrecisionExhausted(_) | Error::NonConvergence { .. } => Outcome::PrecisionExhausted,
            Error::NotEnhanced(_) | Error::NonCommuting(_) | Error::NotNilpotent(_) | Error::NotAComplex { .. } => {
                Outcome::Fail
            }
            _ => Outcome::InputError,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    pub parameters: Value,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Report {
    pub fn new(command: &str, input: Option<String>, parameters: impl Serialize) -> Self {
        Report {
            version: REPORT_VERSION,
            command: command.to_string(),
            input,
            parameters: serde_json::to_value(parameters).unwrap_or(Value::Null),
            outcome: Outcome::Pass,
            error: None,
            checks: Vec::new(),
            data: Value::Null,
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
        self.refresh();
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
        self.refresh();
    }

    pub fn set_data(&mut self, v: impl Serialize) {
        self.data = serde_json::to_value(v).unwrap_or(Value::Null);
    }

    pub fn fail_with(&mut self, e: &Error) {
        self.outcome = Outcome::of_error(e);
        self.error = Some(e.to_string());
    }

    fn refresh(&mut self) {
        if self.error.is_none() {
            self.outcome = if self.checks.iter().all(Check::passed) {
                Outcome::Pass
            } else {
                Outcome::Fail
            };
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text rendering of the JSON document.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let v = serde_json::to_value(self).expect("report serializes");
        let _ = writeln!(out, "{} (report v{})", self.command, self.version);
        if let Some(i) = &self.input {
            let _ = writeln!(out, "input: {i}");
        }
        if let Value::Object(params) = &v["parameters"] {
            let ps: Vec<String> = params.iter().map(|(k, v)| format!("{k}={}", scalar_text(v))).collect();
            if !ps.is_empty() {
                let _ = writeln!(out, "parameters: {}", ps.join(" "));
            }
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
            };
            let _ = write!(out, "{tag:<5}{}", c.id);
            if let Some(p) = c.precision_floor {
                let _ = write!(out, " [precision {p}]");
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, " : {w}");
            }
            out.push('\n');
            if !c.detail.is_null() {
                render_value(&mut out, &c.detail, 2);
            }
        }
        if !self.data.is_null() {
            let _ = writeln!(out, "data:");
            render_value(&mut out, &self.data, 2);
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        let _ = writeln!(out, "outcome: {}", scalar_text(&v["outcome"]));
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if x.is_object() || (x.is_array() && x.as_array().is_some_and(|a| a.iter().any(Value::is_object))) {
                    let _ = writeln!(out, "{pad}{k}:");
                    render_value(out, x, indent + 2);
                } else {
                    let _ = writeln!(out, "{pad}{k}: {}", scalar_text(x));
                }
            }
        }
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for x in items {
                let _ = writeln!(out, "{pad}-");
                render_value(out, x, indent + 2);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outcome_tracks_checks() {
        let mut r = Report::new("verify", None, serde_json::json!({"N": 6}));
        r.push(Check::new("a", true));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::skipped("b", "n/a"));
        assert_eq!(r.exit_code(), 0);
        r.push(Check::new("c", false).witness(Some("X1".into())));
        assert_eq!(r.exit_code(), 1);
        assert!(r.render_text().contains("FAIL c : X1"));
        r.fail_with(&Error::PrecisionExhausted("guard".into()));
        assert_eq!(r.exit_code(), 3);
        assert!(r.to_json().contains("\"version\": 1"));
    }
}
