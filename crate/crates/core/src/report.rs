//! Check records and their text and JSON renderings.
//!
//! JSON objects are `serde_json::Map`s, which keep keys sorted, so the
//! pretty-printed form is canonical and re-rendering parsed output yields
//! the same bytes. Rationals are `"p/q"` strings.

use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub inputs: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

impl Check {
    pub fn compare(id: impl Into<String>, inputs: impl Into<String>, expected: String, computed: String) -> Self {
        let pass = expected == computed;
        Check { id: id.into(), inputs: inputs.into(), expected, computed, pass }
    }

    pub fn holds(id: impl Into<String>, inputs: impl Into<String>, ok: bool) -> Self {
        Check::compare(id, inputs, "true".into(), ok.to_string())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub data: Value,
    checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str, data: Value) -> Self {
        Report { command: command.into(), data, checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.failed() == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "command": self.command,
            "data": self.data,
            "checks": self.checks,
            "summary": {
                "total": self.checks.len(),
                "passed": self.checks.len() - self.failed(),
                "failed": self.failed(),
            },
        })
    }

    pub fn render_json(&self) -> String {
        render_value_json(&self.to_value())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "hyperbound {}", self.command);
        render_text_value(&mut out, &self.data, 0);
        let _ = writeln!(
            out,
            "checks: {} passed, {} failed",
            self.checks.len() - self.failed(),
            self.failed()
        );
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            if c.pass {
                let _ = writeln!(out, "{tag} {}: {}", c.id, c.computed);
            } else {
                let _ = writeln!(out, "{tag} {}: computed {}, expected {} [{}]", c.id, c.computed, c.expected, c.inputs);
            }
        }
        out
    }
}

pub fn render_value_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render_text_value(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_text_value(out, x, indent + 1);
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_text_value(out, x, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}
