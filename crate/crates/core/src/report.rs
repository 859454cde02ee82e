//! Check records and reports shared by the verification routines and the CLI.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Check {
        Check { name: name.into(), status, detail: detail.into() }
    }

    pub fn pass_if(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Check {
        Check::new(name, Status::from_bool(ok), detail)
    }

    pub fn info(name: impl Into<String>, detail: impl Into<String>) -> Check {
        Check::new(name, Status::Info, detail)
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// A titled list of checks plus named payloads (canonical strings, lists).
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub data: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), ..Default::default() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.data.insert(key.to_string(), v.into());
    }

    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.checks.push(c);
        }
        for (k, v) in other.data {
            self.data.insert(format!("{prefix}{k}"), v);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Plain-text rendering, one line per check, then payloads.
    pub fn to_text(&self) -> String {
        let mut out = format!("== {} ==\n", self.title);
        for c in &self.checks {
            if c.detail.is_empty() {
                out.push_str(&format!("[{}] {}\n", c.status, c.name));
            } else {
                out.push_str(&format!("[{}] {}: {}\n", c.status, c.name, c.detail));
            }
        }
        for (k, v) in &self.data {
            match v {
                Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                Value::Array(items) => {
                    out.push_str(&format!("{k}:\n"));
                    for it in items {
                        match it {
                            Value::String(s) => out.push_str(&format!("  {s}\n")),
                            other => out.push_str(&format!("  {other}\n")),
                        }
                    }
                }
                other => out.push_str(&format!("{k}: {other}\n")),
            }
        }
        out
    }
}

/// Canonical strings of a sequence of displayable items.
pub fn strings<T: ToString>(items: &[T]) -> Value {
    Value::Array(items.iter().map(|x| Value::String(x.to_string())).collect())
}
