use std::fmt;

use serde::{Deserialize, Serialize};

use crate::elem::Elem;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Elem>,
    #[serde(skip_serializing_if = "String::is_empty", default)]
    pub detail: String,
}

/// A list of named checks, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(subject: impl Into<String>) -> Self {
        Report { subject: subject.into(), checks: Vec::new() }
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed: true, witness: None, detail: String::new() });
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: Option<Elem>, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed: false, witness, detail: detail.into() });
    }

    /// Records a check from an optional witness of failure.
    pub fn record(&mut self, name: impl Into<String>, failure: Option<Elem>) {
        match failure {
            None => self.pass(name),
            Some(w) => self.fail(name, Some(w), ""),
        }
    }

    pub fn extend(&mut self, other: Report) {
        let prefix = other.subject;
        for mut c in other.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}: {}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn failed(&self, name: &str) -> bool {
        self.failures().any(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.subject, if self.passed() { "pass" } else { "FAIL" })?;
        for c in &self.checks {
            write!(f, "  [{}] {}", if c.passed { "ok" } else { "FAIL" }, c.name)?;
            if let Some(w) = &c.witness {
                write!(f, " (witness {w})")?;
            }
            if !c.detail.is_empty() {
                write!(f, " {}", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
