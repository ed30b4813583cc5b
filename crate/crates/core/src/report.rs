//! Pass/fail records produced by the verifiers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Ordered list of named checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.push(name, Status::Pass, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.push(name, Status::Fail, Some(witness.into()));
    }

    pub fn skip(&mut self, name: impl Into<String>, reason: impl Into<String>) {
        self.push(name, Status::Skipped, Some(reason.into()));
    }

    /// Records `ok`; the witness is only built on failure.
    pub fn record<F>(&mut self, name: impl Into<String>, ok: bool, witness: F)
    where
        F: FnOnce() -> String,
    {
        if ok {
            self.pass(name);
        } else {
            self.fail(name, witness());
        }
    }

    /// Records the outcome of a fallible step; errors become failures.
    pub fn record_result<T>(&mut self, name: impl Into<String>, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => {
                self.pass(name);
                Some(v)
            }
            Err(e) => {
                self.fail(name, e.to_string());
                None
            }
        }
    }

    /// Adds a passing check carrying an informational value.
    pub fn note(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.push(name, Status::Pass, Some(detail.into()));
    }

    fn push(&mut self, name: impl Into<String>, status: Status, detail: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            status,
            detail,
        });
    }

    pub fn extend(&mut self, prefix: &str, other: CheckReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `Err(TheoremViolation)` naming the first failed check.
    pub fn into_result(self) -> Result<CheckReport> {
        let first = self
            .failures()
            .next()
            .map(|c| (c.name.clone(), c.detail.clone().unwrap_or_default()));
        match first {
            Some((check, witness)) => Err(Error::violation(check, witness)),
            None => Ok(self),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_failure_becomes_error() {
        let mut r = CheckReport::new();
        r.pass("a");
        r.skip("b", "n/a");
        assert!(r.passed());
        r.record("c", false, || "boom".into());
        r.fail("d", "later");
        match r.into_result() {
            Err(Error::TheoremViolation { check, witness }) => {
                assert_eq!(check, "c");
                assert_eq!(witness, "boom");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn prefixes_nest() {
        let mut inner = CheckReport::new();
        inner.pass("x");
        let mut outer = CheckReport::new();
        outer.extend("abel", inner);
        assert!(outer.get("abel.x").is_some());
    }
}
