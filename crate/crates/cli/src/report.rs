//! Machine-readable reports and their plain-text rendering.

use std::fmt::Write as _;

use graphjac::graph::GraphSpec;
use graphjac::morphisms::MorphismSpec;
use graphjac::report::{CheckReport, Status};
use graphjac::suites::GroupRecord;
use serde::Serialize;

/// Output of every command. Contains no timing so that identical inputs
/// give byte-identical JSON.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<GroupRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct Verdict {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
    pub passed: bool,
    pub checks: CheckReport,
}

/// A random instance, in the same JSON form accepted as input.
#[derive(Clone, Debug, Serialize)]
pub struct Instance {
    pub index: usize,
    pub graph: GraphSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismSpec>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            groups: Vec::new(),
            verdicts: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, v: Verdict) {
        self.passed &= v.passed;
        self.verdicts.push(v);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        for g in &self.groups {
            let _ = writeln!(out, "{} ≅ {}", g.name, g.group);
        }
        for v in &self.verdicts {
            let label = match &v.instance {
                Some(i) => format!("{} #{}", v.suite, i.index),
                None => v.suite.clone(),
            };
            if verbose || !v.passed {
                for c in &v.checks.checks {
                    let tag = match c.status {
                        Status::Pass => "ok  ",
                        Status::Fail => "FAIL",
                        Status::Skipped => "skip",
                    };
                    match &c.detail {
                        Some(d) => {
                            let _ = writeln!(out, "  {tag} {}: {d}", c.name);
                        }
                        None => {
                            let _ = writeln!(out, "  {tag} {}", c.name);
                        }
                    }
                }
            }
            if verbose || v.instance.is_none() || !v.passed {
                let _ = writeln!(out, "{label}: {}", if v.passed { "pass" } else { "FAIL" });
            }
        }
        let random: Vec<&Verdict> = self
            .verdicts
            .iter()
            .filter(|v| v.instance.is_some())
            .collect();
        if !random.is_empty() || (self.verdicts.is_empty() && self.groups.is_empty()) {
            let ok = random.iter().filter(|v| v.passed).count();
            let _ = writeln!(out, "{ok}/{} pass", random.len());
        }
        out
    }
}
