//! Structured verification reports shared by the `verify`, `suite` and
//! `search-spreads` commands.
//!
//! A report is deterministic given its configuration and seed, except for
//! the per-check `elapsed_ms` timing field.

use crate::battery::CriterionOutcome;
use serde::Serialize;
use serde_json::Value;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    pub paper_ref: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub details: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: impl Into<String>, config: Value) -> Report {
        Report {
            command: command.into(),
            config,
            checks: Vec::new(),
        }
    }

    pub fn push_outcome(&mut self, outcome: CriterionOutcome, elapsed_ms: u64) {
        let verdict = if outcome.pass {
            Verdict::Pass
        } else if outcome.inconclusive {
            Verdict::Inconclusive
        } else {
            Verdict::Fail
        };
        self.checks.push(Check {
            id: outcome.id.to_string(),
            paper_ref: outcome.refs.to_string(),
            instance: None,
            verdict,
            witness: outcome.witness,
            details: outcome.details,
            elapsed_ms,
        });
    }

    /// Time a battery and record its outcome.
    pub fn run(&mut self, battery: impl FnOnce() -> CriterionOutcome) {
        let start = Instant::now();
        let outcome = battery();
        self.push_outcome(outcome, start.elapsed().as_millis() as u64);
    }

    pub fn push_check(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// 0 when everything passed; 1 on any failure, or on an inconclusive
    /// verdict unless those are explicitly allowed.
    pub fn exit_code(&self, allow_inconclusive: bool) -> i32 {
        let bad = self.checks.iter().any(|c| {
            c.verdict == Verdict::Fail
                || (c.verdict == Verdict::Inconclusive && !allow_inconclusive)
        });
        i32::from(bad)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,paper_ref,instance,verdict,details,elapsed_ms\n");
        for c in &self.checks {
            let verdict = match c.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
                Verdict::Inconclusive => "inconclusive",
            };
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                csv_field(&c.id),
                csv_field(&c.paper_ref),
                csv_field(c.instance.as_deref().unwrap_or("")),
                verdict,
                csv_field(&c.details),
                c.elapsed_ms
            ));
        }
        out
    }

    /// One human line per check, for terminal use.
    pub fn summary_lines(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                let verdict = match c.verdict {
                    Verdict::Pass => "PASS",
                    Verdict::Fail => "FAIL",
                    Verdict::Inconclusive => "INCONCLUSIVE",
                };
                format!("{:<12} {} — {}", verdict, c.id, c.details)
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
