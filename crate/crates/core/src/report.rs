//! Reports emitted by the command-line front end.

use serde::{Deserialize, Serialize};

use crate::sweep::CheckSummary;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Canonical echo of the command and the options that affect results.
    pub command: String,
    /// Unix seconds; only present when requested, so reports stay
    /// byte-identical across runs by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    pub checks: Vec<CheckRecord>,
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub total: u64,
    pub passed: u64,
    pub failed: u64,
    pub first_counterexample: Option<String>,
}

impl From<CheckSummary> for CheckRecord {
    fn from(c: CheckSummary) -> Self {
        CheckRecord {
            name: c.name,
            total: c.total,
            passed: c.passed,
            failed: c.failed,
            first_counterexample: c.first_counterexample,
        }
    }
}

impl Report {
    pub fn new(command: String) -> Self {
        Report {
            command,
            timestamp: None,
            checks: Vec::new(),
            total: 0,
            passed: 0,
            failed: 0,
            witnesses: Vec::new(),
            data: serde_json::Value::Null,
        }
    }

    pub fn push_check(&mut self, check: impl Into<CheckRecord>) {
        let check = check.into();
        self.total += check.total;
        self.passed += check.passed;
        self.failed += check.failed;
        self.checks.push(check);
    }

    /// Single pass/fail check.
    pub fn push_assertion(
        &mut self,
        name: &str,
        ok: bool,
        counterexample: impl FnOnce() -> String,
    ) {
        let mut c = CheckSummary::new(name);
        c.record(ok, counterexample);
        self.push_check(c);
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `#`-prefixed summary lines followed by `body` verbatim.
    pub fn to_tsv(&self, body: &str) -> String {
        let mut out = format!("# command\t{}\n", self.command);
        if let Some(t) = self.timestamp {
            out.push_str(&format!("# timestamp\t{t}\n"));
        }
        out.push_str("# check\ttotal\tpassed\tfailed\tfirst_counterexample\n");
        for c in &self.checks {
            out.push_str(&format!(
                "# {}\t{}\t{}\t{}\t{}\n",
                c.name,
                c.total,
                c.passed,
                c.failed,
                c.first_counterexample.as_deref().unwrap_or("-")
            ));
        }
        out.push_str(&format!(
            "# total\t{}\t{}\t{}\n",
            self.total, self.passed, self.failed
        ));
        for w in &self.witnesses {
            out.push_str(&format!("# witness\t{w}\n"));
        }
        out.push_str(body);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_add_up() {
        let mut r = Report::new("demo".into());
        r.push_assertion("a", true, String::new);
        r.push_assertion("b", false, || "boom".into());
        assert_eq!((r.total, r.passed, r.failed), (2, 1, 1));
        assert!(!r.all_passed());
        let tsv = r.to_tsv("x\n");
        assert!(tsv.contains("# b\t1\t0\t1\tboom\n"));
        assert!(tsv.ends_with("# total\t2\t1\t1\nx\n"));
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
