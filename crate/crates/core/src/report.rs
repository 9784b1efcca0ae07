//! Verification reports: one line per check, counterexamples for failures
//! and a command that reruns the failing case.

use std::fmt;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "PARTIAL")]
    Partial,
    #[serde(rename = "SKIPPED-budget")]
    SkippedBudget,
    /// Reported for information only; never a failure.
    #[serde(rename = "INFO")]
    Info,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Partial => "PARTIAL",
            Status::SkippedBudget => "SKIPPED-budget",
            Status::Info => "INFO",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repro: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status,
            detail: detail.into(),
            counterexample: None,
            repro: None,
        }
    }

    pub fn with_counterexample(mut self, v: Value) -> Self {
        self.counterexample = Some(v);
        self
    }

    pub fn with_repro(mut self, cmd: impl Into<String>) -> Self {
        self.repro = Some(cmd.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub partial: usize,
    pub skipped: usize,
    pub info: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub category: String,
    pub fp_bound: usize,
    pub max_size: usize,
    pub notices: Vec<String>,
    pub checks: Vec<Check>,
    /// Wall-clock milliseconds, only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl VerificationReport {
    pub fn new(
        suite: impl Into<String>,
        category: impl Into<String>,
        fp_bound: usize,
        max_size: usize,
    ) -> Self {
        VerificationReport {
            suite: suite.into(),
            category: category.into(),
            fp_bound,
            max_size,
            notices: Vec::new(),
            checks: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.notices.extend(other.notices);
        self.checks.extend(other.checks);
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for check in &self.checks {
            match check.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::Partial => c.partial += 1,
                Status::SkippedBudget => c.skipped += 1,
                Status::Info => c.info += 1,
            }
        }
        c
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v["counts"] = serde_json::to_value(self.counts()).expect("counts serialize");
        v
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "suite {}: category {}, fp bound {}, max size {}\n",
            self.suite, self.category, self.fp_bound, self.max_size
        );
        for n in &self.notices {
            out.push_str(&format!("notice: {n}\n"));
        }
        for c in &self.checks {
            out.push_str(&format!("{:<14} {}", c.status.as_str(), c.name));
            if !c.detail.is_empty() {
                out.push_str(&format!(": {}", c.detail));
            }
            out.push('\n');
            if let Some(v) = &c.counterexample {
                out.push_str(&format!("    counterexample: {v}\n"));
            }
            if let Some(r) = &c.repro {
                out.push_str(&format!("    reproduce: {r}\n"));
            }
        }
        let k = self.counts();
        out.push_str(&format!(
            "summary: {} PASS, {} FAIL, {} PARTIAL, {} SKIPPED-budget, {} INFO\n",
            k.pass, k.fail, k.partial, k.skipped, k.info
        ));
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed: {ms} ms\n"));
        }
        out
    }
}

/// Quotes an argument for a POSIX shell.
pub fn shell_quote(s: &str) -> String {
    if !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || "-_./=,:".contains(c))
    {
        s.to_string()
    } else {
        format!("'{}'", s.replace('\'', r"'\''"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_lists_repro_under_failures() {
        let mut r = VerificationReport::new("agreement", "set", 4, 3);
        r.push(Check::new("X0", Status::Pass, ""));
        r.push(Check::new("X1", Status::Fail, "sizes differ").with_repro("codensity verify x"));
        let text = r.render_text();
        assert!(
            text.contains("FAIL           X1: sizes differ\n    reproduce: codensity verify x\n")
        );
        assert!(text.ends_with("summary: 1 PASS, 1 FAIL, 0 PARTIAL, 0 SKIPPED-budget, 0 INFO\n"));
        assert!(r.has_failures());
    }

    #[test]
    fn quoting() {
        assert_eq!(shell_quote("set"), "set");
        assert_eq!(shell_quote(r#"{"a":"b c"}"#), r#"'{"a":"b c"}'"#);
        assert_eq!(shell_quote("it's"), r"'it'\''s'");
    }
}
