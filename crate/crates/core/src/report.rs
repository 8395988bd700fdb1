//! Check reports: canonical text for terminals and a versioned JSON schema.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    InconclusiveWithinBounds,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::InconclusiveWithinBounds => "inconclusive-within-bounds",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            residual: None,
            witness: None,
            value: None,
            detail: None,
        }
    }

    /// A failed check; the residual must be non-empty.
    pub fn fail(name: impl Into<String>, residual: impl Into<String>) -> Self {
        let residual = residual.into();
        debug_assert!(!residual.is_empty());
        Check { status: Status::Fail, residual: Some(residual), ..Check::pass(name) }
    }

    pub fn inconclusive(name: impl Into<String>) -> Self {
        Check { status: Status::InconclusiveWithinBounds, ..Check::pass(name) }
    }

    /// `pass` if `residual` is `"0"`, otherwise `fail` carrying it.
    pub fn zero(name: impl Into<String>, residual: String) -> Self {
        if residual == "0" {
            Check::pass(name)
        } else {
            Check::fail(name, residual)
        }
    }

    pub fn with_value(mut self, v: impl Into<serde_json::Value>) -> Self {
        self.value = Some(v.into());
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

/// A named output value (for instance one Euler-Lagrange component).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Output {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub model_hash: Option<String>,
    pub outputs: Vec<Output>,
    pub checks: Vec<Check>,
    timing: BTreeMap<String, f64>,
}

#[derive(Serialize)]
struct Json<'a> {
    schema: u32,
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    model_hash: Option<&'a str>,
    summary: Summary,
    #[serde(skip_serializing_if = "<[Output]>::is_empty")]
    outputs: &'a [Output],
    checks: &'a [Check],
    timing: &'a BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report { command: command.into(), ..Report::default() }
    }

    pub fn with_model_text(mut self, canonical_text: &str) -> Self {
        self.model_hash = Some(hash_text(canonical_text));
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn push_timed(&mut self, check: Check, elapsed: Duration) {
        self.timing.insert(check.name.clone(), elapsed.as_secs_f64() * 1e3);
        self.checks.push(check);
    }

    pub fn record_time(&mut self, name: impl Into<String>, elapsed: Duration) {
        self.timing.insert(name.into(), elapsed.as_secs_f64() * 1e3);
    }

    pub fn output(&mut self, name: impl Into<String>, value: impl Into<String>) {
        self.outputs.push(Output { name: name.into(), value: value.into() });
    }

    pub fn summary(&self) -> Summary {
        let mut s = Summary::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::InconclusiveWithinBounds => s.inconclusive += 1,
            }
        }
        s
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    /// Pretty JSON. Everything except the `timing` object is deterministic.
    pub fn to_json(&self) -> String {
        let j = Json {
            schema: SCHEMA_VERSION,
            tool: "kt",
            version: env!("CARGO_PKG_VERSION"),
            command: &self.command,
            model_hash: self.model_hash.as_deref(),
            summary: self.summary(),
            outputs: &self.outputs,
            checks: &self.checks,
            timing: &self.timing,
        };
        let mut s = serde_json::to_string_pretty(&j).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable text without timing.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for o in &self.outputs {
            let _ = writeln!(s, "{} = {}", o.name, o.value);
        }
        for c in &self.checks {
            let _ = write!(s, "[{}] {}", c.status.as_str(), c.name);
            if let Some(v) = &c.value {
                let _ = write!(s, " = {v}");
            }
            s.push('\n');
            if let Some(r) = &c.residual {
                let _ = writeln!(s, "    residual: {r}");
            }
            if let Some(w) = &c.witness {
                let _ = writeln!(s, "    witness: {w}");
            }
            if let Some(d) = &c.detail {
                let _ = writeln!(s, "    {d}");
            }
        }
        if !self.checks.is_empty() {
            let sm = self.summary();
            let _ = writeln!(
                s,
                "summary: {} pass, {} fail, {} inconclusive-within-bounds",
                sm.pass, sm.fail, sm.inconclusive
            );
        }
        s
    }
}

pub fn hash_text(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut r = Report::new("check");
        r.push(Check::pass("a"));
        r.push_timed(Check::fail("b", "-1*y"), Duration::from_millis(3));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["summary"]["fail"], 1);
        assert_eq!(v["checks"][1]["status"], "fail");
        assert_eq!(v["checks"][1]["residual"], "-1*y");
        assert!(v["checks"][0].get("residual").is_none());
        assert!(v["timing"]["b"].is_number());
        assert!(r.has_failures());
    }

    #[test]
    fn inconclusive_is_kebab_case() {
        let s = serde_json::to_string(&Status::InconclusiveWithinBounds).unwrap();
        assert_eq!(s, "\"inconclusive-within-bounds\"");
    }

    #[test]
    fn text_has_no_timing() {
        let mut r = Report::new("x");
        r.push_timed(Check::pass("a"), Duration::from_millis(5));
        assert_eq!(r.to_text(), "[pass] a\nsummary: 1 pass, 0 fail, 0 inconclusive-within-bounds\n");
    }
}
