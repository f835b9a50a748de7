//! Machine-readable run records: named pass/fail checks plus the full report.
//!
//! Everything except `timing` is a function of the command line (including the seed).

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

pub const SCHEMA: &str = "etalift.certificate/1";

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Witness or counterexample, when there is one worth printing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Timing {
    pub wall_clock_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Certificate {
    pub fn new(command: Vec<String>, p: Option<u32>, seed: Option<u64>, result: &impl Serialize) -> Result<Self> {
        Ok(Certificate {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command,
            p,
            seed,
            checks: Vec::new(),
            passed: true,
            result: serde_json::to_value(result)?,
            timing: None,
        })
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) -> &mut Self {
        self.check_with(name, passed, None)
    }

    pub fn check_with(&mut self, name: impl Into<String>, passed: bool, detail: Option<String>) -> &mut Self {
        self.passed &= passed;
        self.checks.push(Check { name: name.into(), passed, detail });
        self
    }

    pub fn set_timing(&mut self, elapsed: Duration) {
        self.timing = Some(Timing { wall_clock_ms: elapsed.as_millis() as u64 });
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks as a table, then the scalar fields of the result.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "etalift {}  {}", self.version, self.command.join(" "));
        if let Some(p) = self.p {
            let _ = write!(out, "p = {p}");
            if let Some(s) = self.seed {
                let _ = write!(out, ", seed = {s}");
            }
            out.push('\n');
        }
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
        for c in &self.checks {
            let pad = width - c.name.chars().count();
            let _ = write!(out, "  {}{}  {}", c.name, " ".repeat(pad), if c.passed { "pass" } else { "FAIL" });
            if let Some(d) = &c.detail {
                let _ = write!(out, "  ({d})");
            }
            out.push('\n');
        }
        let (n, k) = (self.checks.len(), self.checks.iter().filter(|c| c.passed).count());
        let _ = writeln!(out, "{k}/{n} checks pass");
        render_scalars(&mut out, "", &self.result, 0);
        if let Some(t) = &self.timing {
            let _ = writeln!(out, "time: {} ms", t.wall_clock_ms);
        }
        out
    }
}

fn render_scalars(out: &mut String, key: &str, v: &Value, depth: usize) {
    if depth > 2 {
        return;
    }
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if key.is_empty() { k.clone() } else { format!("{key}.{k}") };
                render_scalars(out, &key, x, depth + 1);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) && a.len() <= 16 => {
            let items: Vec<String> = a.iter().map(scalar).collect();
            let _ = writeln!(out, "{key}: [{}]", items.join(", "));
        }
        Value::Array(a) if a.len() <= 8 => {
            for (i, x) in a.iter().enumerate() {
                render_scalars(out, &format!("{key}[{i}]"), x, depth + 1);
            }
        }
        Value::Array(a) => {
            let _ = writeln!(out, "{key}: {} entries", a.len());
        }
        x => {
            let _ = writeln!(out, "{key}: {}", scalar(x));
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        x => x.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passed_is_the_conjunction() {
        let mut c = Certificate::new(vec!["gpoly".into()], Some(2), None, &serde_json::json!({"g": ["-1"]})).unwrap();
        c.check("a", true).check("b", false);
        assert!(!c.passed);
        let text = c.to_text();
        assert!(text.contains("FAIL") && text.contains("1/2 checks pass") && text.contains("g: [-1]"));
        assert!(!c.to_json().unwrap().contains("timing"));
    }
}
