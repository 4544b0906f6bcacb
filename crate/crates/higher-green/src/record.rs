//! Machine-readable run records for the command surface.

use serde::Serialize;
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

/// One verification line: a named quantity with pass/fail.
#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
}

/// Record of one command invocation. Numbers are carried as decimal strings
/// so the JSON never depends on float formatting behavior.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub schema_version: u32,
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub exact_results: Vec<(String, String)>,
    /// (name, value, error bound) as decimal strings
    pub numeric_results: Vec<(String, String, String)>,
    pub checks: Vec<CheckItem>,
    /// wall time is execution noise: skipped in JSON so identical
    /// invocations serialize byte-identically
    #[serde(skip)]
    pub wall_time_ms: u128,
}

impl RunRecord {
    pub fn new(command: &str) -> Self {
        RunRecord {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            inputs: Vec::new(),
            exact_results: Vec::new(),
            numeric_results: Vec::new(),
            checks: Vec::new(),
            wall_time_ms: 0,
        }
    }

    pub fn input(&mut self, name: &str, value: impl ToString) {
        self.inputs.push((name.to_string(), value.to_string()));
    }

    pub fn exact(&mut self, name: &str, value: impl ToString) {
        self.exact_results
            .push((name.to_string(), value.to_string()));
    }

    pub fn numeric(&mut self, name: &str, value: impl ToString, bound: impl ToString) {
        self.numeric_results
            .push((name.to_string(), value.to_string(), bound.to_string()));
    }

    pub fn check(&mut self, name: &str, pass: bool) {
        self.checks.push(CheckItem {
            name: name.to_string(),
            pass,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn finish(&mut self, started: Instant) {
        self.wall_time_ms = started.elapsed().as_millis();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("record serializes")
    }

    /// Human-readable table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if !self.inputs.is_empty() {
            out.push_str("inputs:\n");
            for (k, v) in &self.inputs {
                out.push_str(&format!("  {:<24} {}\n", k, v));
            }
        }
        if !self.exact_results.is_empty() {
            out.push_str("exact results:\n");
            for (k, v) in &self.exact_results {
                out.push_str(&format!("  {:<24} {}\n", k, v));
            }
        }
        if !self.numeric_results.is_empty() {
            out.push_str("numeric results:\n");
            for (k, v, b) in &self.numeric_results {
                out.push_str(&format!("  {:<24} {}  (bound {})\n", k, v, b));
            }
        }
        if !self.checks.is_empty() {
            out.push_str("checks:\n");
            for c in &self.checks {
                out.push_str(&format!(
                    "  [{}] {}\n",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name
                ));
            }
        }
        out.push_str(&format!("wall time: {} ms\n", self.wall_time_ms));
        out
    }
}

/// Format a float with enough digits for the working precision, in a way
/// that is deterministic for fixed inputs.
pub fn float_string(f: &rug::Float) -> String {
    let digits = (f.prec() as f64 * 0.301).ceil() as usize + 2;
    
    f.to_string_radix(10, Some(digits))
}

pub fn complex_string(c: &crate::hp::HPComplex) -> String {
    format!("{} + {}*i", float_string(&c.re), float_string(&c.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_is_deterministic_and_skips_wall_time() {
        let mut r1 = RunRecord::new("torsion");
        r1.exact("N", 2);
        r1.check("N = 2", true);
        r1.wall_time_ms = 123;
        let mut r2 = r1.clone();
        r2.wall_time_ms = 456;
        assert_eq!(r1.to_json(), r2.to_json());
        assert!(r1.to_json().contains("schema_version"));
        assert!(!r1.to_json().contains("wall_time"));
    }
}
