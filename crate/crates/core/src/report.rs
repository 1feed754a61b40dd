//! Report schema shared by every CLI command.
//!
//! Schema version 1: `{ schema_version, command, params, data, checks, pass }`
//! where `checks` is a list of `{ name, value, expected, tol, pass }` lines
//! and `data` carries command-specific payload. A command exits 0 exactly
//! when every check passes.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    /// |value − expected| ≤ tol.
    pub fn against(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            expected: Some(expected),
            tol,
            pass: (value - expected).abs() <= tol,
        }
    }

    /// |value| ≤ tol (a residual).
    pub fn residual(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            expected: None,
            tol,
            pass: value.abs() <= tol,
        }
    }

    /// A boolean condition, recorded with value 1/0.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self {
            name: name.into(),
            value: if ok { 1.0 } else { 0.0 },
            expected: Some(1.0),
            tol: 0.0,
            pass: ok,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub params: serde_json::Value,
    pub data: serde_json::Value,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, params: serde_json::Value, data: serde_json::Value, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            params,
            data,
            checks,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        if let Some(obj) = self.params.as_object() {
            for (k, v) in obj {
                out.push_str(&format!("  {k}: {v}\n"));
            }
        }
        if let Some(text) = self.data.get("text").and_then(|v| v.as_str()) {
            out.push_str(text);
            if !text.ends_with('\n') {
                out.push('\n');
            }
        } else if !self.data.is_null() {
            out.push_str(&serde_json::to_string_pretty(&self.data).expect("data serializes"));
            out.push('\n');
        }
        for c in &self.checks {
            let status = if c.pass { "PASS" } else { "FAIL" };
            match c.expected {
                Some(e) => out.push_str(&format!(
                    "[{status}] {}: {:.12e} (expected {:.12e}, tol {:.1e})\n",
                    c.name, c.value, e, c.tol
                )),
                None => out.push_str(&format!(
                    "[{status}] {}: residual {:.12e} (tol {:.1e})\n",
                    c.name, c.value, c.tol
                )),
            }
        }
        out.push_str(&format!("result: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,value,expected,tol,pass\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{:.17e},{},{:.3e},{}\n",
                csv_escape(&c.name),
                c.value,
                c.expected.map_or(String::new(), |e| format!("{e:.17e}")),
                c.tol,
                c.pass
            ));
        }
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render a complex matrix as row-major nested arrays of [re, im] pairs.
pub fn matrix_to_json(m: &crate::CMat) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::json!(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_evaluate() {
        assert!(Check::against("x", 1.0, 1.0 + 1e-9, 1e-8).pass);
        assert!(!Check::against("x", 1.0, 2.0, 1e-8).pass);
        assert!(Check::residual("r", -1e-9, 1e-8).pass);
        assert!(Check::flag("f", true).pass);
    }

    #[test]
    fn report_roundtrips_through_json() {
        let r = Report::new(
            "volume",
            serde_json::json!({"group": "so:3"}),
            serde_json::json!({"closed_form": 223.32}),
            vec![Check::against("volume", 223.32, 223.32, 1e-6)],
        );
        let s = r.to_json();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back.schema_version, SCHEMA_VERSION);
        assert_eq!(back.command, "volume");
        assert!(back.pass);
        assert_eq!(serde_json::to_string(&back).unwrap(), serde_json::to_string(&r).unwrap());
    }
}
