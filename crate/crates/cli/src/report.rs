//! Command reports: one JSON object per invocation, or aligned text with `--human`.

use std::fmt::Write as _;

use framelab_core::{json, FrameError, ToleranceProfile};
use serde::Serialize;
use serde_json::{Map, Value};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub args: Map<String, Value>,
    pub verdict: Verdict,
    pub exit_code: i32,
    pub tolerance: ToleranceProfile,
    pub checks: Vec<Check>,
    pub results: Map<String, Value>,
    pub errata: Vec<Value>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, tolerance: ToleranceProfile) -> Self {
        Self {
            command: command.to_string(),
            args: Map::new(),
            verdict: Verdict::Pass,
            exit_code: EXIT_PASS,
            tolerance,
            checks: Vec::new(),
            results: Map::new(),
            errata: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn arg(&mut self, key: &str, value: impl Serialize) {
        self.args.insert(key.to_string(), to_value(value));
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.to_string(), to_value(value));
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, residual: Option<f64>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            residual,
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn erratum(&mut self, value: impl Serialize) {
        self.errata.push(to_value(value));
    }

    /// Sets verdict and exit code from the checks.
    pub fn finish(mut self) -> Self {
        if self.checks.iter().all(|c| c.passed) {
            self.verdict = Verdict::Pass;
            self.exit_code = EXIT_PASS;
        } else {
            self.verdict = Verdict::Fail;
            self.exit_code = EXIT_FAIL;
        }
        self
    }

    /// Input errors exit 2; a violated precondition or consistency check is a failed assertion.
    pub fn failed_with(mut self, err: &FrameError) -> Self {
        (self.verdict, self.exit_code) = match err {
            FrameError::Input(_) => (Verdict::Error, EXIT_INPUT),
            _ => (Verdict::Fail, EXIT_FAIL),
        };
        self.notes.push(err.to_string());
        self
    }

    pub fn render(&self, human: bool) -> String {
        if human {
            self.to_human()
        } else {
            json::to_string(self)
        }
    }

    fn to_human(&self) -> String {
        let mut out = String::new();
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Error => "ERROR",
        };
        let _ = writeln!(out, "framelab {}: {verdict} (exit {})", self.command, self.exit_code);
        let _ = writeln!(
            out,
            "tolerance: abs {} rel {}",
            number(self.tolerance.tau_abs),
            number(self.tolerance.tau_rel)
        );
        let mut rows = Vec::new();
        flatten("", &Value::Object(self.args.clone()), &mut rows);
        section(&mut out, "arguments", &rows);
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
            for c in &self.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                let residual = c.residual.map(number).unwrap_or_default();
                let _ = writeln!(out, "  [{mark}] {:<width$}  {residual}", c.name);
            }
        }
        let mut rows = Vec::new();
        flatten("", &Value::Object(self.results.clone()), &mut rows);
        section(&mut out, "results", &rows);
        let mut rows = Vec::new();
        flatten("", &Value::Array(self.errata.clone()), &mut rows);
        section(&mut out, "errata", &rows);
        if !self.notes.is_empty() {
            let _ = writeln!(out, "notes:");
            for n in &self.notes {
                let _ = writeln!(out, "  {n}");
            }
        }
        out
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report values serialize")
}

fn number(x: f64) -> String {
    format!("{x:.16e}")
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.to_string(),
            (_, Some(u)) => u.to_string(),
            _ => number(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", inner.join(", "))
        }
        Value::Object(_) => "{..}".into(),
    }
}

/// `path = value` rows; arrays of scalars stay on one row.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                flatten(&join(k), child, rows);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array() && has_objects(x)) => {
            for (i, child) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), child, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn has_objects(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => items.iter().any(has_objects),
        _ => false,
    }
}

fn section(out: &mut String, title: &str, rows: &[(String, String)]) {
    if rows.is_empty() {
        return;
    }
    let _ = writeln!(out, "{title}:");
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    for (k, v) in rows {
        let _ = writeln!(out, "  {k:<width$}  {v}");
    }
}
