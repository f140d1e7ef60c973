//! Reports: a JSON document for machines and a plain table for people.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use opbar::verify::Check;
use opbar::CoeffField;
use serde::Serialize;

/// The configuration a result was computed under, embedded in every report
/// so that truncated results are never mistaken for exact ones.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub field: CoeffField,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_degree: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operad: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Provenance {
    pub fn new(command: &str, field: CoeffField) -> Self {
        Provenance {
            tool: "opbar",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            field,
            grading: None,
            min_degree: None,
            max_degree: None,
            weight_bound: None,
            iterations: None,
            arity: None,
            operad: None,
            input: None,
            suite: None,
            seed: None,
            note: None,
        }
    }
}

/// A table of dimensions per degree.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub degrees: BTreeMap<i64, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<serde_json::Value>,
    pub provenance: Provenance,
}

impl DegreeReport {
    pub fn table(&self, title: &str) -> String {
        let mut out = String::new();
        let p = &self.provenance;
        let _ = writeln!(out, "{title} over {}", p.field);
        let mut bounds = Vec::new();
        if let (Some(lo), Some(hi)) = (p.min_degree, p.max_degree) {
            bounds.push(format!("degrees {lo}..{hi}"));
        }
        if let Some(g) = p.grading {
            bounds.push(format!("{g} grading"));
        }
        if let Some(w) = p.weight_bound {
            bounds.push(format!("weight bound {w}"));
        }
        if !bounds.is_empty() {
            let _ = writeln!(out, "{}", bounds.join(", "));
        }
        let width = self.degrees.keys().map(|d| d.to_string().len()).max().unwrap_or(1).max("degree".len());
        let _ = writeln!(out, "{:>width$}  dim", "degree");
        for (d, k) in &self.degrees {
            let _ = writeln!(out, "{d:>width$}  {k}");
        }
        if let Some(n) = &p.note {
            let _ = writeln!(out, "{n}");
        }
        out
    }
}

/// Outcome of a verification run.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub provenance: Provenance,
}

impl VerifyReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status}  [{}] {}  ({})", c.suite, c.name, c.reference);
            if let Some(f) = &c.failure {
                let _ = writeln!(out, "      {f}");
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed}/{} checks passed", self.checks.len());
        out
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}
