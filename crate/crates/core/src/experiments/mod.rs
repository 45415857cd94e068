//! Reproduction runs, sweeps and file-driven checks, producing
//! machine-readable reports.

mod commands;
mod repro;
mod sweep;

pub use commands::{check_states, check_unitaries, random_hierarchy, UnitaryCheck};
pub use repro::{repro, repro_all, ReproOptions, TheoremId};
pub use sweep::{sweep_p, SweepReport, SweepRow, SweepSummary, PUBLISHED_P_STAR};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quantity {
    pub name: String,
    pub value: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(rename = "ref", default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReproVerdict {
    Reproduced,
    Discrepancy(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub theorem: String,
    pub params: BTreeMap<String, Value>,
    pub quantities: Vec<Quantity>,
    pub verdict: ReproVerdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl ReproReport {
    pub fn new(theorem: &str) -> Self {
        Self {
            theorem: theorem.to_string(),
            params: BTreeMap::new(),
            quantities: Vec::new(),
            verdict: ReproVerdict::Reproduced,
            notes: Vec::new(),
            wall_time_s: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    fn push(&mut self, name: &str, value: Value, tol: Option<f64>, reference: Option<Value>, passed: Option<bool>) -> bool {
        self.quantities.push(Quantity {
            name: name.to_string(),
            value,
            tol,
            reference,
            passed,
        });
        passed.unwrap_or(true)
    }

    /// Reported without a pass/fail judgement.
    pub fn info(&mut self, name: &str, value: impl Into<Value>) {
        self.push(name, value.into(), None, None, None);
    }

    /// `|value - reference| <= tol`.
    pub fn close(&mut self, name: &str, value: f64, reference: f64, tol: f64) -> bool {
        let ok = (value - reference).abs() <= tol;
        self.push(name, value.into(), Some(tol), Some(reference.into()), Some(ok))
    }

    /// `value <= limit + tol`.
    pub fn at_most(&mut self, name: &str, value: f64, limit: f64, tol: f64) -> bool {
        let ok = value <= limit + tol;
        self.push(name, value.into(), Some(tol), Some(Value::from(format!("<= {limit}"))), Some(ok))
    }

    /// `value >= limit - tol`.
    pub fn at_least(&mut self, name: &str, value: f64, limit: f64, tol: f64) -> bool {
        let ok = value >= limit - tol;
        self.push(name, value.into(), Some(tol), Some(Value::from(format!(">= {limit}"))), Some(ok))
    }

    pub fn expect<T: Into<Value> + PartialEq>(&mut self, name: &str, value: T, expected: T) -> bool {
        let ok = value == expected;
        self.push(name, value.into(), None, Some(expected.into()), Some(ok))
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Sets the verdict from the checked quantities.
    pub fn finish(&mut self) -> &mut Self {
        let failed: Vec<String> = self
            .quantities
            .iter()
            .filter(|q| q.passed == Some(false))
            .map(|q| match &q.reference {
                Some(r) => format!("{}: got {}, expected {}", q.name, q.value, r),
                None => format!("{}: got {}", q.name, q.value),
            })
            .collect();
        self.verdict = if failed.is_empty() {
            ReproVerdict::Reproduced
        } else {
            ReproVerdict::Discrepancy(failed)
        };
        self
    }

    pub fn is_reproduced(&self) -> bool {
        self.verdict == ReproVerdict::Reproduced
    }

    pub fn quantity(&self, name: &str) -> Option<&Quantity> {
        self.quantities.iter().find(|q| q.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "== {} ==", self.theorem);
        for (k, v) in &self.params {
            let _ = writeln!(out, "  {k} = {v}");
        }
        let width = self.quantities.iter().map(|q| q.name.len()).max().unwrap_or(0);
        for q in &self.quantities {
            let status = match q.passed {
                Some(true) => "ok  ",
                Some(false) => "FAIL",
                None => "    ",
            };
            let mut line = format!("  {status} {:width$}  {}", q.name, q.value);
            if let Some(r) = &q.reference {
                let _ = write!(line, "  (ref {r}");
                if let Some(t) = q.tol {
                    let _ = write!(line, ", tol {t:e}");
                }
                line.push(')');
            }
            let _ = writeln!(out, "{line}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        match &self.verdict {
            ReproVerdict::Reproduced => {
                let _ = writeln!(out, "  verdict: reproduced");
            }
            ReproVerdict::Discrepancy(d) => {
                let _ = writeln!(out, "  verdict: discrepancy");
                for line in d {
                    let _ = writeln!(out, "    - {line}");
                }
            }
        }
        if let Some(t) = self.wall_time_s {
            let _ = writeln!(out, "  wall time: {t:.3} s");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_checks() {
        let mut r = ReproReport::new("x");
        r.close("a", 1.0, 1.0 + 1e-13, 1e-12);
        r.info("b", "text");
        r.finish();
        assert!(r.is_reproduced());
        r.at_most("c", 2.0, 1.0, 0.5);
        r.finish();
        assert!(matches!(r.verdict, ReproVerdict::Discrepancy(ref d) if d.len() == 1));
        let json = r.to_json();
        assert!(json.contains("\"ref\""));
        assert!(json.contains("\"discrepancy\""));
    }
}
