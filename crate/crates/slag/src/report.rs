use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::ConfigEcho;
use crate::error::{ExitCode, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One named pass/fail decision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub mandatory: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
            mandatory: true,
            value: None,
            threshold: None,
            detail: None,
        }
    }

    /// Passes iff `value <= threshold` (NaN fails).
    pub fn bound(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            value: Some(value),
            threshold: Some(threshold),
            ..Check::flag(name, value <= threshold)
        }
    }

    /// Passes iff `value > threshold`.
    pub fn above(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            value: Some(value),
            threshold: Some(threshold),
            ..Check::flag(name, value > threshold)
        }
    }

    pub fn informational(mut self) -> Self {
        self.mandatory = false;
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub count: usize,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Self {
        let mut v: Vec<f64> = values.to_vec();
        v.sort_by(f64::total_cmp);
        match v.len() {
            0 => Stats {
                count: 0,
                min: f64::NAN,
                median: f64::NAN,
                max: f64::NAN,
            },
            n => Stats {
                count: n,
                min: v[0],
                median: v[n / 2],
                max: v[n - 1],
            },
        }
    }
}

/// Structured result of one command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub config: ConfigEcho,
    pub checks: Vec<Check>,
    pub statistics: BTreeMap<String, Stats>,
    pub details: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
    /// Seconds per stage; excluded from determinism comparisons.
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(command: &str, config: ConfigEcho) -> Self {
        Report {
            command: command.to_string(),
            status: Status::Pass,
            label: None,
            config,
            checks: Vec::new(),
            statistics: BTreeMap::new(),
            details: BTreeMap::new(),
            notes: Vec::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        if check.mandatory && !check.passed {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    pub fn stat(&mut self, name: &str, values: &[f64]) {
        self.statistics.insert(name.to_string(), Stats::of(values));
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn exit_code(&self) -> ExitCode {
        if self.passed() {
            ExitCode::Pass
        } else {
            ExitCode::VerificationFailed
        }
    }

    /// The report without timings, for reproducibility comparisons.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.timings.clear();
        Ok(serde_json::to_string_pretty(&copy)?)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(dir.join("report.json"), text)?;
        Ok(())
    }

    /// Human-readable summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let label = self
            .label
            .as_deref()
            .map(|l| format!(" [{l}]"))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "{}{}: {}",
            self.command,
            label,
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            let tag = match (c.passed, c.mandatory) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "info",
            };
            let _ = write!(s, "  {tag} {}", c.name);
            if let (Some(v), Some(t)) = (c.value, c.threshold) {
                let _ = write!(s, " ({v:.3e} vs {t:.1e})");
            }
            if let Some(d) = &c.detail {
                let short: String = d.chars().take(96).collect();
                let ellipsis = if short.len() < d.len() { "..." } else { "" };
                let _ = write!(s, " - {short}{ellipsis}");
            }
            s.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;

    #[test]
    fn status_follows_mandatory_checks() {
        let mut r = Report::new("x", RunConfig::default().echo());
        r.push(Check::bound("a", 1.0, 2.0));
        r.push(Check::bound("b", 3.0, 2.0).informational());
        assert!(r.passed());
        r.push(Check::bound("c", f64::NAN, 2.0));
        assert_eq!(r.status, Status::Fail);
        assert!(r.summary().contains("FAIL c"));
    }

    #[test]
    fn stats_median() {
        let s = Stats::of(&[3.0, 1.0, 2.0]);
        assert_eq!((s.min, s.median, s.max, s.count), (1.0, 2.0, 3.0, 3));
    }
}
