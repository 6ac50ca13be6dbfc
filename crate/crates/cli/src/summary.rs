//! Tolerance-tagged assertions and the machine-readable run summary.

use std::path::Path;

use serde::Serialize;

use crate::error::CliResult;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Tolerance {
    AtMost { limit: f64 },
    AtLeast { limit: f64 },
    /// Strict upper bound.
    Below { limit: f64 },
    Within { low: f64, high: f64 },
}

impl Tolerance {
    pub fn admits(self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        match self {
            Tolerance::AtMost { limit } => v <= limit,
            Tolerance::AtLeast { limit } => v >= limit,
            Tolerance::Below { limit } => v < limit,
            Tolerance::Within { low, high } => (low..=high).contains(&v),
        }
    }

    pub fn describe(self) -> String {
        match self {
            Tolerance::AtMost { limit } => format!("<= {limit:e}"),
            Tolerance::AtLeast { limit } => format!(">= {limit:e}"),
            Tolerance::Below { limit } => format!("< {limit:e}"),
            Tolerance::Within { low, high } => format!("in [{low}, {high}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Acceptance criterion this check belongs to.
    pub criterion: u8,
    pub value: f64,
    pub tolerance: Tolerance,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, criterion: u8, value: f64, tolerance: Tolerance) -> Self {
        Self { name: name.into(), criterion, value, tolerance, passed: tolerance.admits(value), detail: None }
    }

    pub fn at_most(name: impl Into<String>, criterion: u8, value: f64, limit: f64) -> Self {
        Self::new(name, criterion, value, Tolerance::AtMost { limit })
    }

    pub fn at_least(name: impl Into<String>, criterion: u8, value: f64, limit: f64) -> Self {
        Self::new(name, criterion, value, Tolerance::AtLeast { limit })
    }

    pub fn within(name: impl Into<String>, criterion: u8, value: f64, low: f64, high: f64) -> Self {
        Self::new(name, criterion, value, Tolerance::Within { low, high })
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        let mut s = format!("[{verdict}] {} = {:e} ({})", self.name, self.value, self.tolerance.describe());
        if let Some(d) = &self.detail {
            s.push_str(&format!("; {d}"));
        }
        s
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub seed: u64,
    pub code_version: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    /// Observations that carry no assertion, such as degenerate fits.
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Summary {
    pub fn new(experiment: &str, seed: u64) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed,
            code_version: crate::CODE_VERSION.to_string(),
            passed: false,
            checks: Vec::new(),
            notes: Vec::new(),
            warnings: Vec::new(),
            error: None,
        }
    }

    pub fn finish(&mut self) {
        self.passed = self.error.is_none() && !self.checks.is_empty() && self.checks.iter().all(|c| c.passed);
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn write_checks_csv(&self, path: &Path) -> CliResult<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["criterion", "name", "value", "tolerance", "passed"])?;
        for c in &self.checks {
            w.write_record([
                c.criterion.to_string(),
                c.name.clone(),
                format!("{:e}", c.value),
                c.tolerance.describe(),
                c.passed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerances() {
        assert!(Check::at_most("a", 1, 1e-13, 1e-12).passed);
        assert!(!Check::at_most("a", 1, f64::NAN, 1e-12).passed);
        assert!(!Check::new("b", 5, -1.0, Tolerance::Below { limit: -1.0 }).passed);
        assert!(Check::within("c", 6, 0.5, 0.45, 0.55).passed);
        let mut s = Summary::new("x", 1);
        s.finish();
        assert!(!s.passed, "a run without checks does not pass");
        s.checks.push(Check::at_least("d", 7, 0.0, 0.0));
        s.finish();
        assert!(s.passed);
    }
}
