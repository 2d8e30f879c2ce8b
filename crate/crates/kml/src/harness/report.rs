//! CSV + JSON output with machine-checkable pass/fail entries.

use crate::error::Result;
use serde::Serialize;
use serde_json::{json, Value};
use std::path::Path;

/// One verified property with its measured value and bound.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
}

impl Check {
    /// `|measured| <= bound`
    pub fn le(name: &str, measured: f64, bound: f64) -> Check {
        Check { name: name.into(), passed: measured.abs() <= bound && measured.is_finite(), measured, bound }
    }

    /// an already-evaluated predicate, with a representative value attached
    pub fn holds(name: &str, passed: bool, measured: f64) -> Check {
        Check { name: name.into(), passed, measured, bound: f64::NAN }
    }
}

/// Result of one experiment: a CSV table, a JSON summary and check entries.
#[derive(Debug)]
pub struct Report {
    pub experiment: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(experiment: &str, columns: &[&str]) -> Report {
        Report {
            experiment: experiment.into(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            summary: json!({}),
            checks: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn csv(&self) -> String {
        let mut out = format!("# kml-csv v1 experiment={}\n", self.experiment);
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> Value {
        json!({
            "experiment": self.experiment,
            "summary": self.summary,
            "checks": self.checks,
            "passed": self.passed(),
        })
    }

    /// Write `<base>.csv` and `<base>.json`.
    pub fn write(&self, base: &Path) -> Result<()> {
        if let Some(dir) = base.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        std::fs::write(base.with_extension("csv"), self.csv())?;
        std::fs::write(
            base.with_extension("json"),
            serde_json::to_string_pretty(&self.json()).expect("serializable report"),
        )?;
        Ok(())
    }

    /// One line per check, the human-readable half of the report.
    pub fn print_checks(&self) {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            if c.bound.is_nan() {
                println!("[{status}] {}: measured {:.6e}", c.name, c.measured);
            } else {
                println!("[{status}] {}: measured {:.6e} (bound {:.3e})", c.name, c.measured, c.bound);
            }
        }
    }
}
