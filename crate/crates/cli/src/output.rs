//! CSV, JSON-lines and manifest writers.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use dgtime_core::analysis::StudyReport;
use dgtime_core::stepper::StepDiagnostics;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Fixed 17-significant-digit formatting, so outputs are byte-reproducible.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Collects the files written by one run.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(io_error(root))?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn write_csv(&mut self, name: &str, header: &[String], rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush().map_err(io_error(&path))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_newton_log(&mut self, name: &str, diagnostics: &[StepDiagnostics]) -> Result<PathBuf, CliError> {
        let path = self.root.join(name);
        let mut w = BufWriter::new(File::create(&path).map_err(io_error(&path))?);
        for d in diagnostics {
            let line = serde_json::json!({
                "interval": d.interval,
                "iterations": d.iterations,
                "residuals": d.residuals,
            });
            writeln!(w, "{line}").map_err(io_error(&path))?;
        }
        w.flush().map_err(io_error(&path))?;
        self.written.push(path.clone());
        Ok(path)
    }

    /// Study table plus its `(log2 N, log2 error)` plot data.
    pub fn write_study(&mut self, stem: &str, report: &StudyReport) -> Result<(), CliError> {
        let mut header = vec!["intervals".to_string(), "step".to_string()];
        header.extend(report.columns.iter().cloned());
        header.extend(report.columns.iter().map(|c| format!("order_{c}")));
        header.extend(["newton_iterations".to_string(), "failure".to_string()]);
        let orders: Vec<Vec<f64>> = report.columns.iter().map(|c| report.orders(c).unwrap_or_default()).collect();
        let rows: Vec<Vec<String>> = report
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut out = vec![row.intervals.to_string(), fmt_f64(row.step)];
                out.extend(row.values.iter().map(|&v| fmt_f64(v)));
                out.extend(orders.iter().map(|o| if i == 0 { String::new() } else { fmt_f64(o[i - 1]) }));
                out.push(row.newton_iterations.to_string());
                out.push(row.failure.clone().unwrap_or_default());
                out
            })
            .collect();
        self.write_csv(&format!("{stem}.csv"), &header, &rows)?;

        let mut plot = Vec::new();
        for (c, name) in report.columns.iter().enumerate() {
            for row in report.rows.iter().filter(|r| r.failure.is_none()) {
                plot.push(vec![name.clone(), fmt_f64((row.intervals as f64).log2()), fmt_f64(row.values[c].log2())]);
            }
        }
        let plot_header = ["column", "log2_n", "log2_error"].map(String::from);
        self.write_csv(&format!("{stem}_plot.csv"), &plot_header, &plot)?;
        Ok(())
    }
}

/// What a run did and which files it produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Resolved configuration in config-file syntax.
    pub config: BTreeMap<String, String>,
    pub wall_clock_seconds: f64,
    pub artifacts: Vec<PathBuf>,
    /// Headline numbers such as final observed orders.
    pub summary: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text + "\n").map_err(io_error(path))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(io_error(path))?;
        Ok(serde_json::from_str(&text)?)
    }
}
