use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Command;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    NotFalsified,
    Inconclusive,
    Falsified,
    Failed,
}

impl Status {
    pub fn exit_code(self, require_certified: bool) -> i32 {
        match self {
            Status::Pass => 0,
            Status::NotFalsified if require_certified => 2,
            Status::NotFalsified => 0,
            Status::Inconclusive => 2,
            Status::Falsified | Status::Failed => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::NotFalsified => "not-falsified",
            Status::Inconclusive => "inconclusive",
            Status::Falsified => "falsified",
            Status::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Check {
    pub name: String,
    /// Which construction or bound the check exercises.
    pub anchor: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, anchor: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), anchor: anchor.into(), passed, detail: detail.into() }
    }
}

/// Everything that determines the numeric output of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Invocation {
    pub command: Command,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub require_certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub tool_version: String,
    pub invocation: Invocation,
    pub status: Status,
    pub exit_code: i32,
    pub checks: Vec<Check>,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// Wall-clock data kept out of the report so reports compare byte for byte.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Metadata {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub started_at: String,
    pub finished_at: String,
    pub elapsed_seconds: f64,
    pub threads: usize,
}

pub fn read_report(path: &Path) -> Result<Report, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Missing(format!("{}: {e}", path.display())))?;
    let report: Report = serde_json::from_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if report.schema_version != SCHEMA_VERSION {
        return Err(CliError::Data(format!("{}: schema version {} is not {SCHEMA_VERSION}", path.display(), report.schema_version)));
    }
    Ok(report)
}

/// Report files named by `paths`, with directories expanded to their
/// `*.json` files other than metadata and summaries; sorted by path.
pub fn collect(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = fs::read_dir(p).map_err(|e| CliError::Missing(format!("{}: {e}", p.display())))?;
            for entry in entries {
                let path = entry.map_err(|e| CliError::Missing(e.to_string()))?.path();
                let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
                if name.ends_with(".json") && !name.ends_with(".meta.json") && name != "summary.json" {
                    out.push(path);
                }
            }
        } else if p.exists() {
            out.push(p.clone());
        } else {
            return Err(CliError::Missing(format!("{}: no such file", p.display())));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryRow {
    pub file: String,
    pub command: String,
    pub status: Status,
    pub exit_code: i32,
    pub checks_passed: usize,
    pub checks_total: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Summary {
    pub schema_version: u32,
    pub reports: usize,
    pub exit_code: i32,
    pub rows: Vec<SummaryRow>,
    pub checks: Vec<SummaryCheck>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SummaryCheck {
    pub file: String,
    #[serde(flatten)]
    pub check: Check,
}

/// Worst exit code over the reports: 1 beats 2 beats 0.
fn roll_up(codes: impl Iterator<Item = i32>) -> i32 {
    codes.fold(0, |acc, c| match (acc, c) {
        (1, _) | (_, 1) => 1,
        (0, c) => c,
        (a, 0) => a,
        (a, c) => a.max(c),
    })
}

pub fn summarize(files: &[PathBuf]) -> Result<Summary, CliError> {
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for f in files {
        let r = read_report(f)?;
        let file = f.display().to_string();
        rows.push(SummaryRow {
            file: file.clone(),
            command: r.invocation.command.name().into(),
            status: r.status,
            exit_code: r.exit_code,
            checks_passed: r.checks.iter().filter(|c| c.passed).count(),
            checks_total: r.checks.len(),
        });
        checks.extend(r.checks.into_iter().map(|check| SummaryCheck { file: file.clone(), check }));
    }
    let exit_code = roll_up(rows.iter().map(|r| r.exit_code));
    Ok(Summary { schema_version: SCHEMA_VERSION, reports: rows.len(), exit_code, rows, checks })
}

pub fn render(summary: &Summary) -> String {
    let mut s = format!("{:<40} {:<12} {:<14} {:>4} {:>7}\n", "file", "command", "status", "exit", "checks");
    for r in &summary.rows {
        s += &format!(
            "{:<40} {:<12} {:<14} {:>4} {:>7}\n",
            r.file,
            r.command,
            r.status.label(),
            r.exit_code,
            format!("{}/{}", r.checks_passed, r.checks_total)
        );
    }
    if !summary.checks.is_empty() {
        s.push('\n');
    }
    for c in &summary.checks {
        let mark = if c.check.passed { "pass" } else { "FAIL" };
        s += &format!("[{mark}] {} :: {} ({}) {}\n", c.file, c.check.name, c.check.anchor, c.check.detail);
    }
    s += &format!("\noverall: exit {} over {} report(s)\n", summary.exit_code, summary.reports);
    s
}

pub fn summary_csv(summary: &Summary) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["file", "command", "status", "exitCode", "checksPassed", "checksTotal"]).map_err(CliError::from_csv)?;
    for r in &summary.rows {
        w.write_record([
            r.file.clone(),
            r.command.clone(),
            r.status.label().to_string(),
            r.exit_code.to_string(),
            r.checks_passed.to_string(),
            r.checks_total.to_string(),
        ])
        .map_err(CliError::from_csv)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}
