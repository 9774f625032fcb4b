//! Report model and the three output encodings.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};
use vfrac_core::bounds::InequalityReport;
use vfrac_core::taylor::IdentityReport;

use crate::config::{Format, RunConfig};
use crate::error::CliError;

pub const TOOL_NAME: &str = "vfrac";

/// One table cell. Untagged so JSON rows read naturally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Bool(bool),
    Number(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::Number(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Cell {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::Text(s)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Bool(b) => b.to_string(),
            Cell::Number(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    fn is_text(&self) -> bool {
        matches!(self, Cell::Text(_))
    }
}

/// Shortest round-trip decimal, switching to scientific notation for very
/// small or very large magnitudes.
pub fn format_number(x: f64) -> String {
    let m = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Table {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Both remainder forms at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemainderPayload {
    pub n: u32,
    pub center: f64,
    pub t: f64,
    pub series_value: f64,
    pub integral_value: f64,
    pub integral_error_estimate: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyPayload {
    pub suite: String,
    pub trials: usize,
    pub seed: u64,
    pub failures: usize,
    pub table: Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Payload {
    Table(Table),
    Remainder(RemainderPayload),
    Identity(IdentityReport),
    Inequality(InequalityReport),
    Verify(VerifyPayload),
}

impl Payload {
    /// False when a verdict or property check failed.
    pub fn passed(&self) -> bool {
        match self {
            Payload::Inequality(r) => r.holds,
            Payload::Verify(v) => v.failures == 0,
            _ => true,
        }
    }

    /// Flattened tabular view used by the CSV and text encodings.
    pub fn to_table(&self) -> Table {
        match self {
            Payload::Table(t) => t.clone(),
            Payload::Verify(v) => v.table.clone(),
            Payload::Remainder(r) => {
                let mut t = Table::new([
                    "n",
                    "center",
                    "t",
                    "series",
                    "integral",
                    "error_estimate",
                    "discrepancy",
                ]);
                t.push(vec![
                    f64::from(r.n).into(),
                    r.center.into(),
                    r.t.into(),
                    r.series_value.into(),
                    r.integral_value.into(),
                    r.integral_error_estimate.into(),
                    r.discrepancy.into(),
                ]);
                t
            }
            Payload::Identity(r) => {
                let mut t = Table::new(["n", "a", "b", "t", "lhs", "rhs", "error_estimate", "difference"]);
                t.push(vec![
                    f64::from(r.n).into(),
                    r.a.into(),
                    r.b.into(),
                    r.t.into(),
                    r.lhs.into(),
                    r.rhs.into(),
                    r.error_estimate.into(),
                    r.difference.into(),
                ]);
                t
            }
            Payload::Inequality(r) => {
                let mut t = Table::new(["name", "lhs", "rhs", "slack", "holds"]);
                t.push(vec![
                    r.name.as_str().into(),
                    r.lhs.into(),
                    r.rhs.into(),
                    r.slack.into(),
                    r.holds.into(),
                ]);
                t
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    /// The fully resolved run configuration.
    pub config: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub metadata: Metadata,
    pub payload: Payload,
}

impl Report {
    pub fn new(config: &RunConfig, payload: Payload) -> Report {
        let timestamp = config
            .output
            .timestamp
            .then(|| chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
        Report {
            metadata: Metadata {
                tool: TOOL_NAME.to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp,
                config: serde_json::to_value(config).expect("config is plain data"),
            },
            payload,
        }
    }
}

/// Encode `report` in `format`.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("report is plain data");
            text.push('\n');
            text
        }
        Format::Csv => render_csv(&report.payload.to_table()),
        Format::Table => render_text(&report.payload.to_table()),
    }
}

fn render_csv(table: &Table) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&table.columns).expect("in-memory write");
    for row in &table.rows {
        writer
            .write_record(row.iter().map(Cell::render))
            .expect("in-memory write");
    }
    let bytes = writer.into_inner().expect("in-memory flush");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

fn render_text(table: &Table) -> String {
    let cells: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|row| row.iter().map(Cell::render).collect())
        .collect();
    let mut widths: Vec<usize> = table.columns.iter().map(|c| c.chars().count()).collect();
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    // text columns are left aligned, everything else right aligned
    let left: Vec<bool> = (0..widths.len())
        .map(|j| table.rows.first().is_some_and(|r| r[j].is_text()))
        .collect();

    let mut out = String::new();
    let line = |out: &mut String, items: &[String]| {
        let mut parts = Vec::with_capacity(items.len());
        for (j, item) in items.iter().enumerate() {
            let pad = widths[j] - item.chars().count();
            parts.push(if left[j] {
                format!("{item}{}", " ".repeat(pad))
            } else {
                format!("{}{item}", " ".repeat(pad))
            });
        }
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &table.columns);
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", rule.join("  "));
    for row in &cells {
        line(&mut out, row);
    }
    out
}

/// Write the encoded report to the configured destination.
pub fn emit(report: &Report, config: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = render(report, config.output.format);
    match &config.output.path {
        Some(path) => std::fs::write(path, text).map_err(|err| CliError::Io {
            path: path.clone(),
            err,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|err| CliError::Io {
            path: "<stdout>".into(),
            err,
        }),
    }
}
