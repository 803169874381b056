//! Structured reports for the CLI: family info, certificate runs, table
//! reproductions and oracle diffs, with text/JSON/TSV rendering.

use crate::rational::{fmt_rat, Rational};
use crate::wspace::QuotientType;
use serde::ser::Serializer;
use serde::Serialize;

pub fn serialize_rat<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(r))
}

pub fn serialize_opt_rat<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&fmt_rat(r)),
        None => s.serialize_none(),
    }
}

pub fn serialize_qtype<S: Serializer>(t: &QuotientType, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ReportKind {
    FamilyInfo,
    CertificateRun,
    TableReproduction,
    OracleDiff,
}

/// One row of a report: a set of labelled cells, each carrying its
/// provenance tag.
#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    pub label: String,
    pub value: String,
    pub provenance: &'static str,
}

impl Cell {
    pub fn new(label: &str, value: impl Into<String>, provenance: &'static str) -> Cell {
        Cell {
            label: label.to_string(),
            value: value.into(),
            provenance,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub kind: ReportKind,
    pub title: String,
    pub rows: Vec<Row>,
    pub provenance_summary: String,
    /// true when every verification in the report succeeded
    pub ok: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Tsv => {
                let mut out = String::new();
                for row in &self.rows {
                    let line: Vec<String> =
                        row.cells.iter().map(|c| c.value.clone()).collect();
                    out.push_str(&line.join("\t"));
                    out.push('\n');
                }
                out
            }
            Format::Text => {
                let mut out = format!("# {}\n", self.title);
                for row in &self.rows {
                    let line: Vec<String> = row
                        .cells
                        .iter()
                        .map(|c| format!("{}={}", c.label, c.value))
                        .collect();
                    out.push_str(&line.join("  "));
                    out.push('\n');
                }
                out.push_str(&format!(
                    "provenance: {}\nstatus: {}\n",
                    self.provenance_summary,
                    if self.ok { "ok" } else { "DIFF" }
                ));
                out
            }
        }
    }
}
