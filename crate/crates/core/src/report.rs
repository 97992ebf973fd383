//! Text, CSV and JSON rendering of reports.
//!
//! Text prints 6 significant digits, CSV 12, JSON the shortest exact
//! representation. Values that would underflow in linear space are formatted
//! from their logs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curvature::SectionalEstimate;
use crate::error::{Error, Result};
use crate::known_bounds::ComparisonRow;
use crate::volume::{BoundReport, BracketConvention, RadiusChoice, SymmetryBound};
use crate::wang::WangReport;

pub const TEXT_DIGITS: usize = 6;
pub const CSV_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Domain(format!("unknown format '{s}'"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(String),
    Real(f64),
    /// A positive value given by its natural log.
    FromLog(f64),
    Text(String),
}

impl Cell {
    pub fn int(v: impl ToString) -> Self {
        Cell::Int(v.to_string())
    }

    pub fn text(v: impl ToString) -> Self {
        Cell::Text(v.to_string())
    }

    fn render(&self, digits: usize) -> String {
        match self {
            Cell::Int(s) | Cell::Text(s) => s.clone(),
            Cell::Real(x) => sci(*x, digits),
            Cell::FromLog(l) => sci_from_ln(*l, digits),
        }
    }
}

/// Scientific notation with `digits` significant digits.
pub fn sci(x: f64, digits: usize) -> String {
    if x.is_finite() {
        format!("{:.*e}", digits.saturating_sub(1), x)
    } else {
        x.to_string()
    }
}

/// Scientific notation of `e^l`, valid far outside the range of `f64`.
pub fn sci_from_ln(l: f64, digits: usize) -> String {
    let x = l.exp();
    if x.is_normal() {
        return sci(x, digits);
    }
    if !l.is_finite() {
        return sci(x, digits);
    }
    let log10 = l / std::f64::consts::LN_10;
    let mut e = log10.floor();
    let mut mantissa = format!("{:.*}", digits.saturating_sub(1), 10f64.powf(log10 - e));
    if mantissa.starts_with("10") {
        e += 1.0;
        mantissa = format!("{:.*}", digits.saturating_sub(1), 1.0);
    }
    format!("{mantissa}e{}", e as i64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Aligned columns; numbers right-aligned, text left-aligned.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|c| c.render(TEXT_DIGITS)).collect()).collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|j| cells.iter().map(|r| r[j].len()).chain([self.headers[j].len()]).max().unwrap_or(0))
            .collect();
        let left: Vec<bool> = (0..self.headers.len())
            .map(|j| self.rows.first().is_some_and(|r| matches!(r[j], Cell::Text(_))))
            .collect();
        let line = |items: &[String]| {
            let parts: Vec<String> = items
                .iter()
                .enumerate()
                .map(|(j, s)| if left[j] { format!("{:<w$}", s, w = widths[j]) } else { format!("{:>w$}", s, w = widths[j]) })
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        for r in &cells {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
        w.write_record(&self.headers).map_err(io)?;
        for r in &self.rows {
            w.write_record(r.iter().map(|c| c.render(CSV_DIGITS))).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Domain(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Domain(format!("csv: {e}")))
    }
}

/// A report that renders as a table and serializes to JSON.
pub trait Report: Serialize {
    fn table(&self) -> Table;

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Text => Ok(self.table().to_text()),
            Format::Csv => self.table().to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Domain(format!("json: {e}")))?;
                s.push('\n');
                Ok(s)
            }
        }
    }
}

const BOUND_HEADERS: [&str; 11] = [
    "n",
    "d0",
    "k0",
    "r0",
    "logV",
    "logVolSO",
    "bound",
    "log_bound",
    "closed_form_bound",
    "log_closed_form_bound",
    "consistency_gap",
];

fn bound_row(b: &BoundReport) -> Vec<Cell> {
    vec![
        Cell::int(b.n),
        Cell::int(b.d0),
        Cell::Real(b.k0),
        Cell::Real(b.r0),
        Cell::Real(b.log_v),
        Cell::Real(b.log_vol_so),
        Cell::FromLog(b.log_bound),
        Cell::Real(b.log_bound),
        Cell::FromLog(b.log_closed_form_bound),
        Cell::Real(b.log_closed_form_bound),
        Cell::Real(b.consistency_gap),
    ]
}

impl Report for BoundReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&BOUND_HEADERS);
        t.push(bound_row(self));
        t
    }
}

/// Bounds over a range of dimensions, ordered by `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundTable {
    pub convention: BracketConvention,
    pub radius: RadiusChoice,
    pub rows: Vec<BoundReport>,
}

impl Report for BoundTable {
    fn table(&self) -> Table {
        let mut t = Table::new(&BOUND_HEADERS);
        for b in &self.rows {
            t.push(bound_row(b));
        }
        t
    }
}

impl Report for SectionalEstimate {
    fn table(&self) -> Table {
        let mut t = Table::new(&["n", "samples", "restarts", "seed", "basis_max", "sampled_max", "max", "upper_bound"]);
        t.push(vec![
            Cell::int(self.n),
            Cell::int(self.samples),
            Cell::int(self.restarts),
            Cell::int(self.seed),
            Cell::Real(self.basis_max),
            Cell::Real(self.sampled_max),
            Cell::Real(self.max),
            Cell::Real(self.upper_bound),
        ]);
        t
    }
}

impl Report for WangReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&[
            "n",
            "metric",
            "c1",
            "c2",
            "c1_variance",
            "c1_isotropic",
            "computed_rg",
            "computed_rg_canonical",
            "published_rg",
            "relative_gap",
        ]);
        t.push(vec![
            Cell::int(self.n),
            Cell::text(self.metric.name()),
            Cell::Real(self.c1),
            Cell::Real(self.c2),
            Cell::Real(self.c1_variance),
            Cell::text(self.c1_isotropic),
            Cell::Real(self.computed_rg),
            Cell::Real(self.computed_rg_canonical),
            Cell::Real(self.published_rg),
            Cell::Real(self.relative_gap),
        ]);
        t
    }
}

/// Comparison values for one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub n: usize,
    pub rows: Vec<ComparisonRow>,
}

impl Report for CompareReport {
    fn table(&self) -> Table {
        let mut t = Table::new(&["kind", "label", "n", "value", "log_value"]);
        for r in &self.rows {
            t.push(vec![
                Cell::text(r.kind.name()),
                Cell::text(&r.label),
                Cell::int(r.n),
                Cell::FromLog(r.log_value),
                Cell::Real(r.log_value),
            ]);
        }
        t
    }
}

impl Report for SymmetryBound {
    fn table(&self) -> Table {
        let mut t = Table::new(&["n", "volume", "bound", "log_quotient", "isometry_order", "out_order"]);
        t.push(vec![
            Cell::int(self.n),
            Cell::Real(self.volume),
            Cell::Real(self.bound),
            Cell::Real(self.log_quotient),
            Cell::int(&self.isometry_order),
            Cell::int(&self.out_order),
        ]);
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sci_formats() {
        assert_eq!(sci(2.44058123e-6, 6), "2.44058e-6");
        assert_eq!(sci_from_ln(2.44058123e-6f64.ln(), 6), "2.44058e-6");
        assert_eq!(sci_from_ln(-1000.0, 6), "5.07596e-435");
        assert_eq!(sci_from_ln(-10.0 * std::f64::consts::LN_10 * 40.0, 3), "1.00e-400");
    }

    #[test]
    fn text_alignment() {
        let mut t = Table::new(&["name", "v"]);
        t.push(vec![Cell::text("a"), Cell::Real(1.0)]);
        t.push(vec![Cell::text("long"), Cell::Real(-2.5)]);
        let s = t.to_text();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "name           v");
        assert_eq!(lines[1], "a      1.00000e0");
        assert_eq!(lines[2], "long  -2.50000e0");
    }

    #[test]
    fn csv_quotes() {
        let mut t = Table::new(&["label", "x"]);
        t.push(vec![Cell::text("a, b"), Cell::Real(0.5)]);
        assert_eq!(t.to_csv().unwrap(), "label,x\n\"a, b\",5.00000000000e-1\n");
    }
}
