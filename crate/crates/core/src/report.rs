//! Run reports and their CSV and table renderings.
//!
//! CSV output starts with `# key: value` metadata lines, followed by one
//! header row and the data rows. Floating-point cells use the shortest
//! representation that round-trips (`{:e}`), so identical inputs give
//! byte-identical files.

use std::io::Write;

use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn human(&self) -> String {
        match self {
            Cell::Num(x) => format_short(*x),
            _ => self.csv(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Int(b as i64)
    }
}

/// Shortest round-trip exponent form; `NaN`, `inf` and `-inf` spelled out.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:e}")
    }
}

/// Six significant digits with trailing zeros removed, e.g. `2e-6`.
pub fn format_short(x: f64) -> String {
    if !x.is_finite() {
        return format_float(x);
    }
    let s = format!("{x:.5e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    format!("{mantissa}e{exp}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub version: &'static str,
    pub config_sha256: String,
    pub preset: Option<String>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: &'static str,
    pub provenance: Provenance,
    /// ordered `key: value` metadata
    pub notes: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// false when a validation check failed
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &'static str, provenance: Provenance, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            provenance,
            notes: Vec::new(),
            columns,
            rows: Vec::new(),
            passed: true,
        }
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.notes.push((key.into(), value.into()));
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn metadata(&self) -> Vec<(String, String)> {
        let p = &self.provenance;
        let mut out = vec![
            ("command".to_string(), self.command.to_string()),
            ("version".to_string(), p.version.to_string()),
            ("config_sha256".to_string(), p.config_sha256.clone()),
        ];
        if let Some(name) = &p.preset {
            out.push(("preset".into(), name.clone()));
        }
        if let Some(seed) = p.seed {
            out.push(("seed".into(), seed.to_string()));
        }
        out.extend(self.notes.iter().cloned());
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut out = out;
        for (k, v) in self.metadata() {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_table<W: Write>(&self, mut out: W) -> Result<()> {
        for (k, v) in self.metadata() {
            writeln!(out, "{k}: {v}")?;
        }
        writeln!(out)?;
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::human).collect()).collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.len()).collect();
        for r in &cells {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |items: Vec<&str>| -> String {
            items
                .iter()
                .zip(&widths)
                .map(|(s, w)| format!("{s:>w$}", w = *w))
                .collect::<Vec<_>>()
                .join("  ")
        };
        writeln!(out, "{}", line(self.columns.clone()))?;
        for r in &cells {
            writeln!(out, "{}", line(r.iter().map(String::as_str).collect()))?;
        }
        Ok(())
    }
}
