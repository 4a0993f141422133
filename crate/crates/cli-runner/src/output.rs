//! CSV tables with a one-line `#` unit header.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::Result;

pub use collision_sim::format_float;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub units: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(units: impl Into<String>, header: &[&str]) -> Self {
        Self {
            units: units.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# {}", self.units)?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Rows of `(method, quantity, value)`.
#[derive(Debug, Clone, Default)]
pub struct LongTable {
    rows: Vec<(String, String, f64)>,
}

impl LongTable {
    pub fn push(&mut self, method: &str, quantity: impl Into<String>, value: f64) {
        self.rows.push((method.to_string(), quantity.into(), value));
    }

    pub fn get(&self, method: &str, quantity: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|(m, q, _)| m == method && q == quantity)
            .map(|r| r.2)
    }

    pub fn into_table(self, units: impl Into<String>) -> Table {
        let mut t = Table::new(units, &["method", "quantity", "value"]);
        for (m, q, v) in self.rows {
            t.push(vec![m, q, format_float(v)]);
        }
        t
    }
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(table: &Table, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let f = BufWriter::new(File::create(p)?);
            table.write(f)
        }
        None => table.write(io::stdout().lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_line_then_csv() {
        let mut t = Table::new("x in m", &["a", "b"]);
        t.push(vec![format_float(0.1), format_float(-2.0)]);
        let s = t.to_csv_string();
        assert_eq!(s, "# x in m\na,b\n1.0000000000000001e-1,-2.0000000000000000e0\n");
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [std::f64::consts::PI, 1.0 / 3.0, 6.02214076e23, -1e-300] {
            let back: f64 = format_float(v).parse().unwrap();
            assert_eq!(back, v);
        }
    }
}
