//! Run reports: CSV tables for the data, JSON for the full record.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// Fixed 17-significant-digit rendering used in every CSV cell.
pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "pass" } else { "fail" }.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.into())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: vec![],
        }
    }

    pub fn is_empty(&self) -> bool {
        self.header.is_empty()
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.header)?;
        for r in &self.rows {
            out.write_record(r.iter().map(Cell::render))?;
        }
        out.flush()?;
        Ok(())
    }
}

/// One checked inequality, with the tolerance it was tested at.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub suite: String,
    pub name: String,
    /// Human-readable form of the condition, such as `|v - t| <= tol`.
    pub relation: String,
    pub value: f64,
    pub target: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRow {
    pub label: String,
    pub value: f64,
    pub err_est: Option<f64>,
}

/// Everything a command produced.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Vec<OutputRow>,
    pub pass_fail: Vec<Assertion>,
    pub wall_time: f64,
    #[serde(skip_serializing_if = "Table::is_empty")]
    pub table: Table,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value) -> Self {
        RunReport {
            command: command.into(),
            inputs,
            outputs: vec![],
            pass_fail: vec![],
            wall_time: 0.0,
            table: Table::default(),
        }
    }

    pub fn output(&mut self, label: impl Into<String>, value: f64, err_est: Option<f64>) {
        self.outputs.push(OutputRow {
            label: label.into(),
            value,
            err_est,
        });
    }

    /// Table of `label,value,err_est` rows built from the outputs.
    pub fn outputs_table(&self) -> Table {
        let mut t = Table::new(&["label", "value", "err_est"]);
        for o in &self.outputs {
            t.push(vec![
                o.label.clone().into(),
                o.value.into(),
                o.err_est.map(Cell::Num).unwrap_or(Cell::Text(String::new())),
            ]);
        }
        t
    }

    pub fn all_passed(&self) -> bool {
        self.pass_fail.iter().all(|a| a.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_num(f64::NAN), "NaN");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
        // 17 significant digits round-trip.
        let v = std::f64::consts::PI;
        assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
    }

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(&["f", "value"]);
        t.push(vec!["indicator(0,1)".into(), 0.5.into()]);
        let mut buf = vec![];
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "f,value\n\"indicator(0,1)\",5.0000000000000000e-1\n");
    }
}
