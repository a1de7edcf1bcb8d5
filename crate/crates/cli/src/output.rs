//! Tabular output as CSV (header always present) or a JSON array of objects.

use lrp_core::numfmt::format_sig;
use serde_json::{Map, Number, Value};

use crate::config::OutputFormat;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Real(f64),
    /// An input echoed back: integral values print without a fraction.
    Input(f64),
    Bool(bool),
    Text(String),
    Empty,
}

pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn row(mut self, cells: Vec<Cell>) -> Self {
        assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
        self
    }

    pub fn render(&self, format: OutputFormat, digits: usize) -> String {
        match format {
            OutputFormat::Csv => self.csv(digits),
            OutputFormat::Json => self.json(digits),
        }
    }

    fn csv(&self, digits: usize) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| text(c, digits)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn json(&self, digits: usize) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (k, c) in self.header.iter().zip(row) {
                    obj.insert((*k).to_string(), json(c, digits));
                }
                Value::Object(obj)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable");
        s.push('\n');
        s
    }
}

fn input_text(x: f64, digits: usize) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format_sig(x, digits)
    }
}

fn text(c: &Cell, digits: usize) -> String {
    match c {
        Cell::Int(n) => n.to_string(),
        Cell::Real(x) => format_sig(*x, digits),
        Cell::Input(x) => input_text(*x, digits),
        Cell::Bool(b) => b.to_string(),
        Cell::Text(s) => s.clone(),
        Cell::Empty => String::new(),
    }
}

fn json(c: &Cell, digits: usize) -> Value {
    let real = |s: String| s.parse::<f64>().ok().and_then(Number::from_f64).map_or(Value::Null, Value::Number);
    match c {
        Cell::Int(n) => i64::try_from(*n).map_or_else(|_| Value::String(n.to_string()), |v| Value::Number(v.into())),
        Cell::Real(x) => real(format_sig(*x, digits)),
        Cell::Input(x) => real(input_text(*x, digits)),
        Cell::Bool(b) => Value::Bool(*b),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Empty => Value::Null,
    }
}
