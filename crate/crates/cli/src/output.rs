//! Rendering of tables and single records as text, CSV or JSON.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{Map, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    /// Digits as printed in the reference tables.
    Printed,
    /// Shortest representation that round-trips.
    Full,
}

/// How a float is shown at printed precision.
#[derive(Debug, Clone, Copy)]
pub enum Style {
    Fixed(usize),
    /// Significant digits in fixed notation.
    Significant(usize),
    /// Five decimals, or two significant digits in scientific notation
    /// below 1e-3.
    PValue,
    /// Three decimals, scientific beyond a million.
    Ratio,
}

#[derive(Debug, Clone)]
pub enum Value {
    Int(u64),
    Float(f64, Style),
    Text(String),
    Bool(bool),
    Null,
}

impl Value {
    pub fn float(x: f64, style: Style) -> Self {
        Value::Float(x, style)
    }

    pub fn opt(x: Option<f64>, style: Style) -> Self {
        x.map_or(Value::Null, |x| Value::Float(x, style))
    }

    fn render(&self, precision: Precision, format: Format) -> String {
        match self {
            Value::Int(i) if format == Format::Text => with_separators(*i),
            Value::Int(i) => i.to_string(),
            Value::Float(x, style) => render_float(*x, *style, precision),
            Value::Text(s) => s.clone(),
            Value::Bool(true) => "yes".into(),
            Value::Bool(false) => "no".into(),
            Value::Null if format == Format::Text => "-".into(),
            Value::Null => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Int(i) => Json::from(*i),
            Value::Float(x, _) if x.is_finite() => Json::from(*x),
            Value::Float(x, _) if x.is_nan() => Json::from("nan"),
            Value::Float(x, _) => Json::from(if *x > 0.0 { "inf" } else { "-inf" }),
            Value::Text(s) => Json::from(s.as_str()),
            Value::Bool(b) => Json::from(*b),
            Value::Null => Json::Null,
        }
    }

    fn is_numeric(&self) -> bool {
        matches!(self, Value::Int(_) | Value::Float(..))
    }
}

fn render_float(x: f64, style: Style, precision: Precision) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if precision == Precision::Full {
        return format!("{x:?}");
    }
    match style {
        Style::Fixed(d) => format!("{x:.d$}"),
        Style::Significant(s) => evsc_core::tables::format_significant(x, s),
        Style::PValue if x != 0.0 && x.abs() < 1e-3 => format!("{x:.1e}"),
        Style::PValue => format!("{x:.5}"),
        Style::Ratio if x.abs() >= 1e6 => format!("{x:.3e}"),
        Style::Ratio => format!("{x:.3}"),
    }
}

fn with_separators(i: u64) -> String {
    let digits = i.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (pos, ch) in digits.chars().enumerate() {
        if pos > 0 && (digits.len() - pos) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Rows sharing a set of columns.
#[derive(Debug, Clone)]
pub struct Table {
    pub title: Option<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { title: None, columns, rows: Vec::new(), notes: Vec::new() }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, precision: Precision) -> String {
        match format {
            Format::Text => self.text(precision),
            Format::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(|v| csv_field(&v.render(precision, format))).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Json> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Json> =
                            self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.to_json())).collect();
                        Json::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_string_pretty(&Json::Array(rows)).expect("serializable");
                out.push('\n');
                out
            }
        }
    }

    fn text(&self, precision: Precision) -> String {
        let cells: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.iter().map(|v| v.render(precision, Format::Text)).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| cells.iter().map(|r| r[i].chars().count()).chain([self.columns[i].len()]).max().unwrap_or(0))
            .collect();
        let numeric: Vec<bool> = (0..self.columns.len())
            .map(|i| self.rows.iter().all(|r| r[i].is_numeric() || matches!(r[i], Value::Null)))
            .collect();
        let mut out = String::new();
        if let Some(title) = &self.title {
            writeln!(out, "{title}").unwrap();
            writeln!(out).unwrap();
        }
        let line = |out: &mut String, items: &[String]| {
            let padded: Vec<String> = items
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let w = widths[i];
                    if numeric[i] {
                        format!("{s:>w$}")
                    } else {
                        format!("{s:<w$}")
                    }
                })
                .collect();
            writeln!(out, "{}", padded.join("  ").trim_end()).unwrap();
        };
        let header: Vec<String> = self.columns.iter().map(|c| c.to_string()).collect();
        line(&mut out, &header);
        let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
        line(&mut out, &rule);
        for row in &cells {
            line(&mut out, row);
        }
        if !self.notes.is_empty() {
            writeln!(out).unwrap();
            for note in &self.notes {
                writeln!(out, "{note}").unwrap();
            }
        }
        out
    }
}

/// A single flat record of named values.
#[derive(Debug, Clone, Default)]
pub struct Record {
    pub fields: Vec<(&'static str, Value)>,
}

impl Record {
    pub fn add(&mut self, key: &'static str, value: Value) -> &mut Self {
        self.fields.push((key, value));
        self
    }

    pub fn render(&self, format: Format, precision: Precision) -> String {
        match format {
            Format::Text => {
                let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                let mut out = String::new();
                for (k, v) in &self.fields {
                    writeln!(out, "{k:<width$}  {}", v.render(precision, format)).unwrap();
                }
                out
            }
            Format::Csv => {
                let mut table = Table::new(self.fields.iter().map(|(k, _)| *k).collect());
                table.push(self.fields.iter().map(|(_, v)| v.clone()).collect());
                table.render(format, precision)
            }
            Format::Json => {
                let obj: Map<String, Json> = self.fields.iter().map(|(k, v)| (k.to_string(), v.to_json())).collect();
                let mut out = serde_json::to_string_pretty(&Json::Object(obj)).expect("serializable");
                out.push('\n');
                out
            }
        }
    }
}
