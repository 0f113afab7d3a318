//! Flat, ordered result records and their JSON / CSV / text renderings.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Ints(Vec<i64>),
    Vectors(Vec<[f64; 3]>),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Float(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v as i64)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

fn serialize_float<S: Serializer>(v: f64, s: S) -> Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(format_float(v)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

struct Float(f64);

impl Serialize for Float {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_float(self.0, s)
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Field::Float(v) => serialize_float(*v, s),
            Field::Int(v) => s.serialize_i64(*v),
            Field::Bool(v) => s.serialize_bool(*v),
            Field::Text(v) => s.serialize_str(v),
            Field::Ints(vs) => vs.serialize(s),
            Field::Vectors(vs) => {
                let mut seq = s.serialize_seq(Some(vs.len()))?;
                for v in vs {
                    seq.serialize_element(&v.map(Float))?;
                }
                seq.end()
            }
        }
    }
}

impl Field {
    fn plain(&self) -> String {
        match self {
            Field::Float(v) => format_float(*v),
            Field::Int(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(v) => v.clone(),
            Field::Ints(vs) => vs.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
            Field::Vectors(vs) => vs
                .iter()
                .map(|v| v.map(format_float).join(" "))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }

    fn csv(&self) -> String {
        let text = self.plain();
        if text.contains([',', '"', '\n']) {
            format!("\"{}\"", text.replace('"', "\"\""))
        } else {
            text
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Record(Vec<(String, Field)>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.push(key, value);
        self
    }

    pub fn push(&mut self, key: &str, value: impl Into<Field>) {
        self.0.push((key.to_string(), value.into()));
    }

    fn keys(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(k, _)| k.as_str())
    }
}

impl Serialize for Record {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// A command's result: summary fields, optional table rows, pass/fail.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summary: Record,
    pub rows: Vec<Record>,
    pub pass: bool,
}

impl Report {
    pub fn single(summary: Record, pass: bool) -> Self {
        Self {
            summary,
            rows: Vec::new(),
            pass,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    fn full_summary(&self) -> Record {
        let mut out = self.summary.clone();
        out.push("pass", self.pass);
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("records serialize");
        text.push('\n');
        text
    }

    pub fn to_csv(&self) -> String {
        let table: Vec<Record> = if self.rows.is_empty() {
            vec![self.full_summary()]
        } else {
            self.rows.clone()
        };
        let mut out = table[0].keys().collect::<Vec<_>>().join(",");
        out.push('\n');
        for row in &table {
            out.push_str(
                &row.0
                    .iter()
                    .map(|(_, v)| v.csv())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let summary = self.full_summary();
        let width = summary.keys().map(str::len).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &summary.0 {
            out.push_str(&format!("{k:<width$}  {}\n", v.plain()));
        }
        if let Some(first) = self.rows.first() {
            out.push('\n');
            out.push_str(&first.keys().collect::<Vec<_>>().join("\t"));
            out.push('\n');
            for row in &self.rows {
                out.push_str(
                    &row.0
                        .iter()
                        .map(|(_, v)| v.plain())
                        .collect::<Vec<_>>()
                        .join("\t"),
                );
                out.push('\n');
            }
        }
        out
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let summary = self.full_summary();
        let extra = usize::from(!self.rows.is_empty());
        let mut map = s.serialize_map(Some(summary.0.len() + extra))?;
        for (k, v) in &summary.0 {
            map.serialize_entry(k, v)?;
        }
        if !self.rows.is_empty() {
            map.serialize_entry("rows", &self.rows)?;
        }
        map.end()
    }
}
