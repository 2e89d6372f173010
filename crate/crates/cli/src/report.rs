//! Run reports: ordered results plus enough metadata to reproduce them.

use std::fmt::Write as _;

use serde_json::{json, Map, Value as Json};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = concat!("bell ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Vector(Vec<f64>),
    Table(Table),
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<i32> for Value {
    fn from(v: i32) -> Self {
        Value::Int(v.into())
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table { columns: columns.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Hash of everything a command read: its name, arguments and file bytes.
pub struct InputDigest(Sha256);

impl InputDigest {
    pub fn new(command: &str) -> Self {
        let mut d = InputDigest(Sha256::new());
        d.add("command", command.as_bytes());
        d
    }

    pub fn add(&mut self, name: &str, bytes: &[u8]) -> &mut Self {
        for part in [name.as_bytes(), bytes] {
            self.0.update((part.len() as u64).to_le_bytes());
            self.0.update(part);
        }
        self
    }

    pub fn arg(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.add(name, value.to_string().as_bytes())
    }

    pub fn finish(self) -> String {
        format!("sha256:{:x}", self.0.finalize())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub results: Vec<(String, Value)>,
    pub tool_version: String,
    pub seed: Option<u64>,
}

impl RunReport {
    pub fn new(command: &str, digest: InputDigest, seed: Option<u64>) -> Self {
        RunReport {
            command: command.to_string(),
            inputs_digest: digest.finish(),
            results: Vec::new(),
            tool_version: TOOL_VERSION.to_string(),
            seed,
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.results.push((key.into(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.results.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn to_json(&self) -> Json {
        let results: Map<String, Json> = self.results.iter().map(|(k, v)| (k.clone(), value_json(v))).collect();
        json!({
            "command": self.command,
            "inputsDigest": self.inputs_digest,
            "toolVersion": self.tool_version,
            "seed": self.seed,
            "results": results,
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} ({})", self.command, self.tool_version).unwrap();
        writeln!(out, "inputs: {}", self.inputs_digest).unwrap();
        if let Some(seed) = self.seed {
            writeln!(out, "seed: {seed}").unwrap();
        }
        let width = self
            .results
            .iter()
            .filter(|(_, v)| !matches!(v, Value::Table(_)))
            .map(|(k, _)| k.chars().count())
            .max()
            .unwrap_or(0);
        let mut previous_was_table = false;
        for (key, value) in &self.results {
            match value {
                Value::Table(t) => {
                    writeln!(out, "\n{key}:").unwrap();
                    out.push_str(&render_table(t));
                    previous_was_table = true;
                }
                v => {
                    if previous_was_table {
                        out.push('\n');
                        previous_was_table = false;
                    }
                    writeln!(out, "{key:<width$}  {}", text_cell(v)).unwrap();
                }
            }
        }
        out
    }
}

/// Seven decimals, with negative zero printed as zero.
pub fn fixed7(v: f64) -> String {
    let s = format!("{v:.7}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|c| c == b'0' || c == b'.') => rest.to_string(),
        _ => s,
    }
}

fn text_cell(v: &Value) -> String {
    match v {
        Value::Float(f) => fixed7(*f),
        Value::Int(i) => i.to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => s.clone(),
        Value::Vector(xs) => format!("({})", xs.iter().map(|x| fixed7(*x)).collect::<Vec<_>>().join(", ")),
        Value::Table(t) => format!("<{} rows>", t.rows.len()),
    }
}

fn render_table(t: &Table) -> String {
    let cells: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(text_cell).collect()).collect();
    let widths: Vec<usize> = (0..t.columns.len())
        .map(|c| cells.iter().map(|r| r[c].chars().count()).chain([t.columns[c].chars().count()]).max().unwrap_or(0))
        .collect();
    let numeric: Vec<bool> = (0..t.columns.len())
        .map(|c| t.rows.iter().all(|r| matches!(r[c], Value::Float(_) | Value::Int(_))) && !t.rows.is_empty())
        .collect();
    let line = |row: &[String]| {
        let parts: Vec<String> = row
            .iter()
            .enumerate()
            .map(
                |(c, s)| if numeric[c] { format!("{s:>w$}", w = widths[c]) } else { format!("{s:<w$}", w = widths[c]) },
            )
            .collect();
        format!("  {}\n", parts.join("  ").trim_end())
    };
    let mut out = line(&t.columns);
    for row in &cells {
        out.push_str(&line(row));
    }
    out
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Float(f) => float_json(*f),
        Value::Int(i) => json!(i),
        Value::Bool(b) => json!(b),
        Value::Text(s) => json!(s),
        Value::Vector(xs) => Json::Array(xs.iter().map(|x| float_json(*x)).collect()),
        Value::Table(t) => Json::Array(
            t.rows
                .iter()
                .map(|r| Json::Object(t.columns.iter().cloned().zip(r.iter().map(value_json)).collect()))
                .collect(),
        ),
    }
}

fn float_json(f: f64) -> Json {
    serde_json::Number::from_f64(f).map_or(Json::Null, Json::Number)
}
