//! The uniform output envelope and its JSON / TSV renderings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub result: Value,
    pub notes: Vec<String>,
    pub version: String,
}

impl OutputRecord {
    pub fn new(command: &str, inputs: &[(&str, String)], result: Value) -> Self {
        OutputRecord {
            command: command.into(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            result,
            notes: Vec::new(),
            version: VERSION.into(),
        }
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

pub fn render(rec: &OutputRecord, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string(rec).expect("records serialize");
            s.push('\n');
            s
        }
        Format::Tsv => render_tsv(rec),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join("; "),
        other => other.to_string(),
    }
}

fn render_tsv(rec: &OutputRecord) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: &str| {
        out.push_str(k);
        out.push('\t');
        out.push_str(v);
        out.push('\n');
    };
    line("command", &rec.command);
    for (k, v) in &rec.inputs {
        line(&format!("input.{k}"), v);
    }
    let mut rows = None;
    match &rec.result {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Array(items) if k == "rows" => rows = Some(items),
                    _ => line(k, &cell(v)),
                }
            }
        }
        other => line("result", &cell(other)),
    }
    for n in &rec.notes {
        line("note", n);
    }
    if let Some(rows) = rows {
        let columns: Vec<String> = match rows.first() {
            Some(Value::Object(first)) => first.keys().cloned().collect(),
            _ => Vec::new(),
        };
        out.push('\n');
        out.push_str(&columns.join("\t"));
        out.push('\n');
        for row in rows {
            let cells: Vec<String> = columns.iter().map(|c| cell(row.get(c).unwrap_or(&Value::Null))).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
    }
    out
}
