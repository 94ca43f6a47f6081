//! Report envelope: JSON objects carrying the config and library version,
//! or CSV tables preceded by `#` comment lines with the same metadata.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }

    fn as_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.header
                            .iter()
                            .map(|h| h.to_string())
                            .zip(r.iter().cloned())
                            .collect(),
                    )
                })
                .collect(),
        )
    }
}

/// What a subcommand produced: a JSON body, an optional table and the exit code.
pub struct Outcome {
    pub body: Value,
    pub table: Option<Table>,
    pub code: i32,
}

impl Outcome {
    pub fn json<T: Serialize>(body: &T) -> Result<Self> {
        Ok(Self {
            body: serde_json::to_value(body)?,
            table: None,
            code: 0,
        })
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn with_code(mut self, code: i32) -> Self {
        self.code = code;
        self
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(command: &str, config: &Value, outcome: &Outcome, format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut obj = match &outcome.body {
                Value::Object(m) => m.clone(),
                other => {
                    let mut m = Map::new();
                    m.insert("result".into(), other.clone());
                    m
                }
            };
            if let Some(t) = &outcome.table {
                obj.insert("rows".into(), t.as_json());
            }
            obj.insert("command".into(), json!(command));
            obj.insert("config".into(), config.clone());
            obj.insert("version".into(), json!(coanalytic_core::VERSION));
            Ok(serde_json::to_string_pretty(&Value::Object(obj))? + "\n")
        }
        Format::Csv => {
            let mut out = format!(
                "# coanalytic {}\n# command: {command}\n# config: {}\n",
                coanalytic_core::VERSION,
                config
            );
            let mut w = csv::Writer::from_writer(Vec::new());
            match &outcome.table {
                Some(t) => {
                    w.write_record(&t.header)?;
                    for r in &t.rows {
                        w.write_record(r.iter().map(cell))?;
                    }
                }
                None => {
                    w.write_record(["key", "value"])?;
                    if let Value::Object(m) = &outcome.body {
                        for (k, v) in m {
                            w.write_record([k.as_str(), &cell(v)])?;
                        }
                    }
                }
            }
            out.push_str(&String::from_utf8(w.into_inner()?)?);
            Ok(out)
        }
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
