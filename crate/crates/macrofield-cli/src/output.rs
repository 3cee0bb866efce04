use crate::args::Format;
use anyhow::{Context, Result};
use serde_json::{Map, Value};
use std::io::Write;
use std::path::Path;

/// Column-oriented result; cells are JSON scalars, `null` prints as an empty CSV cell.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(r.iter().cloned()).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.columns)?;
        for row in &self.rows {
            wr.write_record(row.iter().map(cell))?;
        }
        wr.flush()?;
        Ok(())
    }
}

pub fn num(v: f64) -> Value {
    // non-finite values become null
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Flatten nested objects to `key,value` rows with dotted keys.
fn flatten(prefix: &str, v: &Value, out: &mut Table) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        other => out.push(vec![Value::String(prefix.to_string()), other.clone()]),
    }
}

pub struct Output {
    pub table: Option<Table>,
    /// The JSON document; also flattened for CSV when there is no table.
    pub json: Value,
    /// Printed beside a CSV table (to stderr unless redirected).
    pub side_summary: Option<Value>,
    pub default_format: Format,
}

impl Output {
    pub fn table(table: Table) -> Self {
        let json = table.to_json();
        Output { table: Some(table), json, side_summary: None, default_format: Format::Csv }
    }

    pub fn json(json: Value) -> Self {
        Output { table: None, json, side_summary: None, default_format: Format::Json }
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

pub fn emit(out: Output, format: Option<Format>, path: Option<&Path>, summary_path: Option<&Path>) -> Result<()> {
    let mut w = sink(path)?;
    match format.unwrap_or(out.default_format) {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, &out.json)?;
            writeln!(w)?;
        }
        Format::Csv => {
            match &out.table {
                Some(t) => t.write_csv(&mut w)?,
                None => {
                    let mut t = Table::new(&["key", "value"]);
                    flatten("", &out.json, &mut t);
                    t.write_csv(&mut w)?;
                }
            }
            if let Some(s) = &out.side_summary {
                let text = serde_json::to_string_pretty(s)?;
                match summary_path {
                    Some(p) => std::fs::write(p, text + "\n")
                        .with_context(|| format!("writing {}", p.display()))?,
                    None => eprintln!("{text}"),
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}
