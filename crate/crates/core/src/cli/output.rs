use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use super::config::{ExperimentConfig, Format};

/// A result table: named columns and rows of JSON scalars.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Column index by name.
    pub fn col(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Prepend constant-valued columns.
    pub fn prepend(&mut self, cols: &[(&str, Value)]) {
        let names: Vec<String> = cols.iter().map(|(n, _)| n.to_string()).collect();
        self.columns.splice(0..0, names);
        for row in &mut self.rows {
            row.splice(0..0, cols.iter().map(|(_, v)| v.clone()));
        }
    }
}

/// Outcome of one task run.
#[derive(Clone, Debug, PartialEq)]
pub struct TaskOutput {
    pub table: Table,
    pub summary: String,
    /// Hard invariant violations; any entry makes the exit status nonzero.
    pub failures: Vec<String>,
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn to_csv(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row.iter().map(cell_text))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

pub fn to_json(cfg: &ExperimentConfig, hash: &str, out: &TaskOutput) -> String {
    let rows: Vec<Value> = out
        .table
        .rows
        .iter()
        .map(|r| {
            let mut m = Map::new();
            for (c, v) in out.table.columns.iter().zip(r) {
                m.insert(c.clone(), v.clone());
            }
            Value::Object(m)
        })
        .collect();
    let doc = serde_json::json!({
        "config": cfg,
        "config_hash": hash,
        "task": cfg.task.name(),
        "summary": out.summary,
        "failures": out.failures,
        "columns": out.table.columns,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("json output");
    s.push('\n');
    s
}

pub fn render(cfg: &ExperimentConfig, hash: &str, out: &TaskOutput, format: Format) -> String {
    match format {
        Format::Csv => to_csv(&out.table),
        Format::Json => to_json(cfg, hash, out),
    }
}

/// Write via a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
