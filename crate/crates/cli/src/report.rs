//! Tabular reports: CSV with `#` provenance lines, or JSON lines led by a header object.

use serde_json::{Map, Value};

use crate::config::Format;

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(header: Vec<(String, String)>, columns: Vec<String>) -> Self {
        Report {
            header,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Jsonl => self.jsonl(),
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            out.push_str(&format!("# {k}={v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>, row: &[String]| w.write_record(row).expect("in-memory write");
        write(&mut w, &self.columns);
        for row in &self.rows {
            write(&mut w, row);
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input"));
        out
    }

    fn jsonl(&self) -> String {
        let mut head = Map::new();
        head.insert("record".into(), Value::from("header"));
        for (k, v) in &self.header {
            head.insert(k.clone(), Value::from(v.as_str()));
        }
        head.insert(
            "columns".into(),
            Value::from(self.columns.iter().map(|c| Value::from(c.as_str())).collect::<Vec<_>>()),
        );
        let mut out = Value::Object(head).to_string();
        out.push('\n');
        for row in &self.rows {
            let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(|v| scalar(v))).collect();
            out.push_str(&Value::Object(obj).to_string());
            out.push('\n');
        }
        out
    }
}

/// Finite numbers become JSON numbers, everything else stays a string.
fn scalar(v: &str) -> Value {
    if let Ok(n) = v.parse::<i64>() {
        return Value::from(n);
    }
    match v.parse::<f64>() {
        Ok(x) if x.is_finite() && !v.is_empty() => serde_json::Number::from_f64(x).map_or_else(|| Value::from(v), Value::Number),
        _ => Value::from(v),
    }
}
