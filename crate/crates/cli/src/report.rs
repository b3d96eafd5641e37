use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde_json::{json, Value};

use crate::config::Format;

/// A header, body rows and a summary; written whole so a failed run leaves no partial output.
pub struct Report {
    pub header: Value,
    pub rows: Vec<Value>,
    pub summary: Value,
}

impl Report {
    pub fn render(&self, format: Format) -> std::io::Result<Vec<u8>> {
        match format {
            Format::Json => Ok(self.jsonl()),
            Format::Csv => self.csv(),
        }
    }

    fn jsonl(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let lines = std::iter::once(json!({ "header": self.header }))
            .chain(self.rows.iter().cloned())
            .chain(std::iter::once(json!({ "summary": self.summary })));
        for line in lines {
            out.extend(line.to_string().into_bytes());
            out.push(b'\n');
        }
        out
    }

    /// Body rows only; nested objects become dotted columns, sorted by name.
    fn csv(&self) -> std::io::Result<Vec<u8>> {
        let flat: Vec<BTreeMap<String, String>> = self
            .rows
            .iter()
            .map(|row| {
                let mut out = BTreeMap::new();
                flatten("", row, &mut out);
                out
            })
            .collect();
        let cols: BTreeSet<&String> = flat.iter().flat_map(BTreeMap::keys).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&cols)?;
        for row in &flat {
            w.write_record(cols.iter().map(|c| row.get(*c).map(String::as_str).unwrap_or("")))?;
        }
        w.flush()?;
        w.into_inner().map_err(|e| e.into_error())
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Null => {
            out.insert(prefix.to_string(), String::new());
        }
        Value::String(s) => {
            out.insert(prefix.to_string(), s.clone());
        }
        other => {
            out.insert(prefix.to_string(), other.to_string());
        }
    }
}

pub fn write(bytes: &[u8], out: Option<&std::path::Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report {
            header: json!({"b": 1, "a": 2}),
            rows: vec![json!({"x": 1, "y": "s"}), json!({"x": [1, 2], "z": {"a": true}})],
            summary: json!({"n": 2}),
        }
    }

    #[test]
    fn jsonl_has_sorted_keys() {
        let text = String::from_utf8(sample().render(Format::Json).unwrap()).unwrap();
        assert_eq!(text, "{\"header\":{\"a\":2,\"b\":1}}\n{\"x\":1,\"y\":\"s\"}\n{\"x\":[1,2],\"z\":{\"a\":true}}\n{\"summary\":{\"n\":2}}\n");
    }

    #[test]
    fn csv_uses_union_of_columns() {
        let text = String::from_utf8(sample().render(Format::Csv).unwrap()).unwrap();
        assert_eq!(text, "x,y,z.a\n1,s,\n\"[1,2]\",,true\n");
    }
}
