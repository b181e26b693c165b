//! The JSON report every command prints, and its `--pretty` rendering.

use serde::Serialize;
use serde_json::Value;
use std::fmt::Write;

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    /// The parsed flags of the subcommand.
    pub args: Value,
    /// The polynomial the command ran on, when there is one.
    #[serde(skip_serializing_if = "Value::is_null")]
    pub input: Value,
    pub tolerances: Value,
    pub result: Value,
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: &str, args: Value) -> Self {
        RunReport {
            command: command.into(),
            args,
            input: Value::Null,
            tolerances: Value::Null,
            result: Value::Null,
            notes: Vec::new(),
            wall_time_ms: None,
        }
    }

    pub fn to_json(&self, pretty: bool) -> String {
        let s = if pretty {
            serde_json::to_string_pretty(self)
        } else {
            serde_json::to_string(self)
        };
        s.expect("reports serialize")
    }

    /// Two-column `key  value` table; nested objects flatten to dotted keys.
    pub fn to_table(&self) -> String {
        let mut rows = Vec::new();
        flatten(
            "",
            &serde_json::to_value(self).expect("reports serialize"),
            &mut rows,
        );
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            writeln!(out, "{k:<width$}  {v}").expect("writing to a string");
        }
        out
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) if !map.is_empty() => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, rows);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, rows);
            }
        }
        Value::String(s) => rows.push((prefix.into(), s.clone())),
        Value::Null => {}
        other => rows.push((prefix.into(), other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn table_flattens_nested_values() {
        let mut r = RunReport::new("kgroups", json!({"m": 3}));
        r.result = json!({"k0": "Z/2", "rows": [{"m": 1}], "dims": [3, 4]});
        let t = r.to_table();
        assert!(t.contains("result.k0"));
        assert!(t.contains("result.rows[0].m"));
        assert!(t.contains("[3,4]"));
        assert!(!t.contains("wall_time"));
    }

    #[test]
    fn timing_is_omitted_unless_set() {
        let r = RunReport::new("x", Value::Null);
        assert!(!r.to_json(false).contains("wall_time_ms"));
    }
}
