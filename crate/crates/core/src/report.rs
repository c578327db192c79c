//! Stable JSON and text rendering of command results.

use std::time::Duration;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::integration::IntegralVerdict;

pub const SCHEMA: u64 = 1;

/// One command's output. Keys serialize sorted (serde_json's default
/// map), so identical inputs give identical bytes; timing is only
/// included on request.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub result: Value,
    pub notes: Vec<String>,
    pub timing: Option<Duration>,
}

pub fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Input(e.to_string()))
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), inputs: Map::new(), result: Value::Null, notes: Vec::new(), timing: None }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn with_result(mut self, v: Value) -> Self {
        self.result = v;
        self
    }

    pub fn to_json_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!(self.command));
        m.insert("inputs".into(), Value::Object(self.inputs.clone()));
        m.insert("result".into(), self.result.clone());
        m.insert("notes".into(), json!(self.notes));
        if let Some(t) = self.timing {
            m.insert("timing".into(), json!({ "elapsed_ms": t.as_millis() as u64 }));
        }
        Value::Object(m)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json_value()).expect("values always serialize");
        s.push('\n');
        s
    }

    /// Flattened `path: value` lines.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.command);
        for (k, v) in &self.inputs {
            out.push_str(&format!("  input.{k}: {}\n", scalar_text(v)));
        }
        flatten("", &self.result, &mut out);
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        if let Some(t) = self.timing {
            out.push_str(&format!("  elapsed_ms: {}\n", t.as_millis()));
        }
        out
    }
}

/// Verdict without the per-subinterval data, which goes to CSV.
pub fn integral_summary(v: &IntegralVerdict) -> Value {
    json!({
        "status": v.status,
        "estimate": v.estimate,
        "gap": v.gap,
        "upper_sum": v.upper,
        "lower_sum": v.lower,
        "refinement_depth": v.refinement_depth,
        "subintervals": v.partition_used.n(),
    })
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("  {prefix}: [{}]\n", parts.join(", ")));
        }
        other => out.push_str(&format!("  {prefix}: {}\n", scalar_text(other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_sorted() {
        let r = Report::new("x").input("zeta", "1").input("alpha", 2).with_result(json!({"b": 1, "a": [1, 2]}));
        let s = r.to_json();
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
        assert!(s.find("\"command\"").unwrap() < s.find("\"schema\"").unwrap());
        assert!(!s.contains("timing"));
        assert!(r.to_text().contains("  a: [1, 2]\n"));
    }
}
