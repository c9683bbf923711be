//! Plain tables, rounded JSON and the final write to a file or stdout.

use std::io::Write;

use opcap_core::bounds::fmt_sig;
use serde_json::{Number, Value};

use crate::config::RunConfig;
use crate::error::CliError;

/// Rounds every float to 12 significant digits so JSON output matches the
/// tables digit for digit.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            fmt_sig(x)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

pub fn json_string(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_json(v)).unwrap_or_default();
    s.push('\n');
    s
}

pub fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), fmt_sig)
}

/// Two-column key/value listing with aligned values.
#[derive(Default)]
pub struct KeyValues {
    rows: Vec<(String, String)>,
}

impl KeyValues {
    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.rows.push((key.into(), value.into()));
    }

    pub fn render(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.rows {
            let pad = width - k.chars().count();
            out.push_str(k);
            out.push_str(&" ".repeat(pad + 2));
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

pub fn emit(run: &RunConfig, text: &str) -> Result<(), CliError> {
    match &run.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding_keeps_integers_and_trims_floats() {
        let v = round_json(json!({"a": 1, "b": [0.1 + 0.2, 2.0], "c": f64::NAN}));
        assert_eq!(v["a"], json!(1));
        assert_eq!(v["b"][0], json!(0.3));
        assert_eq!(v["c"], Value::Null);
    }

    #[test]
    fn columns_align() {
        let mut kv = KeyValues::default();
        kv.push("m", "3");
        kv.push("τ(f ln f)", "0.5");
        assert_eq!(kv.render(), "m          3\nτ(f ln f)  0.5\n");
    }
}
