//! Deterministic rendering of reports: floats rounded to 12 significant
//! digits in JSON, a flat `path: value` listing for text, and two-column CSV.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Number, Value};

use super::config::Format;
use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 12;

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().unwrap_or(f64::NAN));
            Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect::<Map<_, _>>()),
        other => other,
    }
}

pub fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(round_value(serde_json::to_value(x)?))
}

pub fn json_string(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn text_string(v: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", v, &mut rows);
    let mut s = String::new();
    for (k, x) in rows {
        let _ = writeln!(s, "{k}: {x}");
    }
    s
}

pub fn render(v: &Value, format: Format) -> Result<String> {
    match format {
        Format::Json => json_string(v),
        Format::Text => Ok(text_string(v)),
    }
}

/// Write `v` to `path`: CSV (`key,value` rows) for a `.csv` extension, JSON otherwise.
pub fn write_file(path: &Path, v: &Value) -> Result<()> {
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let mut f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if is_csv {
        let mut rows = Vec::new();
        flatten("", v, &mut rows);
        let mut w = csv::Writer::from_writer(&mut f);
        w.write_record(["key", "value"]).map_err(|e| Error::Io(e.to_string()))?;
        for (k, x) in rows {
            w.write_record([k, x]).map_err(|e| Error::Io(e.to_string()))?;
        }
        w.flush()?;
    } else {
        f.write_all(json_string(v)?.as_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn rounding() {
        assert_eq!(round_significant(std::f64::consts::PI).to_string(), "3.14159265359");
        assert_eq!(round_significant(-1.0 / 3.0), -0.333333333333);
        assert_eq!(round_significant(0.0), 0.0);
        assert_eq!(round_significant(123456789012345.0), 123456789012000.0);
        let v = to_value(&json!({"a": [1.0 / 3.0, 2], "b": {"c": 1e-20 / 3.0}})).unwrap();
        assert_eq!(v, json!({"a": [0.333333333333, 2], "b": {"c": 3.33333333333e-21}}));
    }

    #[test]
    fn text_is_flat() {
        let v = json!({"a": {"b": 1.5, "c": [true, "x"]}});
        assert_eq!(text_string(&v), "a.b: 1.5\na.c.0: true\na.c.1: x\n");
    }
}
