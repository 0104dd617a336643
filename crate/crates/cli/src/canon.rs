//! Canonical JSON emission: sorted object keys, floats at 17 significant
//! digits, no whitespace variance. Identical values always serialize to
//! identical bytes, which is what makes reports and problem files
//! reproducible artifacts.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub enum CanonValue {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<CanonValue>),
    Object(BTreeMap<String, CanonValue>),
}

impl CanonValue {
    pub fn object(entries: Vec<(&str, CanonValue)>) -> CanonValue {
        CanonValue::Object(
            entries
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        )
    }

    pub fn floats(values: &[f64]) -> CanonValue {
        CanonValue::Array(values.iter().map(|&v| CanonValue::Float(v)).collect())
    }

    pub fn write(&self, out: &mut String) {
        match self {
            CanonValue::Null => out.push_str("null"),
            CanonValue::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            CanonValue::Int(i) => out.push_str(&i.to_string()),
            CanonValue::Float(f) => write_float(*f, out),
            CanonValue::Str(s) => write_string(s, out),
            CanonValue::Array(items) => {
                out.push('[');
                for (k, item) in items.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    item.write(out);
                }
                out.push(']');
            }
            CanonValue::Object(map) => {
                out.push('{');
                for (k, (key, value)) in map.iter().enumerate() {
                    if k > 0 {
                        out.push(',');
                    }
                    write_string(key, out);
                    out.push(':');
                    value.write(out);
                }
                out.push('}');
            }
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut s = String::new();
        self.write(&mut s);
        s.push('\n');
        s.into_bytes()
    }
}

/// 17 significant digits; non-finite values become tagged strings since
/// JSON has no encoding for them.
fn write_float(f: f64, out: &mut String) {
    if f.is_nan() {
        out.push_str("\"nan\"");
    } else if f.is_infinite() {
        out.push_str(if f > 0.0 { "\"inf\"" } else { "\"-inf\"" });
    } else {
        let f = if f == 0.0 { 0.0 } else { f }; // collapse -0.0
        out.push_str(&format!("{f:.16e}"));
    }
}

fn write_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// Canonicalizes any serde_json tree (used for problem files).
pub fn from_json(value: &serde_json::Value) -> CanonValue {
    match value {
        serde_json::Value::Null => CanonValue::Null,
        serde_json::Value::Bool(b) => CanonValue::Bool(*b),
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                CanonValue::Int(i)
            } else {
                CanonValue::Float(n.as_f64().unwrap_or(f64::NAN))
            }
        }
        serde_json::Value::String(s) => CanonValue::Str(s.clone()),
        serde_json::Value::Array(items) => {
            CanonValue::Array(items.iter().map(from_json).collect())
        }
        serde_json::Value::Object(map) => CanonValue::Object(
            map.iter()
                .map(|(k, v)| (k.clone(), from_json(v)))
                .collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_17_significant_digits() {
        let mut s = String::new();
        CanonValue::Float(0.1).write(&mut s);
        assert_eq!(s, "1.0000000000000001e-1");
        let reparsed: f64 = s.parse().unwrap();
        assert_eq!(reparsed, 0.1);
    }

    #[test]
    fn object_keys_are_sorted() {
        let v = CanonValue::object(vec![
            ("zeta", CanonValue::Int(1)),
            ("alpha", CanonValue::Int(2)),
        ]);
        let mut s = String::new();
        v.write(&mut s);
        assert_eq!(s, "{\"alpha\":2,\"zeta\":1}");
    }

    #[test]
    fn identical_values_identical_bytes() {
        let a = CanonValue::floats(&[0.5, -0.0, 1e-300]);
        let b = CanonValue::floats(&[0.5, 0.0, 1e-300]);
        assert_eq!(a.to_bytes(), b.to_bytes());
    }

    #[test]
    fn non_finite_floats_are_tagged_strings() {
        let mut s = String::new();
        CanonValue::Float(f64::INFINITY).write(&mut s);
        assert_eq!(s, "\"inf\"");
    }
}
