//! Canonical rendering of report values. Two properties matter: identical
//! value trees must render to identical bytes (reports are diffed and
//! saved files are round-tripped), and floats must survive a parse-render
//! cycle unchanged. Object keys are emitted sorted and floats at 17
//! significant digits, which pins both.

use std::fmt::Write;

use serde_json::Value;

/// Canonical JSON: sorted object keys, 17-significant-digit floats,
/// two-space indentation, scalar arrays inline. No trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out
}

/// Flat `key  value` lines for terminal reading, one per scalar leaf,
/// nested fields joined with dots. Never colorized, so `NO_COLOR` holds
/// vacuously. No trailing newline.
pub fn render_table(value: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", value, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let lines: Vec<String> = rows
        .into_iter()
        .map(|(k, v)| format!("{k:<width$}  {v}"))
        .collect();
    lines.join("\n")
}

fn is_scalar(value: &Value) -> bool {
    !matches!(value, Value::Array(_) | Value::Object(_))
}

fn scalar_text(value: &Value) -> String {
    match value {
        Value::Null => "null".to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => number_text(n),
        Value::String(s) => serde_json::to_string(s).expect("strings always serialize"),
        Value::Array(_) | Value::Object(_) => unreachable!("scalar_text is called on scalars"),
    }
}

fn number_text(n: &serde_json::Number) -> String {
    // integers print as integers; everything that parsed or was built as a
    // float prints at full 17-significant-digit precision
    if let Some(i) = n.as_i64() {
        return i.to_string();
    }
    if let Some(u) = n.as_u64() {
        return u.to_string();
    }
    format!("{:.16e}", n.as_f64().expect("number is one of i64/u64/f64"))
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Array(items) => write_array(out, items, indent),
        Value::Object(map) => write_object(out, map, indent),
        scalar => out.push_str(&scalar_text(scalar)),
    }
}

fn write_array(out: &mut String, items: &[Value], indent: usize) {
    if items.is_empty() {
        out.push_str("[]");
        return;
    }
    if items.iter().all(is_scalar) {
        out.push('[');
        for (i, item) in items.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            out.push_str(&scalar_text(item));
        }
        out.push(']');
        return;
    }
    out.push_str("[\n");
    for (i, item) in items.iter().enumerate() {
        write!(out, "{:1$}", "", indent + 2).expect("writing to String cannot fail");
        write_value(out, item, indent + 2);
        if i + 1 < items.len() {
            out.push(',');
        }
        out.push('\n');
    }
    write!(out, "{:1$}]", "", indent).expect("writing to String cannot fail");
}

fn write_object(out: &mut String, map: &serde_json::Map<String, Value>, indent: usize) {
    if map.is_empty() {
        out.push_str("{}");
        return;
    }
    // sort explicitly rather than relying on the map's iteration order, so
    // the byte layout cannot change under feature unification
    let mut keys: Vec<&String> = map.keys().collect();
    keys.sort();
    out.push_str("{\n");
    for (i, key) in keys.iter().enumerate() {
        write!(out, "{:1$}", "", indent + 2).expect("writing to String cannot fail");
        out.push_str(&serde_json::to_string(key).expect("strings always serialize"));
        out.push_str(": ");
        write_value(out, &map[key.as_str()], indent + 2);
        if i + 1 < keys.len() {
            out.push(',');
        }
        out.push('\n');
    }
    write!(out, "{:1$}}}", "", indent).expect("writing to String cannot fail");
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for key in keys {
                let path = if prefix.is_empty() {
                    key.to_string()
                } else {
                    format!("{prefix}.{key}")
                };
                flatten(&path, &map[key.as_str()], rows);
            }
        }
        Value::Array(items) if items.iter().all(is_scalar) => {
            let joined: Vec<String> = items.iter().map(scalar_text).collect();
            rows.push((prefix.to_string(), format!("[{}]", joined.join(", "))));
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), item, rows);
            }
        }
        scalar => rows.push((prefix.to_string(), scalar_text(scalar))),
    }
}
