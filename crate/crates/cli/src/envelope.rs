//! Result envelopes and their deterministic JSON rendering.
//!
//! Every command prints one envelope: tool identity, an echo of the run
//! configuration (including any seed), a timing field, and the payload.
//! Keys are emitted in sorted order and every float carries 17 significant
//! digits, so identical inputs produce identical output up to the
//! `timing_ms` line.

use serde_json::{json, Value};

pub fn envelope(run: Value, payload: Value, timing_ms: f64) -> Value {
    json!({
        "payload": payload,
        "run": run,
        "timing_ms": timing_ms,
        "tool": {
            "name": "colorcode",
            "version": env!("CARGO_PKG_VERSION"),
        },
    })
}

/// Renders a JSON value with sorted keys and `%.16e` floats.
pub fn render(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

/// 17 significant digits, round-trip exact for f64.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no infinities; encode as strings.
        format!("\"{x}\"")
    }
}

fn write_value(out: &mut String, value: &Value, indent: usize) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().unwrap()));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("string escapes"));
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(out, indent + 1);
                write_value(out, item, indent + 1);
            }
            out.push('\n');
            push_indent(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (i, (k, v)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(out, indent + 1);
                out.push_str(&serde_json::to_string(k).expect("string escapes"));
                out.push_str(": ");
                write_value(out, v, indent + 1);
            }
            out.push('\n');
            push_indent(out, indent);
            out.push('}');
        }
    }
}

fn push_indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

pub fn complex_value(c: num_complex::Complex<f64>) -> Value {
    json!({ "im": c.im, "re": c.re })
}
