//! Deterministic writers for the machine-readable outputs.
//!
//! Serialization is hand-assembled rather than delegated: output bytes
//! are part of the contract (reruns must be byte-identical, golden files
//! pin the schemas), so every float goes through one fixed formatting
//! and object keys keep their insertion order.

use std::fmt::Write as _;

/// Floats are serialized with nine significant digits — enough to
/// round-trip reproducibly across runs without manufacturing false
/// precision in the last bits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.8e}")
}

/// An optional float as a CSV field: absent values stay empty.
pub fn csv_opt_f64(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Keeps free-text status reasons from breaking the CSV column grid.
pub fn csv_sanitize(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

/// A JSON document built bottom-up. Key order is insertion order and
/// every number passes through [`fmt_f64`], so rendering is a pure
/// function of the tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Json {
    Null,
    Bool(bool),
    /// Integers stay exact (counts, seeds, generation indices).
    UInt(u64),
    /// Non-finite floats render as `null`: JSON has no infinities, and an
    /// absent number is more honest than a clamped one.
    Float(f64),
    Str(String),
    Array(Vec<Json>),
    Object(Vec<(&'static str, Json)>),
}

impl Json {
    pub fn float_opt(v: Option<f64>) -> Json {
        v.map(Json::Float).unwrap_or(Json::Null)
    }

    pub fn floats(values: impl IntoIterator<Item = f64>) -> Json {
        Json::Array(values.into_iter().map(Json::Float).collect())
    }

    /// Renders the document with two-space indentation and a trailing
    /// newline. Arrays of scalars stay on one line; arrays of containers
    /// get one element per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out, 0);
        out.push('\n');
        out
    }

    fn is_scalar(&self) -> bool {
        !matches!(self, Json::Array(_) | Json::Object(_))
    }

    fn write(&self, out: &mut String, indent: usize) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::UInt(v) => {
                let _ = write!(out, "{v}");
            }
            Json::Float(v) => {
                if v.is_finite() {
                    out.push_str(&fmt_f64(*v));
                } else {
                    out.push_str("null");
                }
            }
            Json::Str(s) => write_escaped(out, s),
            Json::Array(items) => {
                if items.is_empty() {
                    out.push_str("[]");
                } else if items.iter().all(Json::is_scalar) {
                    out.push('[');
                    for (i, item) in items.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        item.write(out, indent);
                    }
                    out.push(']');
                } else {
                    out.push_str("[\n");
                    for (i, item) in items.iter().enumerate() {
                        pad(out, indent + 1);
                        item.write(out, indent + 1);
                        if i + 1 < items.len() {
                            out.push(',');
                        }
                        out.push('\n');
                    }
                    pad(out, indent);
                    out.push(']');
                }
            }
            Json::Object(fields) => {
                if fields.is_empty() {
                    out.push_str("{}");
                } else {
                    out.push_str("{\n");
                    for (i, (key, value)) in fields.iter().enumerate() {
                        pad(out, indent + 1);
                        write_escaped(out, key);
                        out.push_str(": ");
                        value.write(out, indent + 1);
                        if i + 1 < fields.len() {
                            out.push(',');
                        }
                        out.push('\n');
                    }
                    pad(out, indent);
                    out.push('}');
                }
            }
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

fn write_escaped(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}
