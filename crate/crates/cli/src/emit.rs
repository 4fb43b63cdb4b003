//! Byte-stable rendering of report artifacts.
//!
//! JSON keys come out sorted (serde_json's default map is ordered) and every
//! float is rounded to a fixed number of significant digits before printing,
//! so reruns produce identical bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use marginbound::numfmt::round_sig;
use marginbound::Result;
use serde::Serialize;
use serde_json::{Number, Value};

pub const DIGITS: usize = 12;

/// Round every float in a JSON tree to `digits` significant digits.
pub fn round_floats(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                let r = round_sig(x, digits);
                if let Some(num) = Number::from_f64(r) {
                    *n = num;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_floats(x, digits)),
        Value::Object(map) => map.values_mut().for_each(|x| round_floats(x, digits)),
        _ => {}
    }
}

/// Canonical pretty JSON, newline-terminated.
pub fn canonical_json<T: Serialize>(report: &T) -> Result<String> {
    let mut v = serde_json::to_value(report)?;
    round_floats(&mut v, DIGITS);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Header plus rows, newline-terminated.
pub fn csv_text(header: &str, rows: &[String]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(header);
    s.push('\n');
    for r in rows {
        s.push_str(r);
        s.push('\n');
    }
    s
}

/// Write the artifact to `path`, or to `stdout` when no path is given.
pub fn emit(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
