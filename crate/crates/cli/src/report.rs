//! Report envelopes and numeric fields.

use std::io::Write;

use adelic::qfield::BigReal;
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

/// Values echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub precision: usize,
    pub tol: f64,
    pub seed: u64,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A finite number as JSON; infinities and NaN become the strings `"inf"`, `"-inf"`, `"nan"`.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x + 0.0)
    } else {
        json!(x.to_string().to_lowercase())
    }
}

/// A certified number: the true value lies within `error` of `value`.
pub fn certified(value: f64, error: f64) -> Value {
    json!({ "value": number(value), "error": number(error), "kind": "certified" })
}

/// A certified high-precision number, with its full decimal expansion.
///
/// The error grows by the rounding of `value` to its own precision.
pub fn certified_big(value: &BigReal, error: f64) -> Value {
    let error = big_error(value, error);
    json!({
        "value": number(value.to_f64()),
        "decimal": value.to_decimal_string(),
        "error": number(error),
        "kind": "certified",
    })
}

/// `error` plus half an ulp of `value`.
pub fn big_error(value: &BigReal, error: f64) -> f64 {
    error + value.to_f64().abs() * 2f64.powi(1 - value.precision() as i32)
}

/// An exact quantity written as a string, such as a rational or an integer.
pub fn exact(value: impl ToString) -> Value {
    json!({ "value": value.to_string(), "error": 0.0, "kind": "certified" })
}

/// A numeric estimate whose error is an estimate too.
pub fn heuristic(value: f64, error: f64) -> Value {
    json!({ "value": number(value), "error": number(error), "kind": "heuristic" })
}

/// Relative rounding bound for a `precision`-bit value.
pub fn rounding(value: f64, precision: usize) -> f64 {
    value.abs().max(1.0) * 2f64.powi(8 - precision as i32)
}

/// Rounding bound for a value assembled in double precision from `terms` pieces.
pub fn f64_rounding(value: f64, terms: usize) -> f64 {
    value.abs().max(1.0) * f64::EPSILON * (terms as f64 + 1.0)
}

pub fn envelope(command: &str, config: &RunConfig, result: Value) -> Value {
    json!({
        "command": command,
        "config": config,
        "result": result,
    })
}

/// Writes `text` followed by a newline to `out`, or to stdout.
pub fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            writeln!(stdout, "{text}").map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

pub fn to_json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}
