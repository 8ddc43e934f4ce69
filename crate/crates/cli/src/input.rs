//! Parsing of map, point, set, epsilon, family and grid arguments.

use std::collections::BTreeMap;

use adelic::energy::{AdelicEpsilon, FormFamily, GaloisSetQ, MapFamily};
use adelic::projmap::{MapJson, ProjPointQ, RationalMapP1};
use adelic::qfield::Place;
use num_complex::Complex64;
use serde::Deserialize;

use crate::CliError;

/// Returns the argument itself, or the contents of the file when it starts with `@`.
pub fn read_arg(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn json<T: for<'de> Deserialize<'de>>(what: &str, arg: &str) -> Result<T, CliError> {
    let text = read_arg(arg)?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

/// Parses `{"d": 2, "F0": [...], "F1": [...]}` into a normalized map.
///
/// ```
/// let f = adelic_cli::input::parse_map(r#"{"d":2,"F0":["1","0","-2"],"F1":["0","0","1"]}"#).unwrap();
/// assert_eq!(f.resultant().to_string(), "1");
/// ```
pub fn parse_map(arg: &str) -> Result<RationalMapP1, CliError> {
    let m: MapJson = json("map", arg)?;
    Ok(m.to_map()?)
}

pub fn parse_point(s: &str) -> Result<ProjPointQ, CliError> {
    Ok(s.parse()?)
}

/// A JSON array of point strings.
pub fn parse_set(arg: &str) -> Result<GaloisSetQ, CliError> {
    let items: Vec<String> = json("set", arg)?;
    Ok(GaloisSetQ::parse(&items)?)
}

/// A JSON object from places to values in `(0, 1]`, e.g. `{"arch": "0.5", "2": "1/4"}`.
pub fn parse_epsilon(arg: &str) -> Result<AdelicEpsilon, CliError> {
    let entries: BTreeMap<String, String> = json("epsilon", arg)?;
    let pairs: Vec<(String, String)> = entries.into_iter().collect();
    Ok(AdelicEpsilon::parse(&pairs)?)
}

pub fn parse_place(s: &str) -> Result<Place, CliError> {
    Ok(s.parse()?)
}

/// A real number, or `log(x)` for its natural logarithm.
pub fn parse_log_number(s: &str) -> Result<f64, CliError> {
    let t = s.trim();
    let bad = || CliError::Input(format!("expected a number or log(x), got {s:?}"));
    if let Some(inner) = t.strip_prefix("log(").and_then(|r| r.strip_suffix(')')) {
        let x: f64 = inner.trim().parse().map_err(|_| bad())?;
        if !(x > 0.0) {
            return Err(bad());
        }
        return Ok(x.ln());
    }
    t.parse().map_err(|_| bad())
}

#[derive(Deserialize)]
struct FormsJson {
    #[serde(rename = "F0")]
    f0: Vec<String>,
    #[serde(rename = "F1")]
    f1: Vec<String>,
}

#[derive(Deserialize)]
struct FamilyJson {
    d: usize,
    f: FormsJson,
    g: FormsJson,
}

/// `{"d": 2, "f": {"F0": [...], "F1": [...]}, "g": {...}}` with coefficients such as `"1-2t"`.
pub fn parse_family(arg: &str) -> Result<MapFamily, CliError> {
    let fam: FamilyJson = json("family", arg)?;
    Ok(MapFamily {
        f: FormFamily::parse(fam.d, &fam.f.f0, &fam.f.f1)?,
        g: FormFamily::parse(fam.d, &fam.g.f0, &fam.g.f1)?,
    })
}

/// `start:stop:count`, inclusive at both ends; a single number is a one-point axis.
pub fn parse_axis(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Input(format!("expected start:stop:count, got {s:?}"));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [x] => Ok(vec![x.trim().parse().map_err(|_| bad())?]),
        [a, b, n] => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if n == 0 || !a.is_finite() || !b.is_finite() {
                return Err(bad());
            }
            if n == 1 {
                return Ok(vec![a]);
            }
            Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
        }
        _ => Err(bad()),
    }
}

/// Row-major grid: the imaginary part varies fastest.
pub fn grid(re: &[f64], im: &[f64]) -> Vec<Complex64> {
    re.iter()
        .flat_map(|&x| im.iter().map(move |&y| Complex64::new(x, y)))
        .collect()
}

/// Comma- or whitespace-separated rationals, or a JSON array of strings.
pub fn parse_rational_list(arg: &str) -> Result<Vec<String>, CliError> {
    let text = read_arg(arg)?;
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| CliError::Input(format!("list: {e}")));
    }
    Ok(t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect())
}
