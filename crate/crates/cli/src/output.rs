//! Rendering of reports as JSON, CSV or aligned text.

use clap::ValueEnum;
use serde_json::{json, Value};

use selector_lab::serial::num;
use selector_lab::simulate::CdfPoint;
use selector_lab::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

pub fn render(report: &Value, table: Option<&str>, format: Format) -> String {
    match format {
        Format::Json => format!("{report}\n"),
        Format::Csv => match table {
            Some(t) => t.to_string(),
            None => flat_csv(report),
        },
        Format::Pretty => pretty(report),
    }
}

/// `t,empirical,theory` rows of a simulation report.
pub fn cdf_csv(points: &[CdfPoint]) -> String {
    let mut out = String::from("t,empirical,theory\n");
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            num(p.t),
            num(p.empirical),
            num(p.theory)
        ));
    }
    out
}

/// `{"error": {"kind", "message"}}` for stderr.
pub fn error_json(e: &Error) -> String {
    let debug = format!("{e:?}");
    let kind = debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default();
    json!({ "error": { "kind": kind, "message": e.to_string() } }).to_string()
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, x, out);
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), x, out);
            }
        }
        scalar => out.push((prefix.to_string(), scalar.clone())),
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Two-column `key,value` CSV with dotted paths.
fn flat_csv(report: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let mut out = String::from("key,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{}\n", csv_field(&scalar_text(&v))));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn pretty(report: &Value) -> String {
    let Value::Object(map) = report else {
        return format!("{report:#}\n");
    };
    if let Some(Value::Array(checks)) = map.get("checks") {
        let mut out = String::new();
        for c in checks {
            let mark = if c["passed"] == true { "ok  " } else { "FAIL" };
            out.push_str(&format!(
                "{mark} {:<36} {}\n",
                scalar_text(&c["name"]),
                scalar_text(&c["detail"])
            ));
        }
        out.push_str(&format!("passed: {}\n", map["passed"]));
        return out;
    }
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in map {
        let text = match v {
            Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
                xs.iter().map(scalar_text).collect::<Vec<_>>().join(" ")
            }
            Value::Array(xs) => xs.iter().map(|x| format!("\n  {x}")).collect::<String>(),
            other => scalar_text(other),
        };
        out.push_str(&format!("{k:<width$}  {text}\n"));
    }
    out
}
