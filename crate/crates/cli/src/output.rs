use serde::Serialize;
use serde_json::Value;

use crate::args::{Command, Format};

#[derive(Serialize)]
pub struct Budgets {
    pub vertices: u64,
    pub enumeration: u64,
}

#[derive(Serialize)]
pub struct Tolerances {
    pub edge: String,
    pub c4: String,
}

/// Everything that determines a report.
#[derive(Serialize)]
pub struct RunConfig<'a> {
    pub command: &'a Command,
    pub seed: u64,
    pub budgets: Budgets,
    pub tolerances: Tolerances,
    pub format: Format,
    pub exhaustive: bool,
    pub rng: &'static str,
    pub edge_rule: &'static str,
    pub version: &'static str,
}

#[derive(Serialize)]
pub struct Envelope<'a> {
    pub schema: &'static str,
    pub run: RunConfig<'a>,
    pub engines: Vec<String>,
    pub report: Value,
    /// Theorem-backed assertions that failed; nonempty means exit status 1.
    pub failures: Vec<String>,
}

pub const SCHEMA_ID: &str = "homdens-report/1";

pub fn render(env: &Envelope, format: Format) -> String {
    let value = serde_json::to_value(env).expect("reports serialize");
    match format {
        Format::Json | Format::Text => {
            serde_json::to_string_pretty(&value).expect("value serializes") + "\n"
        }
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["path", "value"]).expect("in-memory write");
            for (k, v) in rows {
                w.write_record([k, v]).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
        }
    }
}

/// Leaves of `v` as dotted paths; scalars print as their JSON text, strings unquoted.
pub fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}
