use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use iconv_core::sampling::GENERATOR;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::failure::Outcome;

pub const SCHEMA: u64 = 1;

/// Report object: fixed header, the resolved config, then command fields.
/// Only `timestamp` varies between identical runs.
pub fn build(config: &RunConfig, body: Value) -> Value {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut out = Map::new();
    out.insert("schema".into(), json!(SCHEMA));
    out.insert("command".into(), json!(config.command));
    out.insert("generator".into(), json!(GENERATOR));
    out.insert("seed".into(), json!(config.seed));
    out.insert("timestamp".into(), json!(timestamp));
    out.insert(
        "config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    if let Value::Object(fields) = body {
        out.extend(fields);
    }
    Value::Object(out)
}

/// Writes the report to `--report` or stdout.
pub fn emit(config: &RunConfig, report: &Value) -> Outcome<()> {
    let text = serde_json::to_string_pretty(report).expect("report serializes");
    match &config.report {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| iconv_core::Error::Io(e).into())
        }
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                // a closed pipe (e.g. `| head`) is not a failure of the run
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(iconv_core::Error::Io(e).into())
                }
                _ => Ok(()),
            }
        }
    }
}
