use std::fmt::Write;
use std::process::ExitCode;

use serde_json::{json, Map, Value};
use zerosum_core::bounds::TraceStep;
use zerosum_core::{BoundRecord, GroupSpec};

/// Version of every JSON document the CLI prints; bump on format changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Exit statuses shared by the subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    Error = 1,
    Limited = 2,
    Negative = 3,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s as u8)
    }
}

/// What a command prints, in both output styles.
pub struct Report {
    pub status: Status,
    pub json: Value,
    pub text: String,
}

impl Report {
    /// Wraps `body` with the version and command name.
    pub fn new(command: &str, status: Status, body: Value, text: String) -> Self {
        let mut doc = Map::new();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("command".into(), json!(command));
        if let Value::Object(fields) = body {
            doc.extend(fields);
        }
        Self {
            status,
            json: Value::Object(doc),
            text,
        }
    }
}

pub fn group_name(factors: &[u64]) -> String {
    GroupSpec::new(factors).map_or_else(|_| format!("{factors:?}"), |g| g.to_string())
}

pub fn trace_json(trace: &[TraceStep]) -> Value {
    Value::Array(
        trace
            .iter()
            .map(|s| {
                json!({
                    "rule": s.rule.id(),
                    "conclusion": s.conclusion,
                    "premises": s.premises,
                    "evidence": s.evidence,
                    "note": s.note,
                })
            })
            .collect(),
    )
}

/// A bound record with big integers as decimal strings.
pub fn record_json(rec: &BoundRecord) -> Value {
    json!({
        "invariant": rec.invariant.symbol(),
        "group": rec.group.to_string(),
        "factors": rec.group.factors().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "lower": rec.lower.to_string(),
        "upper": rec.upper.as_ref().map(|u| u.to_string()),
        "exact": rec.exact,
        "trace": trace_json(&rec.trace),
    })
}

pub fn record_text(rec: &BoundRecord) -> String {
    let mut out = format!("{rec}\n");
    for (i, s) in rec.trace.iter().enumerate() {
        let ev = serde_json::to_value(s.evidence).unwrap_or_default();
        let _ = writeln!(
            out,
            "  {:>2}. [{}] {} ({})",
            i + 1,
            s.rule,
            s.conclusion,
            ev.as_str().unwrap_or("?")
        );
        for p in &s.premises {
            let _ = writeln!(out, "        from {p}");
        }
        if let Some(note) = &s.note {
            let _ = writeln!(out, "        note: {note}");
        }
    }
    out
}

/// Indents a multi-line block.
pub fn indent(block: &str, by: &str) -> String {
    block.lines().map(|l| format!("{by}{l}\n")).collect()
}
