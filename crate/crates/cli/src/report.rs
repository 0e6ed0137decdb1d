//! Score reports: a versioned JSON document and a short text table.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use seld3d::metrics::{Interval, Scores};

use crate::CliError;

pub const SCHEMA: u32 = 1;

/// Column labels in table order.
const COLUMNS: [(&str, &str, &str); 5] = [
    ("er", "ER", ""),
    ("f1", "F1", "%"),
    ("doa_error", "DOA error", "deg"),
    ("recall", "Recall", "%"),
    ("dist_error", "Dist. error", "m"),
];

fn interval(iv: &Interval) -> Value {
    json!({
        "estimate": iv.estimate,
        "low": iv.low,
        "high": iv.high,
        "std_error": iv.std_error,
    })
}

pub fn to_json(command: &str, clips: usize, config: &[(String, String)], scores: &Scores) -> Value {
    let values = scores.values();
    let mut metrics = serde_json::Map::new();
    for ((key, _, _), v) in COLUMNS.iter().zip(values) {
        metrics.insert(key.to_string(), json!(v));
    }
    let ci = scores.ci.as_ref().map(|ci| {
        json!({
            "significance": ci.significance,
            "er": interval(&ci.er),
            "f1": interval(&ci.f1),
            "doa_error": interval(&ci.doa_error),
            "recall": interval(&ci.recall),
            "dist_error": interval(&ci.dist_error),
        })
    });
    let config: serde_json::Map<String, Value> = config.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
    json!({
        "schema": SCHEMA,
        "command": command,
        "clips": clips,
        "config": config,
        "scores": metrics,
        "ci": ci,
    })
}

pub fn to_text(clips: usize, scores: &Scores) -> String {
    let mut out = format!("clips: {clips}\n");
    let intervals = scores
        .ci
        .as_ref()
        .map(|ci| [ci.er, ci.f1, ci.doa_error, ci.recall, ci.dist_error]);
    for (i, ((_, label, unit), v)) in COLUMNS.iter().zip(scores.values()).enumerate() {
        let mut line = format!("{label:<12}{v:>9.3} {unit:<3}");
        if let Some(ivs) = &intervals {
            line += &format!("  [{:.3}, {:.3}]", ivs[i].low, ivs[i].high);
        }
        out += line.trim_end();
        out.push('\n');
    }
    if let Some(ci) = &scores.ci {
        out += &format!("intervals: jackknife, significance {}\n", ci.significance);
    }
    out
}

/// Text to stderr; JSON to `path` or stdout.
pub fn emit(report: &Value, text: &str, path: Option<&Path>) -> Result<(), CliError> {
    eprint!("{text}");
    let body = serde_json::to_string_pretty(report).expect("plain JSON values");
    match path {
        Some(p) => fs::write(p, body + "\n").map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}
