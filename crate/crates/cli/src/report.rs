//! The versioned JSON report emitted by every command. Field order is
//! fixed by the struct; identical inputs give byte-identical reports
//! apart from the timing block.

use std::time::Duration;

use serde::Serialize;

pub const SCHEMA: &str = "soficshift-report/1";

#[derive(Debug, Serialize)]
pub struct Input {
    pub source: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub input: Input,
    pub results: serde_json::Value,
    pub warnings: Vec<String>,
    pub timings: Timings,
}

impl Report {
    pub fn new(
        command: String,
        (source, sha256): (String, String),
        results: serde_json::Value,
        warnings: Vec<String>,
        elapsed: Duration,
    ) -> Self {
        Report {
            schema: SCHEMA,
            command,
            input: Input { source, sha256 },
            results,
            warnings,
            timings: Timings {
                total_ms: elapsed.as_secs_f64() * 1e3,
            },
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn digest_bytes(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let out = Sha256::digest(bytes);
    out.iter().map(|b| format!("{b:02x}")).collect()
}
