//! Run records: what was run, on which input bytes, with which outcome.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Hex-encoded SHA-256 of the input bytes; stable across reruns of
/// identical inputs.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub command: String,
    pub options: Vec<String>,
    pub input_digest: Option<String>,
    pub payload: serde_json::Value,
    pub tool_version: String,
    pub timestamp_epoch_secs: u64,
}

impl RunRecord {
    pub fn new(command: &str, options: Vec<String>, input: Option<&[u8]>) -> Self {
        let timestamp_epoch_secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunRecord {
            command: command.to_string(),
            options,
            input_digest: input.map(sha256_hex),
            payload: serde_json::Value::Null,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_epoch_secs,
        }
    }
}
