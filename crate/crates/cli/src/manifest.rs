//! Run manifests: a key=value text file written next to every batch of
//! output CSVs so a run can be reproduced from its artifacts alone.
//!
//! The manifest carries the volatile parts (timestamp, command line) so the
//! CSVs themselves stay byte-identical for a given config and seed.

use sha2::{Digest, Sha256};
use std::time::{SystemTime, UNIX_EPOCH};

pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    /// SHA-256 of the exact config text the run used.
    pub config_sha256: String,
    pub seed: u64,
    pub replications: usize,
    pub tool_version: String,
    pub created_unix: u64,
    /// The subcommand and arguments as invoked.
    pub command: String,
    /// Extra key=value pairs (e.g. digests of auxiliary input files).
    pub extra: Vec<(String, String)>,
}

pub fn sha256_hex(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    format!("{:x}", hasher.finalize())
}

impl Manifest {
    pub fn new(config_text: &str, seed: u64, replications: usize, command: String) -> Self {
        Self {
            config_sha256: sha256_hex(config_text),
            seed,
            replications,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            command,
            extra: Vec::new(),
        }
    }

    pub fn with_extra(mut self, key: &str, value: String) -> Self {
        self.extra.push((key.to_string(), value));
        self
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("config_sha256={}\n", self.config_sha256));
        out.push_str(&format!("seed={}\n", self.seed));
        out.push_str(&format!("replications={}\n", self.replications));
        out.push_str(&format!("tool_version={}\n", self.tool_version));
        out.push_str(&format!("created_unix={}\n", self.created_unix));
        out.push_str(&format!("command={}\n", self.command));
        for (k, v) in &self.extra {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }
}
