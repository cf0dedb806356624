//! Run manifests: one `key<TAB>value` line per entry, in insertion order.

use sha2::{Digest, Sha256};

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

/// SHA-256 of the bytes as lowercase hex.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Peak resident set size in KiB, if the platform reports it.
pub fn peak_memory_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

#[derive(Debug)]
pub struct Manifest {
    entries: Vec<(String, String)>,
    start: Instant,
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Manifest {
            entries: vec![("command".into(), command.into())],
            start: Instant::now(),
        }
    }

    pub fn add(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    /// Adds `input.<role>` and `input.<role>.sha256` entries.
    pub fn input(&mut self, role: &str, path: &Path, bytes: &[u8]) {
        self.add(&format!("input.{}", role), path.display());
        self.add(&format!("input.{}.sha256", role), digest(bytes));
    }

    /// Adds `output.<role>` and `output.<role>.sha256` entries.
    pub fn output(&mut self, role: &str, path: &Path, bytes: &[u8]) {
        self.add(&format!("output.{}", role), path.display());
        self.add(&format!("output.{}.sha256", role), digest(bytes));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Renders the manifest, appending wall time and peak memory.
    pub fn finish(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            writeln!(out, "{}\t{}", key, value).unwrap();
        }
        writeln!(
            out,
            "wall_time_s\t{:.6}",
            self.start.elapsed().as_secs_f64()
        )
        .unwrap();
        match peak_memory_kib() {
            Some(kib) => writeln!(out, "peak_memory_kib\t{}", kib).unwrap(),
            None => writeln!(out, "peak_memory_kib\tunknown").unwrap(),
        }
        out
    }
}

/// Parses a rendered manifest back into key-value pairs.
pub fn parse(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once('\t'))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}
