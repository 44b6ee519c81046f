//! Append-only JSONL log of classification results.

use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::output::OutputRecord;

pub const CACHE_ENV: &str = "CUBESUM_CACHE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    /// `"num/den"`.
    pub a: String,
    pub verdict: String,
    pub evidence: Value,
    pub height: u64,
    pub curated: bool,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    /// The record as printed, replayed verbatim by `--cache-only`.
    pub record: OutputRecord,
}

impl CacheEntry {
    pub fn new(a: String, height: u64, curated: bool, record: OutputRecord) -> Self {
        let verdict = record.result.get("verdict").and_then(Value::as_str).unwrap_or("").to_string();
        let evidence = record.result.get("evidence").cloned().unwrap_or(Value::Null);
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        CacheEntry {
            a,
            verdict,
            evidence,
            height,
            curated,
            timestamp,
            record,
        }
    }
}

/// `$CUBESUM_CACHE`, else `$XDG_CACHE_HOME/cubesum/classify.jsonl`, else
/// `$HOME/.cache/cubesum/classify.jsonl`, else `./cubesum-cache.jsonl`.
pub fn default_path() -> PathBuf {
    if let Some(p) = std::env::var_os(CACHE_ENV) {
        return p.into();
    }
    let base = std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| Path::new(&h).join(".cache")));
    match base {
        Some(b) => b.join("cubesum").join("classify.jsonl"),
        None => PathBuf::from("cubesum-cache.jsonl"),
    }
}

pub fn append(path: &Path, entry: &CacheEntry) -> io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    let mut line = serde_json::to_string(entry).map_err(io::Error::other)?;
    line.push('\n');
    f.write_all(line.as_bytes())
}

/// Every parseable entry; unreadable lines are skipped.
pub fn load(path: &Path) -> io::Result<Vec<CacheEntry>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    Ok(text.lines().filter_map(|l| serde_json::from_str(l).ok()).collect())
}

/// The entry with the greatest height for `a`; the later one wins ties.
pub fn lookup<'a>(entries: &'a [CacheEntry], a: &str, curated: bool) -> Option<&'a CacheEntry> {
    entries
        .iter()
        .filter(|e| e.a == a && e.curated == curated)
        .fold(None, |best: Option<&CacheEntry>, e| match best {
            Some(b) if b.height > e.height => Some(b),
            _ => Some(e),
        })
}
