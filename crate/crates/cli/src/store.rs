//! Append-only NDJSON log of finished computations.
//!
//! Each line is one [`StoreRecord`]. Records are keyed by the operation name
//! and its canonical parameters; lookups return the newest matching line.
//! The file is held under an exclusive advisory lock while a command runs.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const ENV_VAR: &str = "ZEROSUM_STORE";
pub const DEFAULT_PATH: &str = "zerosum-results.ndjson";
pub const RECORD_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoreRecord {
    pub schema_version: u32,
    pub operation: String,
    /// Canonical parameters; the key is `operation` plus this object.
    pub params: Value,
    pub result: Value,
    pub exhaustive: bool,
    pub tool_version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
}

impl StoreRecord {
    fn same_key(&self, operation: &str, params: &Value) -> bool {
        self.operation == operation && &self.params == params
    }
}

pub struct ResultsStore {
    file: File,
}

/// `--store`, else `$ZEROSUM_STORE`, else the default file name.
pub fn resolve_path(flag: Option<&Path>) -> PathBuf {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(ENV_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_PATH))
}

pub fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

impl ResultsStore {
    /// Opens (creating if needed) and locks the store. Blocks while another
    /// process holds the lock.
    pub fn open(path: &Path) -> Result<Self> {
        let file = OpenOptions::new()
            .create(true)
            .read(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening results store {}", path.display()))?;
        file.lock()
            .with_context(|| format!("locking results store {}", path.display()))?;
        Ok(Self { file })
    }

    /// All readable records. A torn final line from an interrupted writer is skipped.
    pub fn records(&mut self) -> Result<Vec<StoreRecord>> {
        self.file.seek(SeekFrom::Start(0))?;
        let mut out = Vec::new();
        for line in BufReader::new(&self.file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if let Ok(rec) = serde_json::from_str::<StoreRecord>(&line) {
                out.push(rec);
            }
        }
        Ok(out)
    }

    /// Newest exhaustive record for the key.
    pub fn cached(&mut self, operation: &str, params: &Value) -> Result<Option<StoreRecord>> {
        Ok(self
            .records()?
            .into_iter()
            .rev()
            .find(|r| r.exhaustive && r.same_key(operation, params)))
    }

    /// Appends `record` unless a record with the same key and result exists.
    /// Returns whether a line was written.
    pub fn put(&mut self, record: &StoreRecord) -> Result<bool> {
        let duplicate = self.records()?.iter().any(|r| {
            r.same_key(&record.operation, &record.params)
                && r.result == record.result
                && r.exhaustive == record.exhaustive
        });
        if duplicate {
            return Ok(false);
        }
        let mut line = serde_json::to_string(record)?;
        line.push('\n');
        if !self.ends_with_newline()? {
            line.insert(0, '\n');
        }
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        Ok(true)
    }

    fn ends_with_newline(&mut self) -> Result<bool> {
        let len = self.file.seek(SeekFrom::End(0))?;
        if len == 0 {
            return Ok(true);
        }
        self.file.seek(SeekFrom::End(-1))?;
        let mut last = [0u8];
        std::io::Read::read_exact(&mut self.file, &mut last)?;
        Ok(last[0] == b'\n')
    }
}

impl Drop for ResultsStore {
    fn drop(&mut self) {
        let _ = self.file.unlock();
    }
}
