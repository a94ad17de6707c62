//! Append-only JSON-lines cache for computed maximal orders and reports.
//! The last entry per key wins; entries from other toolkit versions are
//! ignored. Writes go through a single in-process writer plus a lock
//! file, so concurrent processes serialize cleanly.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub payload: serde_json::Value,
    pub toolkit_version: String,
    pub timestamp: u64,
}

pub struct Cache {
    path: PathBuf,
}

static WRITER: Mutex<()> = Mutex::new(());

impl Cache {
    pub fn open(path: impl Into<PathBuf>) -> Self {
        Cache { path: path.into() }
    }

    /// Cache path from an explicit flag or the QMOD_CACHE environment
    /// variable.
    pub fn from_flag_or_env(flag: Option<&str>) -> Option<Self> {
        match flag {
            Some(p) => Some(Cache::open(p)),
            None => std::env::var("QMOD_CACHE").ok().map(Cache::open),
        }
    }

    pub fn get(&self, key: &str) -> Result<Option<serde_json::Value>> {
        if !self.path.exists() {
            return Ok(None);
        }
        let file = std::fs::File::open(&self.path)?;
        let mut hit = None;
        for line in BufReader::new(file).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: CacheEntry = match serde_json::from_str(&line) {
                Ok(e) => e,
                Err(_) => continue, // tolerate torn tail lines
            };
            if entry.key == key && entry.toolkit_version == TOOLKIT_VERSION {
                hit = Some(entry.payload);
            }
        }
        Ok(hit)
    }

    pub fn put(&self, key: &str, payload: serde_json::Value) -> Result<()> {
        let entry = CacheEntry {
            key: key.to_string(),
            payload,
            toolkit_version: TOOLKIT_VERSION.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let line = serde_json::to_string(&entry)?;
        let _guard = WRITER.lock().expect("cache writer poisoned");
        let _lock = FileLock::acquire(&self.path)?;
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{line}")?;
        Ok(())
    }
}

/// Sentinel-file lock with bounded retries.
struct FileLock {
    path: PathBuf,
}

impl FileLock {
    fn acquire(target: &Path) -> Result<Self> {
        let path = target.with_extension("lock");
        for _ in 0..500 {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(_) => return Ok(FileLock { path }),
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    std::thread::sleep(Duration::from_millis(5));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Err(Error::CacheIo(format!(
            "could not acquire lock {}",
            path.display()
        )))
    }
}

impl Drop for FileLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn temp_path(name: &str) -> PathBuf {
        let mut p = std::env::temp_dir();
        p.push(format!("qmod-cache-test-{}-{}", std::process::id(), name));
        let _ = std::fs::remove_file(&p);
        p
    }

    #[test]
    fn roundtrip_and_last_wins() {
        let path = temp_path("roundtrip");
        let cache = Cache::open(&path);
        assert!(cache.get("k").unwrap().is_none());
        cache.put("k", serde_json::json!({"v": 1})).unwrap();
        cache.put("other", serde_json::json!(7)).unwrap();
        cache.put("k", serde_json::json!({"v": 2})).unwrap();
        assert_eq!(cache.get("k").unwrap(), Some(serde_json::json!({"v": 2})));
        assert_eq!(cache.get("other").unwrap(), Some(serde_json::json!(7)));
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn version_mismatch_invalidates() {
        let path = temp_path("version");
        let stale = CacheEntry {
            key: "k".into(),
            payload: serde_json::json!(1),
            toolkit_version: "0.0.0-old".into(),
            timestamp: 0,
        };
        std::fs::write(
            &path,
            format!("{}\n", serde_json::to_string(&stale).unwrap()),
        )
        .unwrap();
        let cache = Cache::open(&path);
        assert!(cache.get("k").unwrap().is_none());
        let _ = std::fs::remove_file(&path);
    }

    #[test]
    fn payload_bytes_are_stable() {
        let path = temp_path("stable");
        let cache = Cache::open(&path);
        let payload = serde_json::json!({"basis": [["1/2", "0"]], "a": -1});
        cache.put("x", payload.clone()).unwrap();
        let got = cache.get("x").unwrap().unwrap();
        assert_eq!(
            serde_json::to_string(&payload).unwrap(),
            serde_json::to_string(&got).unwrap()
        );
        let _ = std::fs::remove_file(&path);
    }
}
