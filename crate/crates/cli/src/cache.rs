//! On-disk cache of computed tables.
//!
//! Each entry is one JSON file named by the SHA-256 of its key, holding the
//! schema version, the key, the payload and a checksum of the payload's
//! compact serialization. Writes go to a temporary file in the same
//! directory and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: u64 = 1;

pub struct Cache {
    dir: PathBuf,
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.json", digest(key)))
    }

    /// The payload stored under `key`. Missing entries and entries from
    /// other schema versions are `None`; corrupt ones are `None` with a
    /// warning on stderr.
    pub fn load(&self, key: &str) -> Option<Value> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        let warn = |why: &str| eprintln!("warning: ignoring cache entry {} ({why}), recomputing", path.display());
        let Ok(entry) = serde_json::from_str::<Value>(&text) else {
            warn("not JSON");
            return None;
        };
        if entry["schema"].as_u64() != Some(SCHEMA) {
            return None;
        }
        if entry["key"].as_str() != Some(key) {
            warn("key mismatch");
            return None;
        }
        let payload = entry.get("payload")?.clone();
        if entry["checksum"].as_str() != Some(&digest(&payload.to_string())) {
            warn("checksum mismatch");
            return None;
        }
        Some(payload)
    }

    pub fn store(&self, key: &str, payload: &Value) -> Result<()> {
        let entry = json!({
            "schema": SCHEMA,
            "key": key,
            "checksum": digest(&payload.to_string()),
            "payload": payload,
        });
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(entry.to_string().as_bytes())?;
        tmp.flush()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }
}
