//! On-disk cache of rendered command output.
//!
//! Entries are keyed by a SHA-256 digest of the input bytes and the full
//! request, live in `.slabcy-cache/` next to the input unless `SLABCY_CACHE`
//! names another directory, and are written to a temporary file and renamed
//! into place. Every failure is ignored: the cache is safe to delete.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "SLABCY_CACHE";

/// A stored command result.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// The cache for an input file, honouring `SLABCY_CACHE`.
    pub fn for_input(input: &Path) -> Self {
        let dir = match std::env::var_os(CACHE_ENV) {
            Some(d) if !d.is_empty() => PathBuf::from(d),
            _ => input
                .parent()
                .unwrap_or_else(|| Path::new("."))
                .join(".slabcy-cache"),
        };
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Hex digest of the input bytes and the request description.
    pub fn key(input: &[u8], request: &str) -> String {
        let mut h = Sha256::new();
        h.update((input.len() as u64).to_le_bytes());
        h.update(input);
        h.update(request.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn load(&self, key: &str) -> Option<Entry> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(&self, key: &str, entry: &Entry) {
        let _ = self.try_store(key, entry);
    }

    fn try_store(&self, key: &str, entry: &Entry) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_string(entry)?)?;
        fs::rename(&tmp, self.path(key)).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }
}
