//! On-disk report cache keyed by the SHA-256 of the full configuration.

use sha2::{Digest, Sha256};
use std::path::PathBuf;

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        for p in parts {
            h.update((p.len() as u64).to_le_bytes());
            h.update(p.as_bytes());
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        std::fs::read_to_string(self.path(key)?).ok()
    }

    /// Stores a report; failures to write only disable caching.
    pub fn put(&self, key: &str, report: &str) {
        if let (Some(dir), Some(path)) = (&self.dir, self.path(key)) {
            if std::fs::create_dir_all(dir).is_ok() {
                let tmp = path.with_extension("tmp");
                if std::fs::write(&tmp, report).is_ok() {
                    let _ = std::fs::rename(tmp, path);
                }
            }
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
