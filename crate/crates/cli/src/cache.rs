//! Result cache keyed by a hash of the command, tool version and request.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub version: String,
    pub command: String,
    pub request: serde_json::Value,
    pub result: String,
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
    version: String,
}

fn hash(command: &str, version: &str, request: &serde_json::Value) -> String {
    let body = serde_json::to_vec(&(command, version, request)).expect("request serializes");
    hex::encode(Sha256::digest(&body))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>, version: impl Into<String>) -> Self {
        Cache { dir: dir.into(), version: version.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key<R: Serialize>(&self, command: &str, request: &R) -> String {
        hash(command, &self.version, &serde_json::to_value(request).expect("request serializes"))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The stored result, if present and intact; damaged entries are deleted.
    pub fn lookup<R: Serialize>(&self, command: &str, request: &R) -> Option<String> {
        let key = self.key(command, request);
        let path = self.path(&key);
        let bytes = std::fs::read(&path).ok()?;
        let valid = serde_json::from_slice::<CacheEntry>(&bytes).ok().filter(|e| {
            e.key == key && e.version == self.version && e.command == command && hash(&e.command, &e.version, &e.request) == key
        });
        match valid {
            Some(e) => Some(e.result),
            None => {
                let _ = std::fs::remove_file(&path);
                None
            }
        }
    }

    /// Writes to a temporary file in the cache directory, then renames.
    pub fn store<R: Serialize>(&self, command: &str, request: &R, result: &str) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let request = serde_json::to_value(request).map_err(std::io::Error::other)?;
        let key = hash(command, &self.version, &request);
        let entry = CacheEntry { key: key.clone(), version: self.version.clone(), command: command.into(), request, result: result.into() };
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&serde_json::to_vec(&entry).map_err(std::io::Error::other)?)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(&key)).map_err(|e| e.error)?;
        Ok(())
    }
}
