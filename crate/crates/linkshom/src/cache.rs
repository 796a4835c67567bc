//! Cache of computed dimensions and ranks.
//!
//! Keys carry the engine version, so releases invalidate old entries, and
//! the parity of `d-1` rather than `d` itself: the cached quantities do not
//! depend on `d` beyond that parity, which maximizes reuse across ambient
//! dimensions. Values are plain numbers (dimensions or ranks), never
//! matrices. Entries are content-addressed, written once and never
//! rewritten; concurrent writers race benignly to identical contents.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::arnold::GenParity;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub version: String,
    pub m: u32,
    pub n: u32,
    pub parity: GenParity,
    pub t: u32,
    pub p: u32,
    pub kind: String,
}

impl CacheKey {
    pub fn new(m: u32, n: u32, parity: GenParity, t: u32, p: u32, kind: &str) -> Self {
        Self {
            version: crate::ENGINE_VERSION.to_string(),
            m,
            n,
            parity,
            t,
            p,
            kind: kind.to_string(),
        }
    }

    fn file_name(&self) -> String {
        // content address: FNV-1a over the canonical key encoding
        let encoded = format!(
            "{}|{}|{}|{:?}|{}|{}|{}",
            self.version, self.m, self.n, self.parity, self.t, self.p, self.kind
        );
        let mut hash: u64 = 0xcbf29ce484222325;
        for byte in encoded.bytes() {
            hash ^= byte as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
        format!("{hash:016x}.json")
    }
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    key: CacheKey,
    value: u64,
}

/// In-memory map with an optional directory spill. Writes are idempotent:
/// a record is written through a temp file and an atomic rename, and an
/// existing file is left untouched.
#[derive(Debug, Default)]
pub struct RankCache {
    memory: Mutex<HashMap<CacheKey, u64>>,
    dir: Option<PathBuf>,
}

impl RankCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    pub fn with_dir(dir: PathBuf) -> std::io::Result<Self> {
        std::fs::create_dir_all(&dir)?;
        Ok(Self { memory: Mutex::new(HashMap::new()), dir: Some(dir) })
    }

    /// Resolves the cache directory from the override flag or the
    /// `LINKSHOM_CACHE` environment variable; in-memory otherwise.
    pub fn from_env(override_dir: Option<PathBuf>) -> std::io::Result<Self> {
        match override_dir.or_else(|| std::env::var_os("LINKSHOM_CACHE").map(PathBuf::from)) {
            Some(dir) => Self::with_dir(dir),
            None => Ok(Self::in_memory()),
        }
    }

    pub fn lookup(&self, key: &CacheKey) -> Option<u64> {
        if let Some(hit) = self.memory.lock().expect("cache lock").get(key) {
            return Some(*hit);
        }
        let dir = self.dir.as_ref()?;
        let path = dir.join(key.file_name());
        let text = std::fs::read_to_string(path).ok()?;
        let record: CacheRecord = serde_json::from_str(&text).ok()?;
        if &record.key != key {
            return None; // hash collision or stale file; treat as miss
        }
        self.memory.lock().expect("cache lock").insert(key.clone(), record.value);
        Some(record.value)
    }

    pub fn store(&self, key: &CacheKey, value: u64) {
        self.memory.lock().expect("cache lock").insert(key.clone(), value);
        if let Some(dir) = &self.dir {
            let path = dir.join(key.file_name());
            if path.exists() {
                return; // entries are immutable once written
            }
            let record = CacheRecord { key: key.clone(), value };
            let tmp = dir.join(format!("{}.tmp.{}", key.file_name(), std::process::id()));
            if let Ok(text) = serde_json::to_string(&record) {
                if std::fs::write(&tmp, text).is_ok() {
                    let _ = std::fs::rename(&tmp, &path);
                }
            }
        }
    }

    pub fn get_or_insert_with<E>(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> Result<u64, E>,
    ) -> Result<u64, E> {
        if let Some(hit) = self.lookup(key) {
            return Ok(hit);
        }
        let value = compute()?;
        self.store(key, value);
        Ok(value)
    }
}
