//! Append-only JSON-lines cache of integration results.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{IntegralError, IntegralResult, Method};

pub const CODE_VERSION: &str = concat!("gc3-", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub omega: String,
    pub method: Method,
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub code_version: String,
}

type Slot = (String, String, u64, u64);

/// Results for reference orientations, keyed by
/// `(canonical adjacency, form, samples, seed)`.
#[derive(Debug, Default)]
pub struct IntegralCache {
    path: Option<PathBuf>,
    entries: HashMap<Slot, CacheRecord>,
}

impl IntegralCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads records from `path` if it exists; new records are appended.
    pub fn open(path: &Path) -> Result<Self, IntegralError> {
        let mut cache = IntegralCache { path: Some(path.to_path_buf()), entries: HashMap::new() };
        if path.exists() {
            for (i, line) in BufReader::new(File::open(path)?).lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let r: CacheRecord = serde_json::from_str(&line)
                    .map_err(|e| IntegralError::Cache(format!("{}:{}: {e}", path.display(), i + 1)))?;
                if r.code_version == CODE_VERSION {
                    cache.entries.insert((r.key.clone(), r.omega.clone(), r.samples, r.seed), r);
                }
            }
        }
        Ok(cache)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str, omega: &str, samples: u64, seed: u64) -> Option<IntegralResult> {
        self.entries.get(&(key.to_string(), omega.to_string(), samples, seed)).map(|r| IntegralResult {
            value: r.value,
            std_error: r.std_error,
            method: r.method,
            samples: r.samples,
            seed: r.seed,
        })
    }

    pub fn insert(&mut self, key: &str, omega: &str, requested: u64, r: &IntegralResult) -> Result<(), IntegralError> {
        let rec = CacheRecord {
            key: key.to_string(),
            omega: omega.to_string(),
            method: r.method,
            value: r.value,
            std_error: r.std_error,
            samples: requested,
            seed: r.seed,
            code_version: CODE_VERSION.to_string(),
        };
        if let Some(path) = &self.path {
            let mut f = OpenOptions::new().create(true).append(true).open(path)?;
            writeln!(f, "{}", serde_json::to_string(&rec).expect("record serializes"))?;
        }
        self.entries.insert((rec.key.clone(), rec.omega.clone(), requested, r.seed), rec);
        Ok(())
    }
}
