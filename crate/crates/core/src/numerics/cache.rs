//! Constant cache keyed by canonical index string and precision.
//!
//! On disk it is an append-only JSON-lines file, one record per line:
//! `{"key":"z(3,9)","prec_bits":256,"mid":"<decimal>","rad_log2":-200}`.
//! The midpoint is written as the exact terminating decimal of the
//! fixed-point value, and `rad_log2` is an upper bound `rad ≤ 2^rad_log2`.

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::IteratorRandom;
use serde::{Deserialize, Serialize};

use super::ball::Ball;
use super::{eval_index_uncached, NumericsError, Precision};
use crate::word::IndexVector;

pub const CACHE_FILE: &str = "constants.jsonl";

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CacheRecord {
    pub key: String,
    pub prec_bits: u32,
    pub mid: String,
    pub rad_log2: i64,
}

impl CacheRecord {
    fn from_ball(key: &str, ball: &Ball) -> Self {
        CacheRecord {
            key: key.to_string(),
            prec_bits: ball.prec(),
            mid: ball.mid_exact_decimal(),
            rad_log2: ball.rad_log2(),
        }
    }

    fn to_ball(&self) -> Option<Ball> {
        let mid = Ball::from_decimal_str(&self.mid, self.prec_bits)?;
        let exponent = self.rad_log2 + self.prec_bits as i64;
        let rad = if exponent >= 0 {
            BigUint::one() << exponent as u64
        } else {
            BigUint::one()
        };
        Some(mid.add_error_ulps(&rad))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheStats {
    pub records: usize,
    pub keys: usize,
    pub max_prec_bits: u32,
}

/// Shared store of evaluated constants; safe to use from many threads.
#[derive(Debug, Default)]
pub struct ConstantCache {
    entries: RwLock<HashMap<String, BTreeMap<u32, Ball>>>,
    file: Option<Mutex<File>>,
    path: Option<PathBuf>,
}

impl ConstantCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) `dir/constants.jsonl`. A non-empty cache is
    /// validated by recomputing one random entry at low precision.
    pub fn open(dir: &Path) -> Result<Self, NumericsError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(CACHE_FILE);
        let mut entries: HashMap<String, BTreeMap<u32, Ball>> = HashMap::new();
        if path.exists() {
            for record in read_records(&path)? {
                let ball = record.to_ball().ok_or_else(|| {
                    NumericsError::Cache(format!("bad midpoint for {}", record.key))
                })?;
                entries
                    .entry(record.key)
                    .or_default()
                    .insert(record.prec_bits, ball);
            }
        }
        let cache = ConstantCache {
            entries: RwLock::new(entries),
            file: Some(Mutex::new(
                OpenOptions::new().create(true).append(true).open(&path)?,
            )),
            path: Some(path),
        };
        cache.validate_random_entry()?;
        Ok(cache)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Entry at `prec_bits` or better, rounded to `prec_bits`.
    pub fn get(&self, key: &str, prec_bits: u32) -> Option<Ball> {
        let entries = self.entries.read().expect("cache lock");
        entries
            .get(key)?
            .range(prec_bits..)
            .next()
            .map(|(_, ball)| ball.with_prec(prec_bits))
    }

    pub fn insert(&self, key: &str, ball: Ball) -> Result<(), NumericsError> {
        let mut entries = self.entries.write().expect("cache lock");
        if let Some(file) = &self.file {
            let line = serde_json::to_string(&CacheRecord::from_ball(key, &ball))
                .map_err(|e| NumericsError::Cache(e.to_string()))?;
            let mut file = file.lock().expect("cache file lock");
            writeln!(file, "{line}")?;
        }
        entries
            .entry(key.to_string())
            .or_default()
            .insert(ball.prec(), ball);
        Ok(())
    }

    pub fn get_or_compute<F>(
        &self,
        key: &str,
        prec_bits: u32,
        compute: F,
    ) -> Result<Ball, NumericsError>
    where
        F: FnOnce() -> Result<Ball, NumericsError>,
    {
        if let Some(hit) = self.get(key, prec_bits) {
            return Ok(hit);
        }
        let ball = compute()?;
        self.insert(key, ball.clone())?;
        Ok(ball)
    }

    pub fn stats(&self) -> CacheStats {
        let entries = self.entries.read().expect("cache lock");
        CacheStats {
            records: entries.values().map(BTreeMap::len).sum(),
            keys: entries.len(),
            max_prec_bits: entries
                .values()
                .flat_map(|m| m.keys().copied())
                .max()
                .unwrap_or(0),
        }
    }

    fn validate_random_entry(&self) -> Result<(), NumericsError> {
        let entries = self.entries.read().expect("cache lock");
        let mut rng = rand::thread_rng();
        let Some((key, levels)) = entries.iter().choose(&mut rng) else {
            return Ok(());
        };
        let stored = levels.values().next_back().expect("non-empty level map");
        let ix: IndexVector = key
            .parse()
            .map_err(|e| NumericsError::Cache(format!("unparseable key {key}: {e}")))?;
        let precision = Precision::new(12)?;
        let fresh = eval_index_uncached(&ix, &precision)?;
        if !fresh.overlaps(stored) {
            return Err(NumericsError::Cache(format!(
                "stored value for {key} disagrees with a fresh evaluation"
            )));
        }
        Ok(())
    }
}

/// Parses every record in a cache file.
pub fn read_records(path: &Path) -> Result<Vec<CacheRecord>, NumericsError> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CacheRecord = serde_json::from_str(&line)
            .map_err(|e| NumericsError::Cache(format!("line {}: {e}", lineno + 1)))?;
        out.push(record);
    }
    Ok(out)
}

/// Removes the cache file under `dir`; returns whether one existed.
pub fn clear(dir: &Path) -> Result<bool, NumericsError> {
    let path = dir.join(CACHE_FILE);
    if path.exists() {
        fs::remove_file(path)?;
        Ok(true)
    } else {
        Ok(false)
    }
}
