//! Append-only JSON-lines store of exact colengths.
//!
//! Each line is `{"key": <sha256 of the sample key>, "colength": n,
//! "version": <engine version>}`. Lines written by another engine version
//! are ignored, as are lines that fail to parse (a partially written last
//! line from a concurrent or interrupted writer). Every record is written
//! with a single `write` on a file opened for appending, so concurrent
//! writers interleave whole lines.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Mutex, RwLock};

use hk_core::frobenius::ColengthCache;
use hk_core::ENGINE_VERSION;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_FILE: &str = "colengths.jsonl";
pub const CACHE_ENV: &str = "HK_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub colength: u64,
    pub version: String,
}

/// Content digest of a sample key.
pub fn digest(key: &str) -> String {
    hex::encode(Sha256::digest(key.as_bytes()))
}

pub struct FileCache {
    path: PathBuf,
    version: String,
    entries: RwLock<HashMap<String, u64>>,
    writer: Mutex<Option<File>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl FileCache {
    /// Opens (creating if needed) the cache in `dir`. An unwritable
    /// directory yields a read-only cache and a warning on standard error.
    pub fn open(dir: &Path) -> FileCache {
        FileCache::open_versioned(dir, ENGINE_VERSION)
    }

    pub fn open_versioned(dir: &Path, version: &str) -> FileCache {
        let path = dir.join(CACHE_FILE);
        let entries = read_entries(&path, version).unwrap_or_default();
        let writer = fs::create_dir_all(dir)
            .and_then(|_| OpenOptions::new().create(true).read(true).append(true).open(&path))
            .and_then(terminate_partial_line);
        let writer = match writer {
            Ok(f) => Some(f),
            Err(err) => {
                eprintln!(
                    "warning: cache {} is not writable ({err}); continuing without storing results",
                    path.display()
                );
                None
            }
        };
        FileCache {
            path,
            version: version.to_string(),
            entries: RwLock::new(entries),
            writer: Mutex::new(writer),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    fn append(&self, entry: &CacheEntry) -> io::Result<()> {
        let mut guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let Some(file) = guard.as_mut() else {
            return Ok(());
        };
        let mut line = serde_json::to_string(entry).map_err(io::Error::other)?;
        line.push('\n');
        file.write_all(line.as_bytes())
    }
}

/// Ends a partial last line so the next record starts on a line of its own.
fn terminate_partial_line(mut file: File) -> io::Result<File> {
    use std::io::{Read, Seek, SeekFrom};
    if file.metadata()?.len() > 0 {
        file.seek(SeekFrom::End(-1))?;
        let mut last = [0u8];
        file.read_exact(&mut last)?;
        if last[0] != b'\n' {
            file.write_all(b"\n")?;
        }
    }
    Ok(file)
}

fn read_entries(path: &Path, version: &str) -> io::Result<HashMap<String, u64>> {
    let file = File::open(path)?;
    let mut out = HashMap::new();
    for line in BufReader::new(file).lines() {
        let Ok(line) = line else { break };
        if let Ok(entry) = serde_json::from_str::<CacheEntry>(&line) {
            if entry.version == version {
                out.insert(entry.key, entry.colength);
            }
        }
    }
    Ok(out)
}

impl ColengthCache for FileCache {
    fn fetch(&self, key: &str) -> Option<u64> {
        let found = self.entries.read().unwrap_or_else(|e| e.into_inner()).get(&digest(key)).copied();
        match found {
            Some(_) => self.hits.fetch_add(1, Ordering::Relaxed),
            None => self.misses.fetch_add(1, Ordering::Relaxed),
        };
        found
    }

    fn store(&self, key: &str, colength: u64) {
        let key = digest(key);
        let fresh = self
            .entries
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .insert(key.clone(), colength)
            .is_none();
        if !fresh {
            return;
        }
        let entry = CacheEntry {
            key,
            colength,
            version: self.version.clone(),
        };
        if let Err(err) = self.append(&entry) {
            eprintln!("warning: could not write to cache {}: {err}", self.path.display());
        }
    }
}
