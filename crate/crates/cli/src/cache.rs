// SPDX-License-Identifier: Apache-2.0

//! On-disk cache of class-group multiplication tables, one JSON file per
//! discriminant. Entries carry a format version and a SHA-256 checksum of
//! their payload; anything that fails to load or verify is recomputed.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use quadrep::ClassGroup;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

const CACHE_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Payload {
    discriminant: i64,
    forms: Vec<String>,
    table: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct Entry {
    version: u32,
    checksum: String,
    payload: Payload,
}

fn checksum(payload: &Payload) -> String {
    let bytes = serde_json::to_vec(payload).expect("payload serializes");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    fn path(dir: &Path, d: i64) -> PathBuf {
        dir.join(format!("classgroup_v{CACHE_VERSION}_{}.json", d.unsigned_abs()))
    }

    /// The class group of `d`, from the cache when a valid entry exists.
    /// Messages about cache use go to `notes`.
    pub fn class_group(&self, d: i64, notes: &mut Vec<String>) -> quadrep::Result<Arc<ClassGroup>> {
        let Some(dir) = &self.dir else {
            return Ok(Arc::new(ClassGroup::enumerate_reduced(d)?));
        };
        let path = Self::path(dir, d);
        if let Some(g) = Self::load(&path, d)? {
            notes.push(format!("cache hit {}", path.display()));
            return Ok(Arc::new(g));
        }
        let g = ClassGroup::enumerate_reduced(d)?;
        let payload = Payload {
            discriminant: d,
            forms: g.reps().iter().map(|f| f.to_string()).collect(),
            table: g.table(),
        };
        let entry = Entry { version: CACHE_VERSION, checksum: checksum(&payload), payload };
        let written = fs::create_dir_all(dir)
            .and_then(|_| fs::write(&path, serde_json::to_vec_pretty(&entry).expect("entry serializes")));
        match written {
            Ok(()) => notes.push(format!("cache store {}", path.display())),
            Err(e) => notes.push(format!("cache write failed for {}: {e}", path.display())),
        }
        Ok(Arc::new(g))
    }

    fn load(path: &Path, d: i64) -> quadrep::Result<Option<ClassGroup>> {
        let Ok(bytes) = fs::read(path) else {
            return Ok(None);
        };
        let Ok(entry) = serde_json::from_slice::<Entry>(&bytes) else {
            return Ok(None);
        };
        if entry.version != CACHE_VERSION
            || entry.payload.discriminant != d
            || entry.checksum != checksum(&entry.payload)
        {
            return Ok(None);
        }
        let Some(g) = ClassGroup::with_table(d, &entry.payload.table)? else {
            return Ok(None);
        };
        let forms: Vec<String> = g.reps().iter().map(|f| f.to_string()).collect();
        if forms != entry.payload.forms {
            return Ok(None);
        }
        Ok(Some(g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let mut notes = Vec::new();
        let a = cache.class_group(-108, &mut notes).unwrap();
        let b = cache.class_group(-108, &mut notes).unwrap();
        assert_eq!(a.table(), b.table());
        assert!(notes[0].starts_with("cache store"));
        assert!(notes[1].starts_with("cache hit"));
    }

    #[test]
    fn corrupt_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()));
        let mut notes = Vec::new();
        let good = cache.class_group(-231, &mut notes).unwrap().table();
        let path = Cache::path(dir.path(), -231);
        let text = fs::read_to_string(&path).unwrap();
        // swap two table entries without fixing the checksum
        let tampered = text.replacen("\"table\": [\n      [\n        0,\n        1", "\"table\": [\n      [\n        1,\n        0", 1);
        assert_ne!(text, tampered);
        fs::write(&path, tampered).unwrap();
        notes.clear();
        let again = cache.class_group(-231, &mut notes).unwrap();
        assert_eq!(again.table(), good);
        assert!(notes[0].starts_with("cache store"));
        fs::write(&path, "not json").unwrap();
        assert_eq!(cache.class_group(-231, &mut notes).unwrap().table(), good);
    }
}
