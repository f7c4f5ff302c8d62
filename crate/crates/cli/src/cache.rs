//! On-disk automorphism cache.
//!
//! One JSON file per group, named by the SHA-256 of the engine version and the
//! canonical spec. Entries store generator images only and are re-verified
//! against the presentation on every load.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use spaceform_core::autos::{enumerate_automorphisms_bounded, AutSource, Automorphism};
use spaceform_core::{FiniteGroup, Result, ENGINE_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub version: String,
    pub spec: String,
    pub order: u64,
    pub images: Vec<Vec<usize>>,
    pub checksum: String,
}

impl CacheEntry {
    pub fn new(group: &FiniteGroup, auts: &[Automorphism]) -> Self {
        let images: Vec<Vec<usize>> = auts.iter().map(|a| a.images().to_vec()).collect();
        Self {
            version: ENGINE_VERSION.to_string(),
            spec: group.spec().to_string(),
            order: group.order() as u64,
            checksum: checksum(&images),
            images,
        }
    }
}

fn checksum(images: &[Vec<usize>]) -> String {
    let mut h = Sha256::new();
    for row in images {
        for x in row {
            h.update(x.to_le_bytes());
        }
        h.update(b";");
    }
    hex::encode(h.finalize())
}

pub fn cache_key(spec: &str) -> String {
    let mut h = Sha256::new();
    h.update(ENGINE_VERSION.as_bytes());
    h.update(b"\n");
    h.update(spec.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Load {
    Hit(Vec<Automorphism>),
    Miss,
    Rejected(String),
}

/// Writes `entry` atomically (temp file in the same directory, then rename).
pub fn cache_store(dir: &Path, entry: &CacheEntry) -> std::io::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", cache_key(&entry.spec)));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, entry)?;
    tmp.flush()?;
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

/// Loads and re-verifies the entry for `group`.
pub fn cache_load(dir: &Path, group: &FiniteGroup) -> Load {
    let spec = group.spec().to_string();
    let path = dir.join(format!("{}.json", cache_key(&spec)));
    let Ok(bytes) = fs::read(&path) else {
        return Load::Miss;
    };
    let entry: CacheEntry = match serde_json::from_slice(&bytes) {
        Ok(e) => e,
        Err(e) => return Load::Rejected(format!("unreadable cache entry {}: {e}", path.display())),
    };
    if entry.version != ENGINE_VERSION {
        return Load::Miss;
    }
    if entry.spec != spec || entry.order != group.order() as u64 {
        return Load::Rejected(format!("cache entry {} describes another group", path.display()));
    }
    if entry.checksum != checksum(&entry.images) {
        return Load::Rejected(format!("checksum mismatch in {}", path.display()));
    }
    let mut auts = Vec::with_capacity(entry.images.len());
    for images in entry.images {
        match Automorphism::from_images(group, images) {
            Ok(a) => auts.push(a),
            Err(e) => {
                return Load::Rejected(format!("invalid automorphism in {}: {e}", path.display()))
            }
        }
    }
    if !auts.windows(2).all(|w| w[0] < w[1]) {
        return Load::Rejected(format!("unsorted entry in {}", path.display()));
    }
    Load::Hit(auts)
}

/// Automorphism source backed by a directory, with an in-memory layer.
/// Problems with the directory never change results; they become warnings.
#[derive(Debug)]
pub struct DiskAutCache {
    dir: PathBuf,
    bound: u64,
    memory: Mutex<HashMap<String, Arc<Vec<Automorphism>>>>,
    warnings: Mutex<Vec<String>>,
}

impl DiskAutCache {
    pub fn new(dir: impl Into<PathBuf>, bound: u64) -> Self {
        Self {
            dir: dir.into(),
            bound,
            memory: Mutex::new(HashMap::new()),
            warnings: Mutex::new(Vec::new()),
        }
    }

    pub fn take_warnings(&self) -> Vec<String> {
        let mut w = std::mem::take(&mut *self.warnings.lock().unwrap());
        w.sort();
        w.dedup();
        w
    }

    fn warn(&self, message: String) {
        self.warnings.lock().unwrap().push(message);
    }
}

impl AutSource for DiskAutCache {
    fn automorphisms(&self, group: &FiniteGroup) -> Result<Arc<Vec<Automorphism>>> {
        let spec = group.spec().to_string();
        if let Some(hit) = self.memory.lock().unwrap().get(&spec) {
            return Ok(hit.clone());
        }
        let auts = match cache_load(&self.dir, group) {
            Load::Hit(auts) => auts,
            other => {
                if let Load::Rejected(why) = other {
                    self.warn(format!("{why}; recomputing"));
                }
                let auts = enumerate_automorphisms_bounded(group, self.bound)?;
                if let Err(e) = cache_store(&self.dir, &CacheEntry::new(group, &auts)) {
                    self.warn(format!(
                        "could not write cache in {}: {e}",
                        self.dir.display()
                    ));
                }
                auts
            }
        };
        let auts = Arc::new(auts);
        self.memory
            .lock()
            .unwrap()
            .entry(spec)
            .or_insert_with(|| auts.clone());
        Ok(auts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use spaceform_core::autos::enumerate_automorphisms;
    use spaceform_core::GroupSpec;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let g = FiniteGroup::build(&GroupSpec::OStar(2)).unwrap();
        let auts = enumerate_automorphisms(&g).unwrap();
        let path = cache_store(dir.path(), &CacheEntry::new(&g, &auts)).unwrap();
        assert_eq!(cache_load(dir.path(), &g), Load::Hit(auts.clone()));

        let mut entry: CacheEntry = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        entry.version = "other".into();
        fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
        assert_eq!(cache_load(dir.path(), &g), Load::Miss);

        fs::write(&path, b"{not json").unwrap();
        assert!(matches!(cache_load(dir.path(), &g), Load::Rejected(_)));

        let cache = DiskAutCache::new(dir.path(), 10_000);
        assert_eq!(*cache.automorphisms(&g).unwrap(), auts);
        assert_eq!(cache.take_warnings().len(), 1);
        assert_eq!(cache_load(dir.path(), &g), Load::Hit(auts));
    }

    #[test]
    fn tampered_images_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let g = FiniteGroup::build(&GroupSpec::Q8).unwrap();
        let auts = enumerate_automorphisms(&g).unwrap();
        let mut entry = CacheEntry::new(&g, &auts);
        entry.images[3] = vec![1, 1];
        entry.checksum = checksum(&entry.images);
        cache_store(dir.path(), &entry).unwrap();
        assert!(matches!(cache_load(dir.path(), &g), Load::Rejected(_)));
    }
}
