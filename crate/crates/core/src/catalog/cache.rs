//! Content-addressed on-disk cache of half-orbit inventories.
//!
//! One file per (group, type, level, half generators, nodal class, side,
//! engine version),
//! named by the SHA-256 of the canonical key. Writes go through a temporary
//! file in the same directory and a rename, so readers never see a partial
//! record.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::classic::Tuple;
use crate::error::{Error, Result};
use crate::matching::{NodeIndex, Shadow};

pub const ENGINE_VERSION: &str = concat!("nielsen-", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Head,
    Tail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub group: String,
    pub ramification_type: Vec<String>,
    pub k: usize,
    pub pure_halves: bool,
    pub class: String,
    pub side: Side,
    pub engine: String,
}

impl CacheKey {
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("key serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfOrbitSummary {
    pub shadow_size: usize,
    pub braid_orbits: usize,
    pub braid_orbit_size: usize,
    pub normalizer_order: usize,
    pub representative: Tuple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfOrbitInventory {
    pub x0: crate::perm::Perm,
    pub orbits: Vec<HalfOrbitSummary>,
}

impl HalfOrbitInventory {
    pub fn of(shadow: &Shadow) -> HalfOrbitInventory {
        HalfOrbitInventory {
            x0: shadow.x0.clone(),
            orbits: shadow
                .orbits
                .iter()
                .enumerate()
                .map(|(i, o)| HalfOrbitSummary {
                    shadow_size: o.shadow_size,
                    braid_orbits: o.members.len(),
                    braid_orbit_size: shadow.base_size(i),
                    normalizer_order: o.normalizer_order,
                    representative: shadow.base_representative(i).clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: CacheKey,
    pub payload: HalfOrbitInventory,
}

/// Every (key, inventory) pair of a built index, heads first.
pub fn inventories(index: &NodeIndex<'_>) -> Result<Vec<(CacheKey, HalfOrbitInventory)>> {
    let table = index.group.conjugacy_classes()?;
    let mut out = Vec::new();
    for (side, shadows) in [(Side::Head, &index.heads), (Side::Tail, &index.tails)] {
        for sh in shadows.iter().flatten() {
            let key = CacheKey {
                group: index.group.fingerprint(),
                ramification_type: index.rt.labels.clone(),
                k: index.k(),
                pure_halves: index.pure_halves,
                class: table.class(sh.class).label.clone(),
                side,
                engine: ENGINE_VERSION.to_string(),
            };
            out.push((key, HalfOrbitInventory::of(sh)));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
    pub mismatches: usize,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Cache> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    fn encode(key: &CacheKey, payload: &HalfOrbitInventory) -> Result<Vec<u8>> {
        let rec = CacheRecord {
            key: key.clone(),
            payload: payload.clone(),
        };
        Ok(serde_json::to_vec_pretty(&rec)?)
    }

    pub fn get(&self, key: &CacheKey) -> Result<Option<HalfOrbitInventory>> {
        let path = self.path(key);
        if !path.exists() {
            return Ok(None);
        }
        let rec: CacheRecord = serde_json::from_slice(&std::fs::read(&path)?)?;
        if rec.key != *key {
            return Err(Error::Catalog(format!("{}: key collision", path.display())));
        }
        Ok(Some(rec.payload))
    }

    pub fn put(&self, key: &CacheKey, payload: &HalfOrbitInventory) -> Result<()> {
        let bytes = Cache::encode(key, payload)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(&bytes)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| Error::Io(e.error))?;
        Ok(())
    }

    /// Stores missing records. With `verify`, existing records are compared
    /// byte for byte against the fresh computation instead of being trusted.
    pub fn sync(&self, index: &NodeIndex<'_>, verify: bool) -> Result<CacheStats> {
        let mut stats = CacheStats::default();
        for (key, inv) in inventories(index)? {
            let path = self.path(&key);
            if path.exists() {
                stats.hits += 1;
                if verify && std::fs::read(&path)? != Cache::encode(&key, &inv)? {
                    stats.mismatches += 1;
                }
            } else {
                stats.misses += 1;
                self.put(&key, &inv)?;
            }
        }
        Ok(stats)
    }

    /// All records, sorted by file name.
    pub fn records(&self) -> Result<Vec<(String, CacheRecord)>> {
        let mut out = Vec::new();
        for entry in std::fs::read_dir(&self.dir)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let rec: CacheRecord = serde_json::from_slice(&std::fs::read(&path)?)?;
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            out.push((name, rec));
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(out)
    }
}
