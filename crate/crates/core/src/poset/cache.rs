//! Persistent memo of implication verdicts, keyed by normalized matrices.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use crate::matrix::Matrix;

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "MCLEX_CACHE";

fn matrix_key(m: &Matrix) -> String {
    match m.normalize() {
        Ok(n) => n.to_string().replace('\n', "/"),
        Err(_) => "empty".to_string(),
    }
}

/// `"p1;p2|goal"`, with premise keys sorted and deduplicated.
pub fn pair_key(premise: &[Matrix], goal: &Matrix) -> String {
    let mut keys: Vec<String> = premise.iter().map(matrix_key).collect();
    keys.sort();
    keys.dedup();
    format!("{}|{}", keys.join(";"), matrix_key(goal))
}

#[derive(Debug, Default)]
pub struct DecisionCache {
    path: Option<PathBuf>,
    map: RwLock<BTreeMap<String, bool>>,
}

impl DecisionCache {
    pub fn in_memory() -> DecisionCache {
        DecisionCache::default()
    }

    /// Opens the cache at `path`, loading it if the file exists.
    pub fn open(path: impl AsRef<Path>) -> io::Result<DecisionCache> {
        let path = path.as_ref().to_path_buf();
        let map = read_map(&path)?;
        Ok(DecisionCache {
            path: Some(path),
            map: RwLock::new(map),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn get(&self, key: &str) -> Option<bool> {
        self.map.read().unwrap().get(key).copied()
    }

    pub fn insert(&self, key: String, value: bool) {
        self.map.write().unwrap().insert(key, value);
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Merges with whatever is on disk and writes the result, holding an
    /// exclusive lock on a sidecar `.lock` file meanwhile. The write goes to
    /// a temporary file that is then renamed over the cache.
    pub fn save(&self) -> io::Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let lock_path = sidecar(path, "lock");
        let lock = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&lock_path)?;
        lock.lock()?;
        let mut merged = read_map(path)?;
        merged.extend(self.map.read().unwrap().iter().map(|(k, v)| (k.clone(), *v)));
        let tmp = sidecar(path, "tmp");
        {
            let mut f = File::create(&tmp)?;
            serde_json::to_writer(&mut f, &merged)?;
            f.write_all(b"\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        *self.map.write().unwrap() = merged;
        lock.unlock()
    }
}

fn sidecar(path: &Path, ext: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(ext);
    path.with_file_name(name)
}

fn read_map(path: &Path) -> io::Result<BTreeMap<String, bool>> {
    match fs::read_to_string(path) {
        Ok(text) if text.trim().is_empty() => Ok(BTreeMap::new()),
        Ok(text) => serde_json::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e)),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(BTreeMap::new()),
        Err(e) => Err(e),
    }
}
