//! On-disk cache: one directory per (N, k) holding JSON artifacts. Writes go to
//! a temporary file that is then renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};

pub const CACHE_ENV: &str = "HECKE_N0_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".hecke-cache";
const FORMAT_FILE: &str = "FORMAT_VERSION";
const FORMAT_VERSION: &str = "1";

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    /// Opens (creating if needed) a cache rooted at `root`. Cell directories
    /// written by a different format version are removed first; nothing else
    /// under `root` is touched.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        let version_path = root.join(FORMAT_FILE);
        let current = fs::read_to_string(&version_path).ok();
        if current.as_deref().map(str::trim) != Some(FORMAT_VERSION) {
            for entry in fs::read_dir(&root)? {
                let path = entry?.path();
                if path.is_dir() && path.file_name().and_then(|n| n.to_str()).is_some_and(is_cell_dir_name) {
                    fs::remove_dir_all(&path)?;
                }
            }
            write_atomic(&version_path, FORMAT_VERSION.as_bytes())?;
        }
        Ok(Cache { root })
    }

    /// Root from an explicit path, else the environment variable, else the
    /// default relative directory.
    pub fn resolve(explicit: Option<&Path>) -> Result<Self> {
        let root = match explicit {
            Some(p) => p.to_path_buf(),
            None => std::env::var_os(CACHE_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR)),
        };
        Cache::open(root)
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn cell_dir(&self, n: u64, k: u32) -> PathBuf {
        self.root.join(format!("N{n}_k{k}"))
    }

    pub fn load<T: DeserializeOwned>(&self, n: u64, k: u32, name: &str) -> Result<Option<T>> {
        let path = self.cell_dir(n, k).join(name);
        match fs::read(&path) {
            Ok(bytes) => serde_json::from_slice(&bytes)
                .map(Some)
                .map_err(|e| Error::Cache(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    pub fn store<T: Serialize>(&self, n: u64, k: u32, name: &str, value: &T) -> Result<()> {
        let dir = self.cell_dir(n, k);
        fs::create_dir_all(&dir)?;
        let bytes = serde_json::to_vec(value)?;
        write_atomic(&dir.join(name), &bytes)
    }
}

fn is_cell_dir_name(name: &str) -> bool {
    let Some((n, k)) = name.strip_prefix('N').and_then(|r| r.split_once("_k")) else {
        return false;
    };
    !n.is_empty() && !k.is_empty() && n.bytes().chain(k.bytes()).all(|b| b.is_ascii_digit())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_version_reset() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        assert_eq!(c.load::<Vec<u32>>(5, 4, "x.json").unwrap(), None);
        c.store(5, 4, "x.json", &vec![1u32, 2, 3]).unwrap();
        assert_eq!(c.load::<Vec<u32>>(5, 4, "x.json").unwrap(), Some(vec![1, 2, 3]));
        fs::write(dir.path().join(FORMAT_FILE), "0").unwrap();
        fs::create_dir(dir.path().join("keep")).unwrap();
        let c = Cache::open(dir.path()).unwrap();
        assert_eq!(c.load::<Vec<u32>>(5, 4, "x.json").unwrap(), None);
        assert!(dir.path().join("keep").exists());
        assert!(is_cell_dir_name("N12_k4") && !is_cell_dir_name("N_k4") && !is_cell_dir_name("Nx_k4"));
    }
}
