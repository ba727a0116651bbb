//! On-disk cache of Q bases and differentials.
//!
//! Entries are JSON files named by the SHA-256 of their key. A key is the
//! whitespace-normalized group string, the degree, the artifact kind and a
//! format version, so reordering factors or bumping the version misses.
//! Unreadable or mismatched entries are logged, recomputed and overwritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::abgroup::{normalize_spec, FinAbGroup};
use crate::error::{Error, Result};
use crate::intlinalg::SparseIntMatrix;
use crate::qcomplex::{delta_matrix, q_basis, QBasis, QChainData};

pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArtifactKind {
    Basis,
    Delta,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub spec: String,
    pub degree: usize,
    pub kind: ArtifactKind,
    pub version: u32,
}

impl CacheKey {
    pub fn new(spec: &str, degree: usize, kind: ArtifactKind) -> Self {
        CacheKey {
            spec: normalize_spec(spec),
            degree,
            kind,
            version: CACHE_VERSION,
        }
    }

    pub fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("keys serialize");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn file_name(&self) -> String {
        format!("{}.json", self.digest())
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CacheEntry<T> {
    pub key: CacheKey,
    pub payload: T,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
    version: u32,
}

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        Cache::with_version(dir, CACHE_VERSION)
    }

    pub fn with_version(dir: impl AsRef<Path>, version: u32) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(Cache { dir, version })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(&self, spec: &str, degree: usize, kind: ArtifactKind) -> CacheKey {
        CacheKey {
            version: self.version,
            ..CacheKey::new(spec, degree, kind)
        }
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(key.file_name())
    }

    /// Writes to a temporary file and renames it into place.
    pub fn store<T: Serialize>(&self, key: &CacheKey, payload: &T) -> Result<()> {
        let entry = CacheEntry {
            key: key.clone(),
            payload,
        };
        let text = serde_json::to_vec(&entry)?;
        let target = self.path(key);
        let tmp = self
            .dir
            .join(format!(".{}.{}.tmp", key.digest(), std::process::id()));
        fs::write(&tmp, text)?;
        fs::rename(&tmp, &target)?;
        Ok(())
    }

    /// `Ok(None)` on a miss; `Err(Error::Cache)` for a corrupt or foreign entry.
    pub fn load<T: DeserializeOwned>(&self, key: &CacheKey) -> Result<Option<T>> {
        let path = self.path(key);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry: CacheEntry<T> = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
        if entry.key != *key {
            return Err(Error::Cache(format!(
                "{} holds a different key",
                path.display()
            )));
        }
        Ok(Some(entry.payload))
    }

    /// Loads `key`, or computes, stores and returns it. Entries failing
    /// `valid` are treated as corrupt.
    pub fn get_or_compute<T, F, V>(&self, key: &CacheKey, valid: V, compute: F) -> Result<T>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T>,
        V: Fn(&T) -> bool,
    {
        match self.load::<T>(key) {
            Ok(Some(v)) if valid(&v) => {
                log::debug!(
                    "cache hit {} degree {} {:?}",
                    key.spec,
                    key.degree,
                    key.kind
                );
                return Ok(v);
            }
            Ok(Some(_)) => log::warn!(
                "cache entry {} failed validation, rebuilding",
                key.file_name()
            ),
            Ok(None) => {}
            Err(e) => log::warn!("{e}; rebuilding"),
        }
        let v = compute()?;
        self.store(key, &v)?;
        Ok(v)
    }

    pub fn basis(&self, group: &FinAbGroup, n: usize, budget: u64) -> Result<QBasis> {
        let key = self.key(&group.spec(), n, ArtifactKind::Basis);
        self.get_or_compute(
            &key,
            |b: &QBasis| b.group() == group && b.degree() == n,
            || q_basis(group, n, budget),
        )
    }

    /// `Q_*(group)` through degree `max_n`, from the cache where possible.
    pub fn chain_data(&self, group: &FinAbGroup, max_n: usize, budget: u64) -> Result<QChainData> {
        let bases = (0..=max_n)
            .map(|n| self.basis(group, n, budget))
            .collect::<Result<Vec<_>>>()?;
        let mut deltas = Vec::new();
        for n in 1..=max_n {
            let key = self.key(&group.spec(), n, ArtifactKind::Delta);
            let (src, dst) = (&bases[n], &bases[n - 1]);
            let d = self.get_or_compute(
                &key,
                |d: &SparseIntMatrix| d.cols() == src.rank() && d.rows() == dst.rank(),
                || delta_matrix(src, dst),
            )?;
            deltas.push(d);
        }
        QChainData::from_parts(group.clone(), bases, deltas)
    }
}
