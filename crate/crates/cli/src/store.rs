//! On-disk certificate store: one JSON file holding verified certificates
//! and the bound records derived from them.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use eszk_core::{f_bounds, verify_certificate, Certificate, FBoundRecord};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_STORE: &str = "eszk-store.json";
pub const STORE_ENV: &str = "ESZK_STORE";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("cannot read store {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write store {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("store {path} is not valid: {source}")]
    Format {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] eszk_core::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Store {
    #[serde(default)]
    pub certificates: Vec<Certificate>,
    /// Bound records for every k that has a stored certificate.
    #[serde(default)]
    pub bounds: Vec<FBoundRecord>,
}

/// `--store` if given, else `$ESZK_STORE`, else `./eszk-store.json`.
pub fn resolve_path(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(STORE_ENV) {
        Some(p) if !p.is_empty() => PathBuf::from(p),
        _ => PathBuf::from(DEFAULT_STORE),
    }
}

impl Store {
    /// Load, or start empty when the file does not exist yet.
    pub fn load(path: &Path) -> Result<Self, StoreError> {
        match fs::read(path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|source| StoreError::Format {
                path: path.to_path_buf(),
                source,
            }),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Store::default()),
            Err(source) => Err(StoreError::Read {
                path: path.to_path_buf(),
                source,
            }),
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), StoreError> {
        let write_err = |source| StoreError::Write {
            path: path.to_path_buf(),
            source,
        };
        let mut body = serde_json::to_string_pretty(self).expect("plain data");
        body.push('\n');
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, body).map_err(write_err)?;
        fs::rename(&tmp, path).map_err(write_err)
    }

    /// Add a certificate after re-verifying it. Returns whether the store changed.
    pub fn insert(&mut self, cert: &Certificate) -> Result<bool, StoreError> {
        let fresh = verify_certificate(&cert.polygon, cert.k)?;
        if !fresh.verified
            || self
                .certificates
                .iter()
                .any(|c| c.k == fresh.k && c.polygon == fresh.polygon)
        {
            return Ok(false);
        }
        let k = fresh.k;
        self.certificates.push(fresh);
        let record = f_bounds(k, &self.certificates)?;
        self.bounds.retain(|b| b.k != k);
        self.bounds.push(record);
        self.bounds.sort_by_key(|b| b.k);
        Ok(true)
    }

    pub fn for_k(&self, k: usize) -> Vec<Certificate> {
        self.certificates.iter().filter(|c| c.k == k).cloned().collect()
    }
}
