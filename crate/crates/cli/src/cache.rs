//! On-disk cache of U_p coset tables keyed by (p, l), checked by a content hash.

use halo_core::manin::{ManinData, UpTerm};
use halo_core::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const CACHE_SCHEMA: &str = "halo.cache.up-table/1";

#[derive(Serialize, Deserialize)]
struct Entry {
    schema: String,
    p: u64,
    l: u64,
    sha256: String,
    table: Vec<Vec<UpTerm>>,
}

fn digest(table: &[Vec<UpTerm>]) -> String {
    let bytes = serde_json::to_vec(table).expect("tables serialize");
    format!("{:x}", Sha256::digest(bytes))
}

pub fn cache_path(dir: &Path, p: u64, l: u64) -> PathBuf {
    dir.join(format!("up_p{p}_l{l}.json"))
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Usage(format!("cache: {e}"))
}

/// Reads a cached table; None when absent, stale or corrupt.
pub fn load(dir: &Path, p: u64, l: u64) -> Option<Vec<Vec<UpTerm>>> {
    let bytes = std::fs::read(cache_path(dir, p, l)).ok()?;
    let e: Entry = serde_json::from_slice(&bytes).ok()?;
    (e.schema == CACHE_SCHEMA && e.p == p && e.l == l && digest(&e.table) == e.sha256).then_some(e.table)
}

/// Writes through a temporary file in the same directory, then renames over the target.
pub fn store(dir: &Path, p: u64, l: u64, table: &[Vec<UpTerm>]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(io)?;
    let e = Entry { schema: CACHE_SCHEMA.into(), p, l, sha256: digest(table), table: table.to_vec() };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(&serde_json::to_vec(&e).map_err(io)?).map_err(io)?;
    tmp.persist(cache_path(dir, p, l)).map_err(io)?;
    Ok(())
}

pub fn up_table(md: &ManinData, dir: Option<&Path>) -> Result<Vec<Vec<UpTerm>>> {
    let (p, l) = (md.p as u64, md.l as u64);
    if let Some(dir) = dir {
        if let Some(t) = load(dir, p, l) {
            return Ok(t);
        }
    }
    let t = md.up_table()?;
    if let Some(dir) = dir {
        store(dir, p, l, &t)?;
    }
    Ok(t)
}
