//! On-disk sieve tables with a SHA-256 sidecar.

use crate::error::CliError;
use distal_core::sieve::{self, MobiusTable, SieveConfig, TableKind};
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn table_path(dir: &Path, kind: TableKind, n_max: u64) -> PathBuf {
    dir.join(format!("{}-{n_max}.msieve", kind.name()))
}

pub fn sidecar_path(table: &Path) -> PathBuf {
    let mut s = table.as_os_str().to_owned();
    s.push(".sha256");
    PathBuf::from(s)
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub table: MobiusTable,
    pub path: PathBuf,
    pub sha256: String,
    pub hit: bool,
}

/// Returns the cached table, or sieves and stores it. A table whose bytes
/// do not match the sidecar is an error unless `rebuild` is set.
pub fn load_or_build(dir: &Path, kind: TableKind, n_max: u64, rebuild: bool) -> Result<Loaded, CliError> {
    let path = table_path(dir, kind, n_max);
    if path.exists() && !rebuild {
        let table = read_checked(&path, kind, n_max)?;
        let sha256 = fs::read_to_string(sidecar_path(&path))?.trim().to_string();
        return Ok(Loaded { table, path, sha256, hit: true });
    }
    let cfg = SieveConfig::default();
    let table = match kind {
        TableKind::Moebius => sieve::mobius_sieve(n_max, &cfg)?,
        TableKind::Liouville => sieve::liouville_sieve(n_max, &cfg)?,
    };
    let mut bytes = Vec::new();
    sieve::write_table(&table, &mut bytes)?;
    let sha256 = sha256_hex(&bytes);
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("msieve.tmp");
    fs::write(&tmp, &bytes)?;
    fs::rename(&tmp, &path)?;
    fs::write(sidecar_path(&path), format!("{sha256}\n"))?;
    Ok(Loaded { table, path, sha256, hit: false })
}

fn read_checked(path: &Path, kind: TableKind, n_max: u64) -> Result<MobiusTable, CliError> {
    let bytes = fs::read(path)?;
    let sidecar = sidecar_path(path);
    let expected = fs::read_to_string(&sidecar)
        .map_err(|_| CliError::CacheCorrupt(format!("{} has no readable checksum sidecar", path.display())))?;
    let actual = sha256_hex(&bytes);
    if expected.trim() != actual {
        return Err(CliError::CacheCorrupt(format!(
            "{}: sha256 {actual} does not match sidecar {}; rerun with --rebuild",
            path.display(),
            expected.trim()
        )));
    }
    let table = sieve::read_table(bytes.as_slice()).map_err(|e| CliError::CacheCorrupt(e.to_string()))?;
    if table.kind() != kind || table.n_max() != n_max {
        return Err(CliError::CacheCorrupt(format!(
            "{} holds {} up to {}, expected {} up to {n_max}",
            path.display(),
            table.kind().name(),
            table.n_max(),
            kind.name()
        )));
    }
    Ok(table)
}
