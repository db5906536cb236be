//! On-disk cache of the `Sp₆(F₂)` enumeration.
//!
//! Layout (little endian): 8-byte magic, `u32` format version, 32-byte
//! SHA-256 fingerprint of the generators, `u64` element count, then the
//! packed elements in ascending order.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{generate_group, sp6_generators, GF2Mat, GroupError, SubgroupHandle, ENUMERATION_GUARD, SP6_ORDER};

pub const MAGIC: [u8; 8] = *b"SP6F2ENM";
pub const FORMAT_VERSION: u32 = 1;
pub const FILE_NAME: &str = "sp6f2.bin";

const HEADER_LEN: usize = 8 + 4 + 32 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    /// Loaded from a valid file.
    Hit,
    /// No file was present; enumerated and written.
    Built,
    /// A file was present but stale or corrupt; enumerated and rewritten.
    Rebuilt,
}

pub fn cache_file(dir: &Path) -> PathBuf {
    dir.join(FILE_NAME)
}

/// SHA-256 over the format version and the packed generators.
pub fn fingerprint(generators: &[GF2Mat]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(FORMAT_VERSION.to_le_bytes());
    for g in generators {
        h.update(g.packed().to_le_bytes());
    }
    h.finalize().into()
}

fn io_err(e: io::Error) -> GroupError {
    GroupError::Cache(e.to_string())
}

/// Writes atomically: a temporary file in the same directory is renamed over
/// the target.
pub fn write_cache(dir: &Path, group: &SubgroupHandle<GF2Mat>) -> Result<(), GroupError> {
    let elements = group.elements().ok_or(GroupError::NotEnumerated)?;
    fs::create_dir_all(dir).map_err(io_err)?;
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * elements.len());
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.extend_from_slice(&fingerprint(group.generators()));
    buf.extend_from_slice(&(elements.len() as u64).to_le_bytes());
    for m in elements {
        buf.extend_from_slice(&m.packed().to_le_bytes());
    }
    let tmp = dir.join(format!("{FILE_NAME}.{}.tmp", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io_err)?;
    f.write_all(&buf).map_err(io_err)?;
    f.sync_all().map_err(io_err)?;
    fs::rename(&tmp, cache_file(dir)).map_err(io_err)
}

/// Reads the cache. `Ok(None)` if the file is missing, stale or fails
/// validation (header, ordering, symplectic condition, expected order).
pub fn read_cache(dir: &Path) -> Result<Option<SubgroupHandle<GF2Mat>>, GroupError> {
    let mut f = match fs::File::open(cache_file(dir)) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(io_err(e)),
    };
    let mut buf = Vec::new();
    f.read_to_end(&mut buf).map_err(io_err)?;
    let generators = sp6_generators();
    if buf.len() < HEADER_LEN
        || buf[..8] != MAGIC
        || buf[8..12] != FORMAT_VERSION.to_le_bytes()
        || buf[12..44] != fingerprint(&generators)
    {
        return Ok(None);
    }
    let count = u64::from_le_bytes(buf[44..52].try_into().expect("8 bytes")) as usize;
    let body = &buf[HEADER_LEN..];
    if count != SP6_ORDER || body.len() != 8 * count {
        return Ok(None);
    }
    let mut elements = Vec::with_capacity(count);
    for chunk in body.chunks_exact(8) {
        match GF2Mat::from_packed(u64::from_le_bytes(chunk.try_into().expect("8 bytes"))) {
            Ok(m) if m.is_symplectic() => elements.push(m),
            _ => return Ok(None),
        }
    }
    if elements.windows(2).any(|w| w[0] >= w[1]) {
        return Ok(None);
    }
    Ok(Some(SubgroupHandle::from_elements(generators, elements)))
}

/// Enumerates `Sp₆(F₂)` from [`sp6_generators`].
pub fn enumerate_sp6() -> Result<SubgroupHandle<GF2Mat>, GroupError> {
    generate_group(&sp6_generators(), ENUMERATION_GUARD)
}

/// Loads the cache, or enumerates and writes it.
pub fn load_or_build(dir: &Path) -> Result<(SubgroupHandle<GF2Mat>, CacheStatus), GroupError> {
    let existed = cache_file(dir).exists();
    if let Some(g) = read_cache(dir)? {
        return Ok((g, CacheStatus::Hit));
    }
    let g = enumerate_sp6()?;
    write_cache(dir, &g)?;
    Ok((g, if existed { CacheStatus::Rebuilt } else { CacheStatus::Built }))
}

/// Removes the cache file. Returns whether one existed.
pub fn clear_cache(dir: &Path) -> Result<bool, GroupError> {
    match fs::remove_file(cache_file(dir)) {
        Ok(()) => Ok(true),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(false),
        Err(e) => Err(io_err(e)),
    }
}
