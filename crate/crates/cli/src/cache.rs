//! On-disk cache of coset decompositions, enabled by `RAMSEY_CACHE_DIR`.
//!
//! One file per `(p, m)`: the magic `RCD1`, then `p`, `m`, `g` as little-endian
//! `u64`, then the label table as little-endian `u16` per residue.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use ramsey_cosets::coset::CosetError;
use ramsey_cosets::CosetDecomposition;

pub const CACHE_ENV: &str = "RAMSEY_CACHE_DIR";
const MAGIC: &[u8; 4] = b"RCD1";

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

fn entry(dir: &Path, p: u64, m: u64) -> PathBuf {
    dir.join(format!("dec_p{p}_m{m}.bin"))
}

pub fn encode(dec: &CosetDecomposition) -> Vec<u8> {
    let table = dec.label_table();
    let mut out = Vec::with_capacity(28 + 2 * table.len());
    out.extend_from_slice(MAGIC);
    for v in [dec.p(), dec.m() as u64, dec.generator()] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for &l in table {
        out.extend_from_slice(&l.to_le_bytes());
    }
    out
}

/// `None` when the bytes are not a well-formed entry for `(p, m)`.
pub fn decode(bytes: &[u8], p: u64, m: u64) -> Option<CosetDecomposition> {
    let rest = bytes.strip_prefix(MAGIC)?;
    if rest.len() < 24 {
        return None;
    }
    let word = |i: usize| u64::from_le_bytes(rest[8 * i..8 * i + 8].try_into().expect("8 bytes"));
    let (fp, fm, g) = (word(0), word(1), word(2));
    if (fp, fm) != (p, m) {
        return None;
    }
    let labels: Vec<u16> = rest[24..]
        .chunks_exact(2)
        .map(|c| u16::from_le_bytes([c[0], c[1]]))
        .collect();
    CosetDecomposition::from_label_table(p, m, g, labels).ok()
}

/// Loads `(p, m)` from the cache, or builds it with the smallest primitive
/// root and stores it. Cache I/O problems fall back to building in memory.
pub fn load_or_build(p: u64, m: u64) -> Result<CosetDecomposition, CosetError> {
    let Some(dir) = cache_dir() else {
        return CosetDecomposition::with_smallest_root(p, m);
    };
    let path = entry(&dir, p, m);
    if let Some(dec) = fs::read(&path).ok().and_then(|b| decode(&b, p, m)) {
        return Ok(dec);
    }
    let dec = CosetDecomposition::with_smallest_root(p, m)?;
    if let Err(e) = store(&dir, &path, &dec) {
        eprintln!("warning: could not write cache entry {}: {e}", path.display());
    }
    Ok(dec)
}

fn store(dir: &Path, path: &Path, dec: &CosetDecomposition) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(path, encode(dec))
}
