//! Smallest-prime-factor tables with an optional on-disk cache.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{domain, resource, Result, StabError};

/// Default ceiling on the table limit (entries are 4 bytes each).
pub const DEFAULT_SPF_CEILING: u64 = 100_000_000;

const MAGIC: &[u8; 8] = b"STABSPF1";

/// `spf[n]` is the smallest prime factor of `n` for `2 <= n <= limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`; `None` outside `2..=limit`.
    #[inline]
    pub fn get(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            None
        } else {
            Some(self.spf[n as usize] as u64)
        }
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        self.get(n) == Some(n)
    }

    /// Raw entries, index = n (entries 0 and 1 are 0).
    pub fn as_slice(&self) -> &[u32] {
        &self.spf
    }

    /// Primes up to the limit, ascending.
    pub fn primes(&self) -> Vec<u64> {
        (2..=self.limit).filter(|&n| self.is_prime(n)).collect()
    }

    /// `(prime, exponent)` pairs of `n`, ascending. `n` must lie in `1..=limit`.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// Writes the cache format: magic, little-endian limit, little-endian u32 entries.
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&self.limit.to_le_bytes())?;
        let mut buf = Vec::with_capacity(self.spf.len() * 4);
        for &x in &self.spf {
            buf.extend_from_slice(&x.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut head = [0u8; 16];
        r.read_exact(&mut head)?;
        if &head[..8] != MAGIC {
            return Err(StabError::Parse("bad SPF cache magic".into()));
        }
        let limit = u64::from_le_bytes(head[8..].try_into().expect("8 bytes"));
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() as u64 != (limit + 1) * 4 {
            return Err(StabError::Parse(format!(
                "SPF cache length {} does not match limit {limit}",
                bytes.len()
            )));
        }
        let spf = bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
            .collect();
        Ok(SpfTable { limit, spf })
    }
}

/// Linear sieve up to `limit`, refusing anything above `ceiling`.
pub fn build_spf_table_with_ceiling(limit: u64, ceiling: u64) -> Result<SpfTable> {
    if limit < 2 {
        return domain(format!("SPF limit must be at least 2, got {limit}"));
    }
    if limit > ceiling || limit > u32::MAX as u64 {
        return resource(format!("SPF limit {limit} exceeds ceiling {ceiling}"));
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            if p > si {
                break;
            }
            let j = i * p as usize;
            if j > n {
                break;
            }
            spf[j] = p;
        }
    }
    Ok(SpfTable { limit, spf })
}

pub fn build_spf_table(limit: u64) -> Result<SpfTable> {
    build_spf_table_with_ceiling(limit, DEFAULT_SPF_CEILING)
}

/// Cache directory from `STAB_CACHE_DIR`, if set.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("STAB_CACHE_DIR").map(PathBuf::from)
}

fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("spf-{limit}.bin"))
}

/// Loads the table from `dir` if a matching cache file exists, otherwise builds and stores it.
pub fn load_or_build_in(dir: &Path, limit: u64) -> Result<SpfTable> {
    let path = cache_path(dir, limit);
    if let Ok(f) = fs::File::open(&path) {
        if let Ok(t) = SpfTable::read_from(std::io::BufReader::new(f)) {
            if t.limit == limit {
                return Ok(t);
            }
        }
    }
    let t = build_spf_table(limit)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    t.write_to(std::io::BufWriter::new(fs::File::create(&tmp)?))?;
    fs::rename(&tmp, &path)?;
    Ok(t)
}

/// Like [`build_spf_table`], going through the `STAB_CACHE_DIR` cache when it is set.
pub fn load_or_build(limit: u64) -> Result<SpfTable> {
    match cache_dir() {
        Some(dir) => load_or_build_in(&dir, limit),
        None => build_spf_table(limit),
    }
}
