//! Content-addressed on-disk cache of exact matrices.
//!
//! Entries are plain text: a header, the shape, one row per line of
//! `num/den` tokens, and a trailing SHA-256 of everything above it. Writes
//! go through a temporary file in the same directory followed by a rename,
//! so readers never see a partial entry. Entries that fail to parse or
//! whose checksum does not match are deleted and treated as a miss.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use logvoa_core::linalg::RationalMatrix;
use logvoa_core::{Coeff, Rational};
use sha2::{Digest, Sha256};

const HEADER: &str = "logvoa-matrix 1";

/// Identifies one graded operator matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub version: String,
    pub p: i64,
    pub p_prime: i64,
    pub operator: String,
    pub residue: i64,
    pub weight: Rational,
}

impl CacheKey {
    pub fn digest(&self) -> String {
        let text = format!(
            "{}\n{}\n{}\n{}\n{}\n{}/{}",
            self.version,
            self.p,
            self.p_prime,
            self.operator,
            self.residue,
            self.weight.numer(),
            self.weight.denom()
        );
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

#[derive(Clone, Debug)]
pub struct MatrixCache {
    dir: PathBuf,
}

impl MatrixCache {
    pub fn open(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.mat", key.digest()))
    }

    pub fn get(&self, key: &CacheKey) -> Option<RationalMatrix> {
        let path = self.path(key);
        let text = fs::read_to_string(&path).ok()?;
        match decode(&text) {
            Some(m) => Some(m),
            None => {
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    pub fn put(&self, key: &CacheKey, m: &RationalMatrix) -> std::io::Result<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(encode(m).as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| e.error)?;
        Ok(())
    }

    /// Cached value, or compute and store it. Storage failures are ignored:
    /// the cache is an accelerator, never a source of truth.
    pub fn get_or_compute<E>(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> Result<RationalMatrix, E>,
    ) -> Result<RationalMatrix, E> {
        if let Some(m) = self.get(key) {
            return Ok(m);
        }
        let m = compute()?;
        let _ = self.put(key, &m);
        Ok(m)
    }
}

pub fn encode(m: &RationalMatrix) -> String {
    let mut body = String::new();
    let _ = writeln!(body, "{HEADER}");
    let _ = writeln!(body, "{} {}", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect();
        let _ = writeln!(body, "{}", row.join(" "));
    }
    let sum = hex::encode(Sha256::digest(body.as_bytes()));
    body.push_str(&sum);
    body.push('\n');
    body
}

pub fn decode(text: &str) -> Option<RationalMatrix> {
    let text = text.strip_suffix('\n')?;
    let (body, sum) = text.rsplit_once('\n')?;
    let body = format!("{body}\n");
    if hex::encode(Sha256::digest(body.as_bytes())) != sum {
        return None;
    }
    let mut lines = body.lines();
    if lines.next()? != HEADER {
        return None;
    }
    let (rows, cols) = lines.next()?.split_once(' ')?;
    let (rows, cols): (usize, usize) = (rows.parse().ok()?, cols.parse().ok()?);
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let line = lines.next()?;
        let row: Vec<Coeff> = if cols == 0 {
            Vec::new()
        } else {
            line.split(' ').map(|t| t.parse::<Coeff>().ok()).collect::<Option<_>>()?
        };
        if row.len() != cols {
            return None;
        }
        data.push(row);
    }
    if lines.next().is_some() {
        return None;
    }
    if rows == 0 {
        return Some(RationalMatrix::zeros(0, cols));
    }
    RationalMatrix::from_rows(data).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(version: &str) -> CacheKey {
        CacheKey { version: version.into(), p: 3, p_prime: 2, operator: "N-V".into(), residue: 0, weight: Rational::new(5, 1) }
    }

    fn sample() -> RationalMatrix {
        RationalMatrix::from_rows(vec![
            vec![Coeff::new(1.into(), 3.into()), Coeff::from_integer((-7).into())],
            vec![Coeff::from_integer(0.into()), Coeff::new((-22).into(), 5.into())],
        ])
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = MatrixCache::open(dir.path()).unwrap();
        cache.put(&key("1"), &sample()).unwrap();
        assert_eq!(cache.get(&key("1")), Some(sample()));
    }

    #[test]
    fn version_bump_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = MatrixCache::open(dir.path()).unwrap();
        cache.put(&key("1"), &sample()).unwrap();
        assert_eq!(cache.get(&key("2")), None);
    }

    #[test]
    fn corrupt_entry_is_discarded() {
        let dir = tempfile::tempdir().unwrap();
        let cache = MatrixCache::open(dir.path()).unwrap();
        cache.put(&key("1"), &sample()).unwrap();
        let path = cache.path(&key("1"));
        let text = fs::read_to_string(&path).unwrap().replace("1/3", "1/4");
        fs::write(&path, text).unwrap();
        assert_eq!(cache.get(&key("1")), None);
        assert!(!path.exists());
        let m = cache.get_or_compute::<()>(&key("1"), || Ok(sample())).unwrap();
        assert_eq!(m, sample());
        assert_eq!(cache.get(&key("1")), Some(sample()));
    }

    #[test]
    fn empty_shapes() {
        for m in [RationalMatrix::zeros(0, 3), RationalMatrix::zeros(2, 0)] {
            assert_eq!(decode(&encode(&m)), Some(m));
        }
    }
}
