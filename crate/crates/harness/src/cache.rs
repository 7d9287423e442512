//! On-disk cache of reference SVDs, keyed by the matrix spec.
//!
//! File layout, little endian: the 8-byte magic, `u32` format version,
//! `u64` rows, cols, number of singular values, columns of `U`, columns of
//! `V`, then `U` (column major), `σ`, `V` as raw `f64`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rsvd_diag::bounds::reference_factors;
use rsvd_diag::sketch::PRNG_VERSION;
use rsvd_diag::{DenseMatrix, SvdFactors, TestMatrixSpec};
use sha2::{Digest, Sha256};

const MAGIC: &[u8; 8] = b"RSVDREF\0";
pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "RSVD_DIAG_CACHE";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone)]
pub struct SvdCache {
    dir: PathBuf,
}

impl SvdCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$RSVD_DIAG_CACHE` if set, otherwise `<output_dir>/cache`.
    pub fn from_env(output_dir: &Path) -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Self::new(dir),
            _ => Self::new(output_dir.join("cache")),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// The file holding the SVD of the matrix generated from `spec`. The
    /// generator depends on the PRNG, so its version is part of the key.
    pub fn path_for(&self, spec: &TestMatrixSpec) -> PathBuf {
        let key = format!(
            "{}\n{}\n{}",
            serde_json::to_string(spec).expect("spec serializes"),
            PRNG_VERSION,
            CACHE_VERSION
        );
        let hash = sha256_hex(key.as_bytes());
        self.dir.join(format!("{}-{}.svd", file_stem(&spec.label()), &hash[..16]))
    }

    /// Loads the cached factors, or computes and stores them. An unreadable
    /// or stale entry is recomputed and overwritten.
    pub fn get_or_compute(&self, spec: &TestMatrixSpec, a: &DenseMatrix) -> Result<SvdFactors> {
        let path = self.path_for(spec);
        if let Ok(file) = fs::File::open(&path) {
            if let Ok(f) = read_factors(&mut io::BufReader::new(file)) {
                if f.u.nrows() == a.nrows() && f.v.nrows() == a.ncols() {
                    return Ok(f);
                }
            }
        }
        let factors = reference_factors(a)?;
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        // Write to a temporary name first so a concurrent reader never sees a
        // partial file.
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        {
            let mut w = io::BufWriter::new(fs::File::create(&tmp)?);
            write_factors(&mut w, &factors)?;
            w.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(factors)
    }
}

/// Label with everything but `[A-Za-z0-9_-]` replaced by `_`, trailing
/// underscores dropped.
pub fn file_stem(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect::<String>()
        .trim_end_matches('_')
        .to_owned()
}

pub fn write_factors(w: &mut impl Write, f: &SvdFactors) -> io::Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&CACHE_VERSION.to_le_bytes())?;
    for d in [f.u.nrows(), f.v.nrows(), f.len(), f.u.ncols(), f.v.ncols()] {
        w.write_all(&(d as u64).to_le_bytes())?;
    }
    let data = f
        .u
        .as_matrix()
        .as_slice()
        .iter()
        .chain(&f.singular_values)
        .chain(f.v.as_matrix().as_slice());
    for x in data {
        w.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_factors(r: &mut impl Read) -> Result<SvdFactors> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        bail!("not an SVD cache file");
    }
    let mut word = [0u8; 4];
    r.read_exact(&mut word)?;
    let version = u32::from_le_bytes(word);
    if version != CACHE_VERSION {
        bail!("cache format version {version}, expected {CACHE_VERSION}");
    }
    let mut dims = [0usize; 5];
    for d in &mut dims {
        let mut b = [0u8; 8];
        r.read_exact(&mut b)?;
        *d = u64::from_le_bytes(b) as usize;
    }
    let [m, n, len, ucols, vcols] = dims;
    let mut read_vec = |count: usize| -> Result<Vec<f64>> {
        let mut bytes = vec![0u8; count * 8];
        r.read_exact(&mut bytes)?;
        Ok(bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect())
    };
    let u = read_vec(m * ucols)?;
    let singular_values = read_vec(len)?;
    let v = read_vec(n * vcols)?;
    Ok(SvdFactors {
        u: DenseMatrix::from_column_slice(m, ucols, &u)?,
        singular_values,
        v: DenseMatrix::from_column_slice(n, vcols, &v)?,
    })
}
