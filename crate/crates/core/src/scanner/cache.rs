//! Append-only JSONL persistence of per-prime results.
//!
//! One file per quotient, `scan-<r>_<s>_<t>.jsonl`, one record per line.
//! Reads return the last record for a prime whose version matches the
//! running library; older versions are ignored.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::eisenstein::QuotientSpec;
use crate::error::Result;
use crate::tate::{CongruenceReport, Method};
use crate::VERSION;

/// The persisted form of a [`CongruenceReport`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub r: i64,
    pub s: i64,
    pub t: i64,
    pub ell: u64,
    pub method: Method,
    pub residues: Vec<u64>,
    pub weight: u64,
    pub precision: u64,
    pub bound: u64,
    pub version: String,
}

impl CacheRecord {
    pub fn from_report(report: &CongruenceReport, bound: u64) -> Self {
        Self {
            r: report.spec.r(),
            s: report.spec.s(),
            t: report.spec.t(),
            ell: report.ell,
            method: report.method,
            residues: report.residues.iter().copied().collect(),
            weight: report.weight,
            precision: report.precision,
            bound,
            version: VERSION.to_string(),
        }
    }

    pub fn to_report(&self) -> Result<CongruenceReport> {
        Ok(CongruenceReport {
            spec: QuotientSpec::new(self.r, self.s, self.t)?,
            ell: self.ell,
            residues: self.residues.iter().copied().collect(),
            method: self.method,
            precision: self.precision,
            weight: self.weight,
        })
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

#[derive(Clone, Debug)]
pub struct ResultCache {
    dir: PathBuf,
}

impl ResultCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, spec: &QuotientSpec) -> PathBuf {
        self.dir
            .join(format!("scan-{}_{}_{}.jsonl", spec.r(), spec.s(), spec.t()))
    }

    pub fn put(&self, record: &CacheRecord) -> Result<()> {
        self.put_all(std::slice::from_ref(record))
    }

    pub fn put_all(&self, records: &[CacheRecord]) -> Result<()> {
        let mut by_file: BTreeMap<PathBuf, Vec<&CacheRecord>> = BTreeMap::new();
        for rec in records {
            let spec = QuotientSpec::new(rec.r, rec.s, rec.t)?;
            by_file.entry(self.path_for(&spec)).or_default().push(rec);
        }
        for (path, recs) in by_file {
            let mut file = OpenOptions::new().create(true).append(true).open(path)?;
            let mut buf = String::new();
            for rec in recs {
                buf.push_str(&rec.to_json_line());
                buf.push('\n');
            }
            file.write_all(buf.as_bytes())?;
        }
        Ok(())
    }

    /// Latest current-version record per prime for `spec`.
    pub fn load(&self, spec: &QuotientSpec) -> Result<BTreeMap<u64, CacheRecord>> {
        let path = self.path_for(spec);
        let mut out = BTreeMap::new();
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<CacheRecord>(&line) {
                Ok(rec) if rec.version == VERSION => {
                    out.insert(rec.ell, rec);
                }
                Ok(_) => {}
                Err(e) => log::warn!(
                    "{}:{}: skipping corrupt record: {e}",
                    path.display(),
                    lineno + 1
                ),
            }
        }
        Ok(out)
    }

    pub fn get(&self, spec: &QuotientSpec, ell: u64) -> Result<Option<CacheRecord>> {
        Ok(self.load(spec)?.remove(&ell))
    }
}
