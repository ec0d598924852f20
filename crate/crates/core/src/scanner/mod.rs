//! Prime sweeps over a quotient `E2^r E4^s E6^t`.
//!
//! Every prime up to the bound is analysed once: primes below `|s|` or
//! `|t|` are disposed of by size, the rest are lifted to a genuine modular
//! form and either found to have vanishing theta or certified class by
//! class. A few primes just above the bound are sampled as a consistency
//! check; finding nothing there is consistent with the bound, not a proof.

pub mod cache;
pub mod table;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eisenstein::{lift_in_range, QuotientSpec};
use crate::error::{Error, Result};
use crate::modular::{primes_above, primes_between};
use crate::tate::{find_congruences, CongruenceReport, DetectionMode};
use crate::VERSION;

pub use cache::{CacheRecord, ResultCache};
pub use table::{
    first_counterexample, rows_named, table_rows, verify_table, TableCheck, TableRow, ROW_NAMES,
};

/// `2r + 8|s| + 12|t| + 21`.
pub fn theorem_bound(spec: &QuotientSpec) -> u64 {
    (2 * spec.r() + 8 * spec.s().abs() + 12 * spec.t().abs() + 21) as u64
}

/// The sharper bound split on the sign of `r + 4s + 6t`:
/// `max{|s|-1, |t|-1, 11, 2r+8s+6t-1}` when positive and
/// `max{|s|-1, |t|-1, 11, 21-8s-12t}` otherwise.
pub fn remark_bound(spec: &QuotientSpec) -> u64 {
    let (r, s, t) = (spec.r(), spec.s(), spec.t());
    let last = if spec.weight_excess() > 0 {
        2 * r + 8 * s + 6 * t - 1
    } else {
        21 - 8 * s - 12 * t
    };
    [s.abs() - 1, t.abs() - 1, 11, last]
        .into_iter()
        .max()
        .unwrap() as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    Theorem,
    Remark,
}

/// Where `x = r + 4s + 6t` sits relative to `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExcessCase {
    /// `ell <= |x|`
    AtLeastPrime,
    /// `0 < x < ell`
    Positive,
    /// `x = 0`
    Zero,
    /// `-ell < x < 0`
    Negative,
}

pub fn excess_case(spec: &QuotientSpec, ell: u64) -> ExcessCase {
    let x = spec.weight_excess();
    let l = ell as i64;
    if x.abs() >= l {
        ExcessCase::AtLeastPrime
    } else if x > 0 {
        ExcessCase::Positive
    } else if x == 0 {
        ExcessCase::Zero
    } else {
        ExcessCase::Negative
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub use_remark: bool,
    /// Number of primes above the bound to sample.
    pub sample_above: usize,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    pub precision_override: Option<u64>,
    pub cache: Option<ResultCache>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            use_remark: false,
            sample_above: 3,
            workers: 0,
            precision_override: None,
            cache: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanResult {
    pub spec: QuotientSpec,
    pub bound_kind: BoundKind,
    pub theorem_bound: u64,
    pub remark_bound: u64,
    /// The bound the sweep actually ran to.
    pub bound: u64,
    /// One report per prime `2 <= ell <= bound`, ascending.
    pub reports: Vec<CongruenceReport>,
    /// Sampled primes above the bound.
    pub above_bound: Vec<CongruenceReport>,
    pub started_at: u64,
    pub finished_at: u64,
    pub version: String,
    /// Primes analysed from scratch during this run.
    pub computed: usize,
    /// Primes answered from the cache.
    pub cache_hits: usize,
}

impl ScanResult {
    /// Primes at most the bound with at least one flagged residue.
    pub fn primes_with_congruences(&self) -> Vec<u64> {
        self.reports
            .iter()
            .filter(|r| !r.residues.is_empty())
            .map(|r| r.ell)
            .collect()
    }

    pub fn report_for(&self, ell: u64) -> Option<&CongruenceReport> {
        self.reports
            .iter()
            .chain(&self.above_bound)
            .find(|r| r.ell == ell)
    }

    /// Sampled primes above the bound that nevertheless show a congruence.
    /// Always empty for the excluded trivial quotient.
    pub fn above_bound_violations(&self) -> Vec<&CongruenceReport> {
        if self.spec.is_trivial() {
            return Vec::new();
        }
        self.above_bound
            .iter()
            .filter(|r| !r.residues.is_empty())
            .collect()
    }

    /// Records for every analysed prime, ascending, in the persisted format.
    pub fn records(&self) -> Vec<CacheRecord> {
        self.reports
            .iter()
            .chain(&self.above_bound)
            .map(|r| CacheRecord::from_report(r, self.bound))
            .collect()
    }

    /// Deterministic line-delimited report (no timestamps).
    pub fn to_jsonl(&self) -> String {
        self.records()
            .iter()
            .map(|r| r.to_json_line() + "\n")
            .collect()
    }
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn analyse(
    spec: &QuotientSpec,
    ell: u64,
    precision_override: Option<u64>,
) -> Result<CongruenceReport> {
    log::debug!("analysing {spec} at ell = {ell}");
    // the override applies to lifted forms only; windows for size-disposed primes keep their default
    let over = if ell >= 5 && lift_in_range(spec, ell) {
        precision_override
    } else {
        None
    };
    find_congruences(spec, ell, DetectionMode::Rigorous, over)
}

/// Runs the sweep to the theorem bound (or the remark bound), then samples
/// `sample_above` primes past it.
pub fn verify_theorem(spec: &QuotientSpec, opts: &ScanOptions) -> Result<ScanResult> {
    let started_at = unix_now();
    let tb = theorem_bound(spec);
    let rb = remark_bound(spec);
    let (bound_kind, bound) = if opts.use_remark {
        (BoundKind::Remark, rb)
    } else {
        (BoundKind::Theorem, tb)
    };
    let below = primes_between(2, bound);
    let above = primes_above(bound, opts.sample_above);

    let cached = match &opts.cache {
        Some(c) => c.load(spec)?,
        None => Default::default(),
    };
    let todo: Vec<u64> = below
        .iter()
        .chain(&above)
        .copied()
        .filter(|ell| !cached.contains_key(ell))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let fresh: Vec<CongruenceReport> = pool.install(|| {
        todo.par_iter()
            .map(|&ell| analyse(spec, ell, opts.precision_override))
            .collect::<Result<Vec<_>>>()
    })?;

    let lookup = |ell: u64| -> Result<CongruenceReport> {
        match cached.get(&ell) {
            Some(rec) => rec.to_report(),
            None => Ok(fresh
                .iter()
                .find(|r| r.ell == ell)
                .expect("every uncached prime was analysed")
                .clone()),
        }
    };
    let reports = below
        .iter()
        .map(|&l| lookup(l))
        .collect::<Result<Vec<_>>>()?;
    let above_bound = above
        .iter()
        .map(|&l| lookup(l))
        .collect::<Result<Vec<_>>>()?;

    if let Some(c) = &opts.cache {
        let new_records: Vec<CacheRecord> = fresh
            .iter()
            .map(|r| CacheRecord::from_report(r, bound))
            .collect();
        c.put_all(&new_records)?;
    }

    Ok(ScanResult {
        spec: *spec,
        bound_kind,
        theorem_bound: tb,
        remark_bound: rb,
        bound,
        reports,
        above_bound,
        started_at,
        finished_at: unix_now(),
        version: VERSION.to_string(),
        computed: fresh.len(),
        cache_hits: below.len() + above.len() - fresh.len(),
    })
}

/// Results directory from the environment, if set.
pub fn results_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(RESULTS_DIR_ENV).map(PathBuf::from)
}

pub const RESULTS_DIR_ENV: &str = "EISCONG_RESULTS_DIR";
