//! Smallest-modulus search, nonexistence sweeps and comparison against
//! published sequence data.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::bounds::{bounds_for, formal_sum_feasible, BOUNDS_PROVEN_ABOVE};
use crate::checker::{fast_check, fast_check_candidate, verify_relational_classes, CheckOutcome};
use crate::coset::{CosetDecomposition, ResidueSet};
use crate::modarith::{is_prime, primes_in_progression, primitive_root, progression_candidates};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("colour count must be positive")]
    ZeroColors,
    #[error("cap {cap} lies below the search floor {floor} for m = {m}")]
    CapBelowFloor { m: u64, cap: u64, floor: u64 },
    #[error("empty colour range {lo}..{hi}")]
    EmptyRange { lo: u64, hi: u64 },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// Result of the smallest-modulus search for one colour count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchRecord {
    pub m: u64,
    /// Smallest passing prime, or 0 when none exists up to `cap_used`.
    pub smallest_p: u64,
    pub cap_used: u64,
    /// Primes that went through the checker.
    pub candidates_tested: u64,
    /// Primes skipped by the formal-sum cardinality bound.
    pub pruned_by_formal_sum: u64,
    pub elapsed: Duration,
    /// Set for `m = 1`, answered by the relational check on a two-point set
    /// rather than by the coset machinery.
    pub two_point_special_case: bool,
}

/// Where a search for `m` starts: the proven lower bound for `m > 6`,
/// otherwise the smallest candidate `2m + 1`.
pub fn search_floor(m: u64) -> u64 {
    if m > BOUNDS_PROVEN_ABOVE {
        bounds_for(m).lower
    } else {
        2 * m + 1
    }
}

/// Smallest prime `p ≡ 1 (mod 2m)` whose cosets pass the fast check.
///
/// `cap` defaults to the proven upper bound `m⁴ + 5`.
pub fn smallest_modulus(m: u64, cap: Option<u64>) -> Result<SearchRecord, SearchError> {
    if m == 0 {
        return Err(SearchError::ZeroColors);
    }
    let start = Instant::now();
    let cap_used = cap.unwrap_or_else(|| bounds_for(m).upper);
    if m == 1 {
        // The 1-colour algebra lives on a 2-element base set: X_0 = {1} mod 2.
        let two = ResidueSet::from_residues(2, [1]);
        let ok = cap_used >= 2
            && verify_relational_classes(2, &[two], 2).expect("tiny relational check");
        return Ok(SearchRecord {
            m,
            smallest_p: if ok { 2 } else { 0 },
            cap_used,
            candidates_tested: 1,
            pruned_by_formal_sum: 0,
            elapsed: start.elapsed(),
            two_point_special_case: true,
        });
    }
    let floor = search_floor(m);
    if cap_used < floor {
        return Err(SearchError::CapBelowFloor {
            m,
            cap: cap_used,
            floor,
        });
    }
    let mut record = SearchRecord {
        m,
        smallest_p: 0,
        cap_used,
        candidates_tested: 0,
        pruned_by_formal_sum: 0,
        elapsed: Duration::ZERO,
        two_point_special_case: false,
    };
    for p in progression_candidates(m, floor, cap_used).filter(|&p| is_prime(p)) {
        if !formal_sum_feasible(p, m) {
            record.pruned_by_formal_sum += 1;
            continue;
        }
        record.candidates_tested += 1;
        let g = primitive_root(p).expect("odd prime");
        if fast_check_candidate(p, m, g).verdict() {
            record.smallest_p = p;
            break;
        }
    }
    record.elapsed = start.elapsed();
    Ok(record)
}

/// Runs the fast checker on every prime `p ≡ 1 (mod 2m)` up to `m⁴ + 5`, with
/// no pruning. Nonexistence holds iff every verdict is negative.
pub fn verify_nonexistence(m: u64) -> Result<Vec<(u64, CheckOutcome)>, SearchError> {
    if m == 0 {
        return Err(SearchError::ZeroColors);
    }
    Ok(primes_in_progression(m, 2, bounds_for(m).upper)
        .into_par_iter()
        .map(|p| {
            let dec = CosetDecomposition::with_smallest_root(p, m).expect("candidate prime");
            (p, fast_check(&dec))
        })
        .collect())
}

/// How the per-`m` cap is chosen in [`search_range`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CapPolicy {
    /// The proven upper bound `m⁴ + 5`.
    #[default]
    UpperBound,
    /// `min(cap, m⁴ + 5)`; never raises the cap above the proven bound.
    AtMost(u64),
}

impl CapPolicy {
    pub fn cap_for(self, m: u64) -> u64 {
        let upper = bounds_for(m).upper;
        match self {
            CapPolicy::UpperBound => upper,
            CapPolicy::AtMost(c) => c.min(upper),
        }
    }
}

/// One record per `m` in `[m_lo, m_hi]`, ascending, computed on `jobs`
/// worker threads (0 = rayon default). The records do not depend on `jobs`
/// apart from `elapsed`.
pub fn search_range(
    m_lo: u64,
    m_hi: u64,
    policy: CapPolicy,
    jobs: usize,
) -> Result<Vec<SearchRecord>, SearchError> {
    if m_lo > m_hi {
        return Err(SearchError::EmptyRange { lo: m_lo, hi: m_hi });
    }
    if m_lo == 0 {
        return Err(SearchError::ZeroColors);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))?;
    pool.install(|| {
        // larger m first so the slowest searches start early
        let mut records: Vec<SearchRecord> = (m_lo..=m_hi)
            .rev()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|m| smallest_modulus(m, Some(policy.cap_for(m))))
            .collect::<Result<_, _>>()?;
        records.reverse();
        Ok(records)
    })
}

/// Published sequence values keyed by index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SequenceTable {
    pub entries: BTreeMap<u64, u64>,
}

impl SequenceTable {
    pub fn get(&self, n: u64) -> Option<u64> {
        self.entries.get(&n).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BFileError {
    #[error("line {line}: expected \"index value\", got {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: {token:?} is not a non-negative integer")]
    NotAnInteger { line: usize, token: String },
    #[error("line {line}: index must be positive")]
    ZeroIndex { line: usize },
    #[error("line {line}: index {index} already appeared on line {first}")]
    DuplicateIndex { line: usize, index: u64, first: usize },
}

/// Parses OEIS b-file text: one `n a(n)` pair per line, `#` comments and blank
/// lines ignored. Line numbers in errors are 1-based.
pub fn parse_bfile(text: &str) -> Result<SequenceTable, BFileError> {
    let mut entries = BTreeMap::new();
    let mut seen_on: BTreeMap<u64, usize> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        let [n, v] = tokens[..] else {
            return Err(BFileError::Malformed {
                line,
                text: trimmed.to_string(),
            });
        };
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|_| BFileError::NotAnInteger {
                line,
                token: tok.to_string(),
            })
        };
        let (n, v) = (parse(n)?, parse(v)?);
        if n == 0 {
            return Err(BFileError::ZeroIndex { line });
        }
        if let Some(&first) = seen_on.get(&n) {
            return Err(BFileError::DuplicateIndex {
                line,
                index: n,
                first,
            });
        }
        seen_on.insert(n, line);
        entries.insert(n, v);
    }
    Ok(SequenceTable { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discrepancy {
    pub m: u64,
    pub computed: u64,
    pub published: u64,
}

/// Records whose `m` appears in the table with a different value.
pub fn compare_with_oeis(records: &[SearchRecord], table: &SequenceTable) -> Vec<Discrepancy> {
    records
        .iter()
        .filter_map(|r| {
            let published = table.get(r.m)?;
            (published != r.smallest_p).then_some(Discrepancy {
                m: r.m,
                computed: r.smallest_p,
                published,
            })
        })
        .collect()
}
