//! Ramsey-algebra checks for a coset decomposition.
//!
//! Three routes to the same verdict:
//! - [`naive_check`]: the sumset conditions taken literally over every pair of cosets;
//! - [`fast_check`]: sum-freeness of `X_0` plus one coverage test per pair `(i, j)`;
//! - [`verify_relational`]: the difference relations on ℤ/pℤ × ℤ/pℤ composed directly.

use std::fmt;

use thiserror::Error;

use crate::coset::{CosetDecomposition, ResidueSet};
use crate::modarith::mul_mod;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("relational verification of p = {p} exceeds the cap of {cap}")]
    TooLarge { p: u64, cap: u64 },
    #[error("colour classes must share the modulus {0}")]
    ModulusMismatch(u64),
}

/// Which of the three sumset conditions failed in [`naive_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `-X_i = X_i`
    Symmetric,
    /// `X_i + X_i = ℤ/pℤ \ X_i`
    SelfSum,
    /// `X_i + X_j = ℤ/pℤ \ {0}` for `i ≠ j`
    CrossSum,
}

impl Condition {
    pub fn tag(self) -> &'static str {
        match self {
            Condition::Symmetric => "i",
            Condition::SelfSum => "ii",
            Condition::CrossSum => "iii",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `x + y ≡ z` with all three in `X_0`.
    SumFreeViolation { x: u64, y: u64, z: u64 },
    /// `g^j ∉ X_0 + X_i`.
    CoverageGap { i: usize, j: usize },
    ConditionViolation { condition: Condition, details: String },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::SumFreeViolation { x, y, z } => {
                write!(f, "sum-free violation: {x} + {y} = {z} in X_0")
            }
            Witness::CoverageGap { i, j } => write!(f, "coverage gap: g^{j} not in X_0 + X_{i}"),
            Witness::ConditionViolation { condition, details } => {
                write!(f, "condition ({}) violated: {details}", condition.tag())
            }
        }
    }
}

/// Verdict plus a failure witness; the witness is present exactly when the
/// verdict is negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    witness: Option<Witness>,
}

impl CheckOutcome {
    pub fn pass() -> Self {
        Self { witness: None }
    }

    pub fn fail(witness: Witness) -> Self {
        Self {
            witness: Some(witness),
        }
    }

    pub fn verdict(&self) -> bool {
        self.witness.is_none()
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }
}

/// Checks the three sumset conditions literally, for every coset and every
/// pair of distinct cosets.
pub fn naive_check(dec: &CosetDecomposition) -> CheckOutcome {
    let p = dec.p();
    let cosets = dec.cosets();
    let violation = |condition, details: String| {
        CheckOutcome::fail(Witness::ConditionViolation { condition, details })
    };

    for (i, x) in cosets.iter().enumerate() {
        let neg = x.negate();
        if &neg != x {
            let a = x.iter().find(|&a| !neg.contains(a)).unwrap_or_default();
            return violation(
                Condition::Symmetric,
                format!("-{a} = {} is not in X_{i}", (p - a) % p),
            );
        }
    }

    for (i, x) in cosets.iter().enumerate() {
        let sums = x.sumset(x).expect("shared modulus");
        if let Some((a, b, c)) = x.schur_witness() {
            if i == 0 {
                return CheckOutcome::fail(Witness::SumFreeViolation { x: a, y: b, z: c });
            }
            return violation(
                Condition::SelfSum,
                format!("{a} + {b} = {c} lies in X_{i}"),
            );
        }
        let target = x.complement();
        if sums != target {
            let r = target.iter().find(|&r| !sums.contains(r)).unwrap_or_default();
            return violation(
                Condition::SelfSum,
                format!("{r} is not in X_{i} + X_{i}"),
            );
        }
    }

    let mut nonzero = ResidueSet::full(p);
    nonzero = nonzero
        .minus(&ResidueSet::from_residues(p, [0]))
        .expect("shared modulus");
    for i in 0..cosets.len() {
        for j in i + 1..cosets.len() {
            let sums = cosets[i].sumset(&cosets[j]).expect("shared modulus");
            if sums.contains(0) {
                return violation(Condition::CrossSum, format!("0 lies in X_{i} + X_{j}"));
            }
            if sums != nonzero {
                let r = nonzero.iter().find(|&r| !sums.contains(r)).unwrap_or_default();
                return violation(
                    Condition::CrossSum,
                    format!("{r} is not in X_{i} + X_{j}"),
                );
            }
        }
    }
    CheckOutcome::pass()
}

/// Smallest `x ∈ X_0` with `1 - x ∈ X_0`, as a sum-free witness.
fn unit_split(p: u64, in_x0: impl Fn(u64) -> bool) -> Option<Witness> {
    (1..p)
        .find(|&x| in_x0(x) && in_x0(p + 1 - x))
        .map(|x| Witness::SumFreeViolation {
            x,
            y: (p + 1 - x) % p,
            z: 1,
        })
}

/// Whether `(i, j)` is the lexicographically smaller member of its orbit
/// under `(i, j) ↦ (-i, j - i) mod m`.
///
/// `g^j ∈ X_0 + X_i` holds exactly when `g^{j-i} ∈ X_{-i} + X_0` (multiply by
/// `g^{-i}`), so one member of each orbit decides both.
pub fn is_orbit_representative(i: usize, j: usize, m: usize) -> bool {
    let image = ((m - i) % m, (j + m - i) % m);
    (i, j) <= image
}

/// Orbit representatives `(i, j) ≠ (0, 0)` in lexicographic order.
pub fn coverage_pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m)
        .flat_map(move |i| (0..m).map(move |j| (i, j)))
        .filter(move |&(i, j)| (i, j) != (0, 0) && is_orbit_representative(i, j, m))
}

/// Labels hit by `g^j - X_0`, one bitset of width `m` per `j`, filled on demand.
struct CoverageRows<'a> {
    dec: &'a CosetDecomposition,
    x0: Vec<u64>,
    words: usize,
    rows: Vec<Option<Vec<u64>>>,
}

impl<'a> CoverageRows<'a> {
    fn new(dec: &'a CosetDecomposition) -> Self {
        let m = dec.m();
        Self {
            dec,
            x0: dec.coset_members(0).expect("label 0 exists"),
            words: m.div_ceil(64),
            rows: vec![None; m],
        }
    }

    fn hits(&mut self, i: usize, j: usize) -> bool {
        if self.rows[j].is_none() {
            let p = self.dec.p();
            let gj = self.dec.power(j as u64);
            let mut row = vec![0u64; self.words];
            for &x in &self.x0 {
                if let Some(l) = self.dec.label(gj + p - x) {
                    row[l / 64] |= 1 << (l % 64);
                }
            }
            self.rows[j] = Some(row);
        }
        let row = self.rows[j].as_ref().expect("filled above");
        row[i / 64] >> (i % 64) & 1 == 1
    }
}

/// The fast decision procedure.
///
/// Passes iff `(1 - X_0) ∩ X_0 = ∅` and `(g^j - X_0) ∩ X_i ≠ ∅` for every
/// `(i, j) ≠ (0, 0)`. The pairs `(0, j)` (whether `g^j ∈ X_0 + X_0`) are
/// checked too. Pairs are scanned in [`coverage_pairs`] order and the first
/// failure is reported.
pub fn fast_check(dec: &CosetDecomposition) -> CheckOutcome {
    let p = dec.p();
    if let Some(w) = unit_split(p, |x| dec.label(x) == Some(0)) {
        return CheckOutcome::fail(w);
    }
    coverage_check(dec)
}

fn coverage_check(dec: &CosetDecomposition) -> CheckOutcome {
    let mut rows = CoverageRows::new(dec);
    for (i, j) in coverage_pairs(dec.m()) {
        if !rows.hits(i, j) {
            return CheckOutcome::fail(Witness::CoverageGap { i, j });
        }
    }
    CheckOutcome::pass()
}

/// [`fast_check`] for a candidate `(p, m)` with generator `g`, testing
/// sum-freeness on `X_0` alone before labelling the whole group.
///
/// Inputs must already satisfy [`CosetDecomposition::validate`].
pub fn fast_check_candidate(p: u64, m: u64, g: u64) -> CheckOutcome {
    let k = (p - 1) / m;
    let h = crate::modarith::mod_pow(g, m, p);
    let mut x0 = Vec::with_capacity(k as usize);
    let mut x = 1u64;
    for _ in 0..k {
        x0.push(x);
        x = mul_mod(x, h, p);
    }
    let x0 = ResidueSet::from_residues(p, x0);
    if let Some(w) = unit_split(p, |x| x0.contains(x)) {
        return CheckOutcome::fail(w);
    }
    let dec = CosetDecomposition::new(p, m, g).expect("validated candidate");
    coverage_check(&dec)
}

/// Default cap on `p` for [`verify_relational`].
pub const RELATIONAL_CAP: u64 = 100;

/// Builds `A_i = {(x, y) : x - y ∈ X_i}` and checks `A_i⁻¹ = A_i`,
/// `A_i ∘ A_i = A_i^c` and `A_i ∘ A_j = Id^c` (`i ≠ j`) by composing relations.
pub fn verify_relational(dec: &CosetDecomposition, cap: u64) -> Result<bool, CheckError> {
    verify_relational_classes(dec.p(), &dec.cosets(), cap)
}

/// Relational check for arbitrary difference classes over ℤ/pℤ, including
/// the two-point case `p = 2` with the single class `{1}`.
pub fn verify_relational_classes(
    p: u64,
    classes: &[ResidueSet],
    cap: u64,
) -> Result<bool, CheckError> {
    if p > cap {
        return Err(CheckError::TooLarge { p, cap });
    }
    if classes.iter().any(|c| c.modulus() != p) {
        return Err(CheckError::ModulusMismatch(p));
    }
    let relations: Vec<Relation> = classes.iter().map(Relation::difference).collect();
    let identity = Relation::identity(p);
    let not_identity = identity.complement();

    for (i, a) in relations.iter().enumerate() {
        if a.converse() != *a {
            return Ok(false);
        }
        if a.compose(a) != a.complement() {
            return Ok(false);
        }
        for b in &relations[i + 1..] {
            if a.compose(b) != not_identity || b.compose(a) != not_identity {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A binary relation on ℤ/pℤ as one row set per left element.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Relation {
    p: u64,
    rows: Vec<ResidueSet>,
}

impl Relation {
    fn difference(class: &ResidueSet) -> Self {
        let p = class.modulus();
        // (x, y) ∈ A ⟺ y ∈ x - X
        let rows = (0..p).map(|x| class.difference_from(x)).collect();
        Self { p, rows }
    }

    fn identity(p: u64) -> Self {
        Self {
            p,
            rows: (0..p).map(|x| ResidueSet::from_residues(p, [x])).collect(),
        }
    }

    fn complement(&self) -> Self {
        Self {
            p: self.p,
            rows: self.rows.iter().map(ResidueSet::complement).collect(),
        }
    }

    fn converse(&self) -> Self {
        let p = self.p;
        let mut cols: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
        for (x, row) in self.rows.iter().enumerate() {
            for y in row.iter() {
                cols[y as usize].push(x as u64);
            }
        }
        Self {
            p,
            rows: cols
                .into_iter()
                .map(|c| ResidueSet::from_residues(p, c))
                .collect(),
        }
    }

    fn compose(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                row.iter().fold(ResidueSet::empty(self.p), |acc, y| {
                    acc.union(&other.rows[y as usize]).expect("shared modulus")
                })
            })
            .collect();
        Self { p: self.p, rows }
    }
}
