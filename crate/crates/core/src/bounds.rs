//! Search window for the modulus and the classical Ramsey-number cap.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("Ramsey bound for m = {0} does not fit in 128 bits")]
    Overflow(u64),
}

/// Colour counts above this have both window bounds proven.
pub const BOUNDS_PROVEN_ABOVE: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    pub m: u64,
    /// `2m² - 2m + 1`
    pub lower: u64,
    /// `m⁴ + 5`
    pub upper: u64,
    /// `⌊e·m!⌋ + 1`, or `None` past 128 bits.
    pub ramsey: Option<u128>,
    /// Whether `m > 6`, where the window is a theorem rather than a heuristic.
    pub applicable: bool,
}

pub fn lower_bound(m: u64) -> u64 {
    2 * m * m - 2 * m + 1
}

pub fn upper_bound(m: u64) -> u64 {
    m.saturating_pow(4).saturating_add(5)
}

pub fn bounds_for(m: u64) -> BoundsReport {
    assert!(m >= 1, "colour count must be positive");
    BoundsReport {
        m,
        lower: lower_bound(m),
        upper: upper_bound(m),
        ramsey: ramsey_bound(m).ok(),
        applicable: m > BOUNDS_PROVEN_ABOVE,
    }
}

/// Counting formal sums: `X_0 + X_0` has at most `k²/2 + 1` elements
/// (`k = ⌊(p-1)/m⌋`), so it can only equal `ℤ/pℤ \ X_0` when
/// `k²/2 + 1 ≥ p - k`.
pub fn formal_sum_feasible(p: u64, m: u64) -> bool {
    let k = ((p - 1) / m) as u128;
    // k²/2 + 1 ≥ p - k, doubled to stay in integers
    k * k + 2 >= 2 * (p as u128 - k)
}

/// `Σ_{j=0}^{m} m!/j! + 1`, which equals `⌊e·m!⌋ + 1` because the omitted tail
/// of the series is below one. Upper bound on the triangle Ramsey number `R_m(3)`.
pub fn ramsey_bound(m: u64) -> Result<u128, BoundsError> {
    let mut term: u128 = 1;
    let mut sum: u128 = 1;
    for j in (1..=m as u128).rev() {
        term = term.checked_mul(j).ok_or(BoundsError::Overflow(m))?;
        sum = sum.checked_add(term).ok_or(BoundsError::Overflow(m))?;
    }
    sum.checked_add(1).ok_or(BoundsError::Overflow(m))
}
