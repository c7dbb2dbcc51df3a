//! Multiplicative-coset Ramsey algebras over prime fields.
//!
//! For a prime `p ≡ 1 (mod 2m)` the nonzero residues split into `m` cosets
//! `X_0, ..., X_{m-1}` of the index-`m` subgroup. The difference relations
//! `{(x, y) : x - y ∈ X_i}` form an `m`-colour Ramsey algebra exactly when
//! every `X_i` is symmetric, `X_i + X_i = ℤ/pℤ \ X_i`, and
//! `X_i + X_j = ℤ/pℤ \ {0}` for `i ≠ j`.
//!
//! - [`modarith`]: primality, factorization, primitive roots
//! - [`coset`]: bitset residue sets and the coset decomposition
//! - [`checker`]: literal, fast and relational checks
//! - [`bounds`]: the search window and Ramsey-number cap
//! - [`fourier`]: spectra, Schur-triple counts, uniformity profiles
//! - [`search`]: smallest-modulus search and b-file comparison

pub mod bounds;
pub mod checker;
pub mod coset;
pub mod fourier;
pub mod modarith;
pub mod search;

pub use bounds::{bounds_for, formal_sum_feasible, ramsey_bound, BoundsReport};
pub use checker::{fast_check, naive_check, verify_relational, CheckOutcome, Witness};
pub use coset::{CosetDecomposition, ResidueSet};
pub use search::{
    compare_with_oeis, parse_bfile, search_range, smallest_modulus, verify_nonexistence,
    CapPolicy, SearchRecord, SequenceTable,
};

/// Double-precision spectrum.
pub type Spectrum = fourier::Spectrum<f64>;
/// Single-precision spectrum.
pub type Spectrum32 = fourier::Spectrum<f32>;
/// Double-precision uniformity profile.
pub type FourierProfile = fourier::FourierProfile<f64>;
/// Single-precision uniformity profile.
pub type FourierProfile32 = fourier::FourierProfile<f32>;
