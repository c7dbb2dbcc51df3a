//! Discrete Fourier analysis of residue sets over ℤ/pℤ.
//!
//! Everything here is generic over the floating-point scalar; `f64` is the
//! working precision for the checks in this crate.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use rayon::prelude::*;
use rustfft::{Fft, FftNum, FftPlanner};
use thiserror::Error;

use crate::coset::{CosetDecomposition, ResidueSet};
use crate::modarith::primes_in_progression;

/// Scalar types the transforms run over.
pub trait Real: FftNum + Float + FloatConst {}

impl<T: FftNum + Float + FloatConst> Real for T {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FourierError {
    #[error(
        "Schur count for a set mod {p} did not round cleanly: value {value}, \
         imaginary residual {imag}, distance to nearest integer {distance}"
    )]
    NumericalBreakdown {
        p: u64,
        value: f64,
        imag: f64,
        distance: f64,
    },
}

fn real<T: Real>(x: u64) -> T {
    T::from(x).expect("integer representable as float")
}

/// `coeffs[t] = Σ_{a ∈ A} e^{-2πi·a·t/p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub p: u64,
    pub coeffs: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    /// `max_{t ≠ 0} |coeffs[t]|`
    pub fn max_nontrivial_modulus(&self) -> T {
        self.coeffs[1..]
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), T::max)
    }

    /// `Σ_t |coeffs[t]|²`, which should equal `p·|A|`.
    pub fn energy(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b)
    }

    /// `(1/p)·Σ_{t ≠ 0} Ĉ(t)²·Ĉ(-t)`; the full count adds `|A|³/p`.
    pub fn schur_error_term(&self) -> Complex<T> {
        self.triple_sum(1) / real::<T>(self.p)
    }

    /// `(1/p)·Σ_t Ĉ(t)²·Ĉ(-t)`
    pub fn schur_sum(&self) -> Complex<T> {
        self.triple_sum(0) / real::<T>(self.p)
    }

    fn triple_sum(&self, from: usize) -> Complex<T> {
        let p = self.p as usize;
        (from..p).fold(Complex::new(T::zero(), T::zero()), |acc, t| {
            let c = self.coeffs[t];
            acc + c * c * self.coeffs[(p - t) % p]
        })
    }
}

/// Transforms of a fixed length, reusing one plan.
pub struct Transformer<T: Real> {
    p: u64,
    fft: Arc<dyn Fft<T>>,
}

impl<T: Real> Transformer<T> {
    pub fn new(p: u64) -> Self {
        assert!(p >= 1);
        let fft = FftPlanner::new().plan_fft_forward(p as usize);
        Self { p, fft }
    }

    pub fn transform(&self, a: &ResidueSet) -> Spectrum<T> {
        assert_eq!(a.modulus(), self.p, "transform length mismatch");
        let mut buf = vec![Complex::new(T::zero(), T::zero()); self.p as usize];
        for x in a.iter() {
            buf[x as usize] = Complex::new(T::one(), T::zero());
        }
        self.fft.process(&mut buf);
        Spectrum {
            p: self.p,
            coeffs: buf,
        }
    }
}

/// Full length-`p` transform of the characteristic function of `A`.
pub fn transform<T: Real>(a: &ResidueSet) -> Spectrum<T> {
    Transformer::new(a.modulus()).transform(a)
}

/// Ordered triples `(x, y, z) ∈ A³` with `x + y ≡ z`, by enumeration.
pub fn count_schur_naive(a: &ResidueSet) -> u64 {
    let p = a.modulus();
    let members: Vec<u64> = a.iter().collect();
    let mut n = 0u64;
    for &x in &members {
        for &y in &members {
            let s = x + y;
            n += a.contains(if s >= p { s - p } else { s }) as u64;
        }
    }
    n
}

/// Schur-triple count through `N = (1/p)·Σ_t Ĉ(t)²·Ĉ(-t)`.
///
/// Fails when the imaginary part exceeds `10⁻⁶·max(1, N)` or the real part is
/// not within `min(0.25, 10⁻⁶·max(1, N))` of an integer.
pub fn count_schur_fourier<T: Real>(a: &ResidueSet) -> Result<u64, FourierError> {
    round_schur_sum(&transform::<T>(a))
}

pub fn round_schur_sum<T: Real>(spectrum: &Spectrum<T>) -> Result<u64, FourierError> {
    let n = spectrum.schur_sum();
    let value = n.re.to_f64().unwrap_or(f64::NAN);
    let imag = n.im.to_f64().unwrap_or(f64::NAN).abs();
    let rounded = value.round();
    let distance = (value - rounded).abs();
    let scale = value.abs().max(1.0);
    let ok = imag < 1e-6 * scale && distance <= (1e-6 * scale).min(0.25) && rounded >= 0.0;
    if ok {
        Ok(rounded as u64)
    } else {
        Err(FourierError::NumericalBreakdown {
            p: spectrum.p,
            value,
            imag,
            distance,
        })
    }
}

/// Quasirandomness summary for the subgroup `X_0` of one decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierProfile<T> {
    pub p: u64,
    pub m: u64,
    /// Density `(p - 1)/(m·p)`.
    pub delta: T,
    /// `max_{t ≠ 0} |Ĉ(t)| / p`
    pub alpha_max: T,
    /// `δ²`
    pub threshold: T,
    /// `alpha_max < δ²`, which forces a solution of `x + y = z` in `X_0`.
    pub certified_not_sumfree: bool,
    /// `(δ³ - alpha_max·δ)·p²`
    pub solution_lower_bound: T,
    pub solutions_exact: u64,
}

impl<T: Real> FourierProfile<T> {
    /// `alpha_max ≤ p^{-1/2}`
    pub fn within_sqrt_bound(&self) -> bool {
        self.alpha_max <= real::<T>(self.p).sqrt().recip()
    }
}

pub fn uniformity_profile<T: Real>(dec: &CosetDecomposition) -> FourierProfile<T> {
    let x0 = dec.coset(0).expect("label 0 exists");
    profile_of_subgroup(&Transformer::new(dec.p()), &x0, dec.m() as u64)
}

fn profile_of_subgroup<T: Real>(tf: &Transformer<T>, x0: &ResidueSet, m: u64) -> FourierProfile<T> {
    let p = x0.modulus();
    let spectrum = tf.transform(x0);
    let pf = real::<T>(p);
    let delta = real::<T>(p - 1) / (real::<T>(m) * pf);
    let alpha_max = spectrum.max_nontrivial_modulus() / pf;
    let threshold = delta * delta;
    FourierProfile {
        p,
        m,
        delta,
        alpha_max,
        threshold,
        certified_not_sumfree: alpha_max < threshold,
        solution_lower_bound: (delta * delta * delta - alpha_max * delta) * pf * pf,
        solutions_exact: count_schur_naive(x0),
    }
}

/// One profile per prime `p ≡ 1 (mod 2m)` in `[lo, hi]`, ascending in `p`.
pub fn scan_uniformity<T: Real>(m: u64, lo: u64, hi: u64) -> Vec<FourierProfile<T>> {
    primes_in_progression(m, lo, hi)
        .into_par_iter()
        .map(|p| {
            let dec = CosetDecomposition::with_smallest_root(p, m).expect("candidate prime");
            uniformity_profile(&dec)
        })
        .collect()
}

/// A nontrivial Fourier coefficient of a multiplicative subgroup exceeding `√p`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformityViolation {
    pub p: u64,
    pub subgroup_order: u64,
    pub max_modulus: f64,
}

/// Checks `|Ĉ_H(t)| ≤ √p` for every `t ≠ 0` and every multiplicative subgroup
/// `H` of `(ℤ/pℤ)×`, returning the subgroups where it fails.
pub fn subgroup_uniformity_violations(p: u64) -> Vec<UniformityViolation> {
    let g = match crate::modarith::primitive_root(p) {
        Ok(g) => g,
        Err(_) => return Vec::new(),
    };
    let tf = Transformer::<f64>::new(p);
    let sqrt_p = (p as f64).sqrt();
    (1..p)
        .filter(|d| (p - 1) % d == 0)
        .filter_map(|order| {
            let h = crate::modarith::mod_pow(g, (p - 1) / order, p);
            let mut x = 1;
            let members = (0..order).map(|_| {
                let cur = x;
                x = crate::modarith::mul_mod(x, h, p);
                cur
            });
            let set = ResidueSet::from_residues(p, members);
            let max_modulus = tf.transform(&set).max_nontrivial_modulus();
            // float slack for the full group, where |Ĉ| = 1 exactly
            (max_modulus > sqrt_p * (1.0 + 1e-12)).then_some(UniformityViolation {
                p,
                subgroup_order: order,
                max_modulus,
            })
        })
        .collect()
}
