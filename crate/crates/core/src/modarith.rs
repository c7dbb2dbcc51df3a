//! Modular arithmetic over `u64`: primality, factorization and primitive roots.
//!
//! Every modulus handled by the search stays far below 2^63, so products are
//! formed in `u128` and reduced once.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("primitive roots are only computed for odd primes, got {0}")]
    NotOddPrime(u64),
}

/// Bases for which the strong-pseudoprime test is exact on all of `u64`.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    if p <= u32::MAX as u64 && a < p && b < p {
        return a * b % p;
    }
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `base^exp mod p`.
pub fn mod_pow(base: u64, mut exp: u64, p: u64) -> u64 {
    debug_assert!(p >= 1);
    if p == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factorization of a positive integer as ascending `(prime, multiplicity)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }

    /// Multiplies the factors back together.
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(q, e)| acc * q.pow(e))
    }
}

/// Trial division up to `sqrt(n)`.
///
/// Fine for the `p - 1` values the search produces (p ≤ m^4 + 5); for
/// n ~ 10^14 the loop runs about 5·10^6 iterations.
pub fn factorize(n: u64) -> PrimeFactorization {
    assert!(n >= 1, "factorize expects a positive integer");
    let mut rest = n;
    let mut factors = Vec::new();
    let mut push = |q: u64, rest: &mut u64| {
        let mut e = 0;
        while *rest % q == 0 {
            *rest /= q;
            e += 1;
        }
        if e > 0 {
            factors.push((q, e));
        }
    };
    push(2, &mut rest);
    push(3, &mut rest);
    // 6k ± 1 wheel
    let mut q = 5u64;
    while q.saturating_mul(q) <= rest {
        push(q, &mut rest);
        push(q + 2, &mut rest);
        q += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    PrimeFactorization { n, factors }
}

/// Checks whether `g` generates the multiplicative group mod the prime `p`,
/// given the prime divisors of `p - 1`.
pub fn is_generator(g: u64, p: u64, order_primes: &[u64]) -> bool {
    let g = g % p;
    g != 0 && order_primes.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1)
}

/// Smallest primitive root `g >= 2` of an odd prime.
pub fn primitive_root(p: u64) -> Result<u64, ModArithError> {
    primitive_roots(p).map(|mut it| it.next().expect("cyclic group has a generator"))
}

/// Primitive roots of `p` in ascending order.
pub fn primitive_roots(p: u64) -> Result<impl Iterator<Item = u64>, ModArithError> {
    if p == 2 {
        return Err(ModArithError::NotOddPrime(p));
    }
    if !is_prime(p) {
        return Err(ModArithError::NotPrime(p));
    }
    let qs: Vec<u64> = factorize(p - 1).primes().collect();
    Ok((2..p).filter(move |&g| is_generator(g, p, &qs)))
}

/// Primes `p` in `[lo, hi]` with `p ≡ 1 (mod 2m)`, ascending.
pub fn primes_in_progression(m: u64, lo: u64, hi: u64) -> Vec<u64> {
    progression_candidates(m, lo, hi).filter(|&p| is_prime(p)).collect()
}

/// Integers `p ≡ 1 (mod 2m)` with `p >= 2` in `[lo, hi]`, ascending, not yet
/// filtered for primality.
pub(crate) fn progression_candidates(m: u64, lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    assert!(m >= 1);
    let step = 2 * m;
    let lo = lo.max(2);
    // smallest value >= lo congruent to 1; lo >= 2 keeps p = 1 out
    let first = lo + (step - (lo - 1) % step) % step;
    (0..)
        .map(move |t: u64| first + t * step)
        .take_while(move |&p| lo <= hi && p <= hi)
}
