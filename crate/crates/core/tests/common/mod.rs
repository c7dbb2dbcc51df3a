#![allow(dead_code)]

use ramsey_cosets::modarith::is_prime;
use ramsey_cosets::CosetDecomposition;

/// Every `(p, m)` with `p < p_max` prime, `m | p - 1` and `(p - 1)/m` even.
pub fn valid_pairs(p_max: u64) -> Vec<(u64, u64)> {
    (3..p_max)
        .filter(|&p| is_prime(p))
        .flat_map(|p| {
            (1..p)
                .filter(move |&m| (p - 1) % m == 0 && ((p - 1) / m) % 2 == 0)
                .map(move |m| (p, m))
        })
        .collect()
}

pub fn decompositions(p_max: u64) -> impl Iterator<Item = CosetDecomposition> {
    valid_pairs(p_max)
        .into_iter()
        .map(|(p, m)| CosetDecomposition::with_smallest_root(p, m).unwrap())
}

/// Two smallest primitive roots, by brute-force order computation.
pub fn two_smallest_roots(p: u64) -> (u64, u64) {
    let order = |g: u64| {
        let mut x = g % p;
        let mut k = 1;
        while x != 1 {
            x = x * g % p;
            k += 1;
        }
        k
    };
    let mut it = (2..p).filter(|&g| order(g) == p - 1);
    let a = it.next().unwrap();
    (a, it.next().unwrap_or(a))
}

