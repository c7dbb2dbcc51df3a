//! Residue sets over ℤ/pℤ and the coset partition of (ℤ/pℤ)×.

use std::fmt;

use thiserror::Error;

use crate::modarith::{factorize, is_generator, is_prime, mul_mod, primitive_root};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CosetError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("m = {m} does not divide p - 1 = {}", .p - 1)]
    NotDivisor { p: u64, m: u64 },
    #[error("coset size (p - 1)/m = {k} is odd (p = {p}, m = {m})")]
    OddCosetSize { p: u64, m: u64, k: u64 },
    #[error("{g} is not a primitive root modulo {p}")]
    NotGenerator { p: u64, g: u64 },
    #[error("m = {0} exceeds the supported number of colors")]
    TooManyColors(u64),
    #[error("coset label {label} out of range for m = {m}")]
    LabelOutOfRange { label: usize, m: usize },
    #[error("stored label table for p = {p}, m = {m} is inconsistent")]
    CorruptLabelTable { p: u64, m: u64 },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
}

const WORD: usize = 64;

/// A subset of ℤ/pℤ stored as a dense bitset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    p: u64,
    words: Vec<u64>,
    size: usize,
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ResidueSet(mod {}) ", self.p)?;
        f.debug_set().entries(self.iter()).finish()
    }
}

impl ResidueSet {
    pub fn empty(p: u64) -> Self {
        assert!(p >= 1, "modulus must be positive");
        let n = usize::try_from(p).expect("modulus fits in memory");
        Self {
            p,
            words: vec![0; n.div_ceil(WORD)],
            size: 0,
        }
    }

    /// All of ℤ/pℤ.
    pub fn full(p: u64) -> Self {
        Self::empty(p).complement()
    }

    /// Builds a set from residues; values are reduced mod `p`.
    pub fn from_residues<I: IntoIterator<Item = u64>>(p: u64, residues: I) -> Self {
        let mut s = Self::empty(p);
        for r in residues {
            s.insert(r % p);
        }
        s
    }

    fn insert(&mut self, x: u64) {
        let x = x as usize;
        let (w, b) = (x / WORD, x % WORD);
        if self.words[w] >> b & 1 == 0 {
            self.words[w] |= 1 << b;
            self.size += 1;
        }
    }

    fn recount(&mut self) {
        self.size = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    fn clear_tail(&mut self) {
        let rem = self.p as usize % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn contains(&self, x: u64) -> bool {
        if x >= self.p {
            return false;
        }
        let x = x as usize;
        self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some((wi * WORD + b) as u64)
            })
        })
    }

    fn check_modulus(&self, other: &Self) -> Result<(), CosetError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(CosetError::ModulusMismatch(self.p, other.p))
        }
    }

    fn zip_words(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Result<Self, CosetError> {
        self.check_modulus(other)?;
        let mut out = Self {
            p: self.p,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| op(a, b)).collect(),
            size: 0,
        };
        out.clear_tail();
        out.recount();
        Ok(out)
    }

    pub fn union(&self, other: &Self) -> Result<Self, CosetError> {
        self.zip_words(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, CosetError> {
        self.zip_words(other, |a, b| a & b)
    }

    /// `self \ other`
    pub fn minus(&self, other: &Self) -> Result<Self, CosetError> {
        self.zip_words(other, |a, b| a & !b)
    }

    /// Complement within ℤ/pℤ.
    pub fn complement(&self) -> Self {
        let mut out = Self {
            p: self.p,
            words: self.words.iter().map(|w| !w).collect(),
            size: 0,
        };
        out.clear_tail();
        out.size = self.p as usize - self.size;
        out
    }

    pub fn is_disjoint(&self, other: &Self) -> Result<bool, CosetError> {
        Ok(self.first_common(other)?.is_none())
    }

    /// Smallest common element, if any.
    pub fn first_common(&self, other: &Self) -> Result<Option<u64>, CosetError> {
        self.check_modulus(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find_map(|(i, (&a, &b))| {
                let w = a & b;
                (w != 0).then(|| (i * WORD + w.trailing_zeros() as usize) as u64)
            }))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool, CosetError> {
        self.check_modulus(other)?;
        Ok(self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0))
    }

    /// `{a + c : a ∈ A}`
    pub fn translate(&self, c: u64) -> Self {
        let mut out = Self::empty(self.p);
        out.or_rotated(self, c % self.p);
        out.size = self.size;
        out
    }

    /// `{-a : a ∈ A}`
    pub fn negate(&self) -> Self {
        let p = self.p;
        Self::from_residues(p, self.iter().map(|a| (p - a) % p))
    }

    /// `{c - a : a ∈ A}`
    pub fn difference_from(&self, c: u64) -> Self {
        self.negate().translate(c)
    }

    /// `{a + b : a ∈ A, b ∈ B}`, built as a union of rotated copies of the
    /// larger operand.
    pub fn sumset(&self, other: &Self) -> Result<Self, CosetError> {
        self.check_modulus(other)?;
        let (small, large) = if self.size <= other.size {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Self::empty(self.p);
        for a in small.iter() {
            out.or_rotated(large, a);
        }
        out.recount();
        Ok(out)
    }

    /// No `x, y, z` in the set with `x + y ≡ z`, where `x = y` is allowed.
    pub fn is_sumfree(&self) -> bool {
        self.schur_witness().is_none()
    }

    /// Lexicographically smallest `(x, y, x + y)` with `x <= y` and all three in the set.
    pub fn schur_witness(&self) -> Option<(u64, u64, u64)> {
        let p = self.p;
        for x in self.iter() {
            // x + y ∈ A  ⟺  y ∈ (A - x)
            let shifted = self.translate(p - x);
            if let Some(y) = self
                .words
                .iter()
                .zip(&shifted.words)
                .enumerate()
                .flat_map(|(i, (&a, &b))| {
                    let mut bits = a & b;
                    std::iter::from_fn(move || {
                        if bits == 0 {
                            return None;
                        }
                        let t = bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        Some((i * WORD + t) as u64)
                    })
                })
                .find(|&y| y >= x)
            {
                return Some((x, y, (x + y) % p));
            }
        }
        None
    }

    /// `self |= rotate(src, shift)`, where bit `x` of `src` lands on `x + shift mod p`.
    /// Does not maintain `size`.
    fn or_rotated(&mut self, src: &Self, shift: u64) {
        debug_assert_eq!(self.p, src.p);
        let p = self.p as usize;
        let s = shift as usize % p;
        if s == 0 {
            for (d, &w) in self.words.iter_mut().zip(&src.words) {
                *d |= w;
            }
            return;
        }
        // bits x < p - s move up by s
        shl_or(&mut self.words, &src.words, s);
        self.clear_tail();
        // bits x >= p - s wrap to x - (p - s)
        shr_or(&mut self.words, &src.words, p - s);
    }
}

fn shl_or(dst: &mut [u64], src: &[u64], s: usize) {
    let (ws, bs) = (s / WORD, s % WORD);
    for i in (ws..dst.len()).rev() {
        let j = i - ws;
        let mut v = src[j] << bs;
        if bs > 0 && j > 0 {
            v |= src[j - 1] >> (WORD - bs);
        }
        dst[i] |= v;
    }
}

fn shr_or(dst: &mut [u64], src: &[u64], s: usize) {
    let (ws, bs) = (s / WORD, s % WORD);
    let n = src.len();
    for i in 0..n.saturating_sub(ws) {
        let j = i + ws;
        let mut v = src[j] >> bs;
        if bs > 0 && j + 1 < n {
            v |= src[j + 1] << (WORD - bs);
        }
        dst[i] |= v;
    }
}

const NO_LABEL: u16 = u16::MAX;

/// The partition of (ℤ/pℤ)× into the `m` cosets `X_i = g^i·X_0` of the
/// index-`m` subgroup `X_0`.
///
/// Residue `g^t` carries label `t mod m`; zero carries none.
#[derive(Clone, PartialEq, Eq)]
pub struct CosetDecomposition {
    p: u64,
    m: usize,
    k: usize,
    g: u64,
    labels: Vec<u16>,
}

impl fmt::Debug for CosetDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CosetDecomposition")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("k", &self.k)
            .field("g", &self.g)
            .finish()
    }
}

impl CosetDecomposition {
    /// Validates `(p, m, g)` and labels every nonzero residue by walking the
    /// powers of `g`.
    pub fn new(p: u64, m: u64, g: u64) -> Result<Self, CosetError> {
        Self::validate(p, m)?;
        let qs: Vec<u64> = factorize(p - 1).primes().collect();
        if !is_generator(g, p, &qs) {
            return Err(CosetError::NotGenerator { p, g });
        }
        let g = g % p;
        let n = usize::try_from(p).expect("modulus fits in memory");
        let m = m as usize;
        let mut labels = vec![NO_LABEL; n];
        let mut x = 1u64;
        let mut label = 0usize;
        for _ in 0..p - 1 {
            labels[x as usize] = label as u16;
            label += 1;
            if label == m {
                label = 0;
            }
            x = mul_mod(x, g, p);
        }
        Ok(Self {
            p,
            m,
            k: (n - 1) / m,
            g,
            labels,
        })
    }

    /// Same as [`CosetDecomposition::new`] using the smallest primitive root.
    pub fn with_smallest_root(p: u64, m: u64) -> Result<Self, CosetError> {
        Self::validate(p, m)?;
        let g = primitive_root(p).map_err(|_| CosetError::NotPrime(p))?;
        Self::new(p, m, g)
    }

    /// Checks that `p` is prime and `m` splits `p - 1` into an even number of
    /// residues per coset.
    pub fn validate(p: u64, m: u64) -> Result<(), CosetError> {
        if !is_prime(p) {
            return Err(CosetError::NotPrime(p));
        }
        if m == 0 || (p - 1) % m != 0 {
            return Err(CosetError::NotDivisor { p, m });
        }
        if m >= NO_LABEL as u64 {
            return Err(CosetError::TooManyColors(m));
        }
        let k = (p - 1) / m;
        if k % 2 != 0 {
            return Err(CosetError::OddCosetSize { p, m, k });
        }
        Ok(())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of cosets (colors).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Coset size `(p - 1)/m`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> u64 {
        self.g
    }

    /// Coset label of a residue; `None` for zero.
    #[inline]
    pub fn label(&self, x: u64) -> Option<usize> {
        match self.labels[(x % self.p) as usize] {
            NO_LABEL => None,
            l => Some(l as usize),
        }
    }

    /// `g^e mod p`
    pub fn power(&self, e: u64) -> u64 {
        crate::modarith::mod_pow(self.g, e, self.p)
    }

    /// Members of `X_i` in generation order `g^i, g^{m+i}, ...`.
    pub fn coset_members(&self, i: usize) -> Result<Vec<u64>, CosetError> {
        if i >= self.m {
            return Err(CosetError::LabelOutOfRange { label: i, m: self.m });
        }
        let step = self.power(self.m as u64);
        let mut x = self.power(i as u64);
        let mut out = Vec::with_capacity(self.k);
        for _ in 0..self.k {
            out.push(x);
            x = mul_mod(x, step, self.p);
        }
        Ok(out)
    }

    /// `X_i` as a residue set.
    pub fn coset(&self, i: usize) -> Result<ResidueSet, CosetError> {
        Ok(ResidueSet::from_residues(self.p, self.coset_members(i)?))
    }

    /// `X_0, ..., X_{m-1}` in one pass over the label table.
    pub fn cosets(&self) -> Vec<ResidueSet> {
        let mut out: Vec<ResidueSet> = (0..self.m).map(|_| ResidueSet::empty(self.p)).collect();
        for (x, &l) in self.labels.iter().enumerate() {
            if l != NO_LABEL {
                out[l as usize].insert(x as u64);
            }
        }
        out
    }

    /// Raw label table, indexed by residue; zero maps to `u16::MAX`.
    pub fn label_table(&self) -> &[u16] {
        &self.labels
    }

    /// Rebuilds a decomposition from a stored label table.
    ///
    /// Validates `(p, m, g)` and the shape of the table (zero unlabeled,
    /// `k` residues per label, `label(g·x) = label(x) + 1`) without re-walking
    /// the powers of `g`.
    pub fn from_label_table(p: u64, m: u64, g: u64, labels: Vec<u16>) -> Result<Self, CosetError> {
        Self::validate(p, m)?;
        let qs: Vec<u64> = factorize(p - 1).primes().collect();
        if !is_generator(g, p, &qs) {
            return Err(CosetError::NotGenerator { p, g });
        }
        let (mu, k) = (m as usize, ((p - 1) / m) as usize);
        let corrupt = || CosetError::CorruptLabelTable { p, m };
        if labels.len() as u64 != p || labels[0] != NO_LABEL || labels[1] != 0 {
            return Err(corrupt());
        }
        let mut counts = vec![0usize; mu];
        for (x, &l) in labels.iter().enumerate().skip(1) {
            let l = l as usize;
            if l >= mu {
                return Err(corrupt());
            }
            counts[l] += 1;
            let next = labels[mul_mod(x as u64, g, p) as usize] as usize;
            if next != (l + 1) % mu {
                return Err(corrupt());
            }
        }
        if counts.iter().any(|&c| c != k) {
            return Err(corrupt());
        }
        Ok(Self {
            p,
            m: mu,
            k,
            g: g % p,
            labels,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: u64, xs: &[u64]) -> ResidueSet {
        ResidueSet::from_residues(p, xs.iter().copied())
    }

    fn members(s: &ResidueSet) -> Vec<u64> {
        s.iter().collect()
    }

    #[test]
    fn build_examples() {
        let d = CosetDecomposition::new(5, 2, 2).unwrap();
        assert_eq!(members(&d.coset(0).unwrap()), vec![1, 4]);
        assert_eq!(members(&d.coset(1).unwrap()), vec![2, 3]);

        let d = CosetDecomposition::new(13, 2, 2).unwrap();
        let squares: Vec<u64> = {
            let mut v: Vec<u64> = (1..13).map(|x| x * x % 13).collect();
            v.sort();
            v.dedup();
            v
        };
        assert_eq!(squares, vec![1, 3, 4, 9, 10, 12]);
        assert_eq!(members(&d.coset(0).unwrap()), squares);

        let d = CosetDecomposition::new(7, 3, 3).unwrap();
        assert_eq!(members(&d.coset(0).unwrap()), vec![1, 6]);
        assert_eq!(members(&d.coset(2).unwrap()), vec![2, 5]);
        assert_eq!(d.coset_members(2).unwrap(), vec![2, 5]);
    }

    #[test]
    fn build_rejections() {
        assert_eq!(
            CosetDecomposition::new(7, 2, 3),
            Err(CosetError::OddCosetSize { p: 7, m: 2, k: 3 })
        );
        assert_eq!(
            CosetDecomposition::new(11, 3, 2),
            Err(CosetError::NotDivisor { p: 11, m: 3 })
        );
        assert_eq!(
            CosetDecomposition::new(13, 2, 3),
            Err(CosetError::NotGenerator { p: 13, g: 3 })
        );
        assert_eq!(CosetDecomposition::new(15, 2, 2), Err(CosetError::NotPrime(15)));
        assert_eq!(
            CosetDecomposition::new(2, 1, 1),
            Err(CosetError::OddCosetSize { p: 2, m: 1, k: 1 })
        );
        let d = CosetDecomposition::new(5, 2, 2).unwrap();
        assert_eq!(d.coset(2), Err(CosetError::LabelOutOfRange { label: 2, m: 2 }));
    }

    #[test]
    fn labels_follow_powers() {
        let d = CosetDecomposition::new(31, 3, 3).unwrap();
        assert_eq!(d.label(0), None);
        let mut x = 1;
        for t in 0..30 {
            assert_eq!(d.label(x), Some(t % 3));
            x = x * 3 % 31;
        }
        let all = d.cosets();
        for (i, c) in all.iter().enumerate() {
            assert_eq!(c, &d.coset(i).unwrap());
            assert_eq!(c.len(), 10);
        }
    }

    #[test]
    fn sumset_examples() {
        let a = set(5, &[1, 4]);
        assert_eq!(members(&a.sumset(&a).unwrap()), vec![0, 2, 3]);
        assert!(ResidueSet::empty(5).sumset(&a).unwrap().is_empty());
        assert_eq!(members(&a.sumset(&set(5, &[2, 3])).unwrap()), vec![1, 2, 3, 4]);
        assert_eq!(
            a.sumset(&ResidueSet::empty(7)),
            Err(CosetError::ModulusMismatch(5, 7))
        );
    }

    #[test]
    fn sumfree_examples() {
        assert!(set(5, &[1, 4]).is_sumfree());
        let qr = set(13, &[1, 3, 4, 9, 10, 12]);
        assert!(!qr.is_sumfree());
        assert_eq!(qr.schur_witness(), Some((1, 3, 4)));
        assert!(ResidueSet::empty(13).is_sumfree());
        // x = y counts
        assert!(!set(7, &[1, 2]).is_sumfree());
    }

    #[test]
    fn translate_negate_examples() {
        let a = set(5, &[1, 4]);
        assert_eq!(members(&a.translate(1)), vec![0, 2]);
        assert_eq!(members(&a.negate()), vec![1, 4]);
        assert_eq!(members(&a.difference_from(1)), vec![0, 2]);
        assert_eq!(members(&set(5, &[0, 2]).negate()), vec![0, 3]);
    }

    #[test]
    fn complement_and_full() {
        let f = ResidueSet::full(70);
        assert_eq!(f.len(), 70);
        assert_eq!(f.iter().last(), Some(69));
        let a = set(70, &[0, 63, 64, 69]);
        let c = a.complement();
        assert_eq!(c.len(), 66);
        assert!(!c.contains(64));
        assert!(c.contains(65));
        assert_eq!(a.union(&c).unwrap(), f);
    }

    fn brute_sumset(a: &ResidueSet, b: &ResidueSet) -> ResidueSet {
        let p = a.modulus();
        let mut v = Vec::new();
        for x in a.iter() {
            for y in b.iter() {
                v.push((x + y) % p);
            }
        }
        ResidueSet::from_residues(p, v)
    }

    #[test]
    fn rotation_across_word_boundaries() {
        for p in [1u64, 2, 63, 64, 65, 127, 128, 129, 200] {
            let a = ResidueSet::from_residues(p, (0..p).filter(|x| x % 3 == 0 || x % 7 == 1));
            for c in [0, 1, 5, 63, 64, 65, 130, 199] {
                let c = c % p;
                let want = ResidueSet::from_residues(p, a.iter().map(|x| (x + c) % p));
                assert_eq!(a.translate(c), want, "p = {p}, c = {c}");
            }
        }
    }

    use proptest::prelude::*;

    fn residue_set() -> impl Strategy<Value = ResidueSet> {
        (1u64..300).prop_flat_map(|p| {
            prop::collection::vec(0..p, 0..40).prop_map(move |v| ResidueSet::from_residues(p, v))
        })
    }

    proptest! {
        #[test]
        fn sumset_matches_enumeration(a in residue_set(), seed in any::<u64>()) {
            let p = a.modulus();
            let b = ResidueSet::from_residues(p, (0..p).filter(|x| (x ^ seed) % 5 == 0));
            let s = a.sumset(&b).unwrap();
            prop_assert_eq!(&s, &brute_sumset(&a, &b));
            prop_assert_eq!(s.len(), s.iter().count());
            prop_assert!(s.iter().all(|x| x < p));
        }

        #[test]
        fn sumfree_matches_enumeration(a in residue_set()) {
            let p = a.modulus();
            let brute = a.iter().all(|x| a.iter().all(|y| !a.contains((x + y) % p)));
            prop_assert_eq!(a.is_sumfree(), brute);
            if let Some((x, y, z)) = a.schur_witness() {
                prop_assert!(a.contains(x) && a.contains(y) && a.contains(z));
                prop_assert_eq!((x + y) % p, z);
            }
        }
    }
}
