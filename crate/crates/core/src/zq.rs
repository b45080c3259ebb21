//! Arithmetic in the chain ring `Z/p^r`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::ChainRing;

/// A residue in `[0, q)`. Only meaningful together with its [`ChainRingParams`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZqElem(u64);

impl ZqElem {
    pub const ZERO: ZqElem = ZqElem(0);
    pub const ONE: ZqElem = ZqElem(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    /// Wraps a value already known to lie in `[0, q)`.
    #[inline]
    pub(crate) fn from_raw(v: u64) -> Self {
        ZqElem(v)
    }
}

impl fmt::Display for ZqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parameters of `R_q = Z/p^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRingParams {
    p: u64,
    r: u32,
    q: u64,
    // q - 1 when q is a power of two, used for masking instead of `%`
    mask: Option<u64>,
    narrow: bool,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl ChainRingParams {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::InvalidParams("r must be positive".into()));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q < 1 << 63)
            .ok_or_else(|| Error::InvalidParams(format!("{p}^{r} does not fit a machine word")))?;
        Ok(Self {
            p,
            r,
            q,
            mask: (p == 2).then(|| q - 1),
            narrow: q <= 1 << 32,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    #[inline]
    fn reduce(&self, x: u64) -> u64 {
        match self.mask {
            Some(mask) => x & mask,
            None => x % self.q,
        }
    }

    /// Reduces an arbitrary integer into `R_q`.
    #[inline]
    pub fn elem(&self, v: u64) -> ZqElem {
        ZqElem(self.reduce(v))
    }

    pub fn elem_signed(&self, v: i64) -> ZqElem {
        ZqElem(v.rem_euclid(self.q as i64) as u64)
    }

    #[inline]
    pub fn add(&self, a: ZqElem, b: ZqElem) -> ZqElem {
        let s = a.0 + b.0;
        ZqElem(if s >= self.q { s - self.q } else { s })
    }

    #[inline]
    pub fn sub(&self, a: ZqElem, b: ZqElem) -> ZqElem {
        ZqElem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.q - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: ZqElem) -> ZqElem {
        ZqElem(if a.0 == 0 { 0 } else { self.q - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: ZqElem, b: ZqElem) -> ZqElem {
        if let Some(mask) = self.mask {
            ZqElem(a.0.wrapping_mul(b.0) & mask)
        } else if self.narrow {
            ZqElem(a.0 * b.0 % self.q)
        } else {
            ZqElem((a.0 as u128 * b.0 as u128 % self.q as u128) as u64)
        }
    }

    #[inline]
    pub fn is_unit(&self, a: ZqElem) -> bool {
        a.0 % self.p != 0
    }

    pub fn inverse(&self, a: ZqElem) -> Result<ZqElem> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        let (mut old_r, mut r) = (a.0 as i128, self.q as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let quot = old_r / r;
            (old_r, r) = (r, old_r - quot * r);
            (old_s, s) = (s, old_s - quot * s);
        }
        debug_assert_eq!(old_r, 1);
        Ok(ZqElem(old_s.rem_euclid(self.q as i128) as u64))
    }

    #[inline]
    pub fn valuation(&self, a: ZqElem) -> Option<u32> {
        if a.0 == 0 {
            return None;
        }
        if self.p == 2 {
            return Some(a.0.trailing_zeros());
        }
        let mut v = a.0;
        let mut j = 0;
        while v % self.p == 0 {
            v /= self.p;
            j += 1;
        }
        Some(j)
    }

    /// `a = p^j * u` with `u` a unit, `u = a / p^j` over the integers.
    pub fn valuation_decompose(&self, a: ZqElem) -> Result<(u32, ZqElem)> {
        let j = self.valuation(a).ok_or(Error::ZeroInput)?;
        Ok((j, ZqElem(a.0 / self.p.pow(j))))
    }

    #[inline]
    pub fn p_power(&self, j: u32) -> ZqElem {
        if j >= self.r {
            ZqElem(0)
        } else {
            ZqElem(self.p.pow(j))
        }
    }

    /// All elements of `R_q` in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = ZqElem> {
        (0..self.q).map(ZqElem)
    }

    /// Number of units, `q (1 - 1/p)`.
    pub fn unit_count(&self) -> u64 {
        self.q / self.p * (self.p - 1)
    }

    pub fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> ZqElem {
        ZqElem(rng.gen_range(0..self.q))
    }

    /// Uniform over the units.
    pub fn random_unit<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> ZqElem {
        // units are exactly the residues k*p + d with d in 1..p
        let k = rng.gen_range(0..self.q / self.p);
        let d = rng.gen_range(1..self.p);
        ZqElem(k * self.p + d)
    }

    /// Uniform over `R_q^* ∪ {0}`.
    pub fn random_unit_or_zero<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> ZqElem {
        let idx = rng.gen_range(0..=self.unit_count());
        if idx == 0 {
            ZqElem(0)
        } else {
            let idx = idx - 1;
            let (k, d) = (idx / (self.p - 1), idx % (self.p - 1) + 1);
            ZqElem(k * self.p + d)
        }
    }
}

impl ChainRing for ChainRingParams {
    type Elem = ZqElem;

    fn prime(&self) -> u64 {
        self.p
    }

    fn nilpotency(&self) -> u32 {
        self.r
    }

    #[inline]
    fn zero(&self) -> ZqElem {
        ZqElem(0)
    }

    #[inline]
    fn one(&self) -> ZqElem {
        ZqElem(1 % self.q)
    }

    #[inline]
    fn is_zero(&self, a: &ZqElem) -> bool {
        a.0 == 0
    }

    #[inline]
    fn add(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        ChainRingParams::add(self, *a, *b)
    }

    #[inline]
    fn sub(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        ChainRingParams::sub(self, *a, *b)
    }

    #[inline]
    fn neg(&self, a: &ZqElem) -> ZqElem {
        ChainRingParams::neg(self, *a)
    }

    #[inline]
    fn mul(&self, a: &ZqElem, b: &ZqElem) -> ZqElem {
        ChainRingParams::mul(self, *a, *b)
    }

    #[inline]
    fn sub_mul(&self, a: &ZqElem, c: &ZqElem, b: &ZqElem) -> ZqElem {
        ChainRingParams::sub(self, *a, ChainRingParams::mul(self, *c, *b))
    }

    #[inline]
    fn is_unit(&self, a: &ZqElem) -> bool {
        ChainRingParams::is_unit(self, *a)
    }

    fn inverse(&self, a: &ZqElem) -> Result<ZqElem> {
        ChainRingParams::inverse(self, *a)
    }

    #[inline]
    fn valuation(&self, a: &ZqElem) -> Option<u32> {
        ChainRingParams::valuation(self, *a)
    }

    fn valuation_decompose(&self, a: &ZqElem) -> Result<(u32, ZqElem)> {
        ChainRingParams::valuation_decompose(self, *a)
    }

    #[inline]
    fn div_p_power(&self, a: &ZqElem, v: u32) -> ZqElem {
        ZqElem(a.0 / self.p.pow(v))
    }

    #[inline]
    fn reduce_mod_p_power(&self, a: &ZqElem, v: u32) -> (ZqElem, ZqElem) {
        let d = self.p.pow(v);
        (ZqElem(a.0 / d), ZqElem(a.0 % d))
    }

    #[inline]
    fn p_power(&self, j: u32) -> ZqElem {
        ChainRingParams::p_power(self, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zq(p: u64, r: u32) -> ChainRingParams {
        ChainRingParams::new(p, r).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let z4 = zq(2, 2);
        assert_eq!(z4.add(z4.elem(3), z4.elem(3)), z4.elem(2));
        assert_eq!(z4.mul(z4.elem(2), z4.elem(2)), z4.elem(0));
        let z9 = zq(3, 2);
        assert_eq!(z9.mul(z9.elem(5), z9.elem(2)), z9.elem(1));
        assert_eq!(z9.sub(z9.elem(1), z9.elem(5)), z9.elem(5));
        assert_eq!(z9.neg(z9.elem(0)), z9.elem(0));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(ChainRingParams::new(4, 2).is_err());
        assert!(ChainRingParams::new(2, 0).is_err());
        assert!(ChainRingParams::new(2, 63).is_err());
        assert!(ChainRingParams::new(2, 62).is_ok());
    }

    #[test]
    fn units_and_inverses() {
        let z4 = zq(2, 2);
        assert!(z4.is_unit(z4.elem(3)));
        assert!(!z4.is_unit(z4.elem(2)));
        assert_eq!(z4.inverse(z4.elem(3)).unwrap(), z4.elem(3));
        assert_eq!(zq(3, 2).inverse(ZqElem(2)).unwrap(), ZqElem(5));
        assert_eq!(zq(2, 3).inverse(ZqElem(2)), Err(Error::NonUnit));
    }

    #[test]
    fn unit_counts_exhaustive() {
        for (p, r) in [(2, 2), (2, 3), (3, 2), (5, 1)] {
            let ring = zq(p, r);
            let count = ring.elements().filter(|&a| ring.is_unit(a)).count() as u64;
            assert_eq!(count, ring.q() - ring.q() / p);
            assert_eq!(count, ring.unit_count());
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(zq(2, 3).valuation_decompose(ZqElem(6)).unwrap(), (1, ZqElem(3)));
        assert_eq!(zq(2, 2).valuation_decompose(ZqElem(2)).unwrap(), (1, ZqElem(1)));
        assert_eq!(zq(3, 2).valuation_decompose(ZqElem(3)).unwrap(), (1, ZqElem(1)));
        assert_eq!(zq(3, 2).valuation_decompose(ZqElem(0)), Err(Error::ZeroInput));
    }

    #[test]
    fn wide_modulus_multiplication() {
        let ring = zq(3, 39);
        let a = ring.elem(ring.q() - 1);
        assert_eq!(ring.mul(a, a), ring.one());
        let inv = ring.inverse(ring.elem(2)).unwrap();
        assert_eq!(ring.mul(inv, ring.elem(2)), ring.one());
    }

    #[test]
    fn random_unit_or_zero_covers_target_set() {
        use rand::SeedableRng;
        let ring = zq(3, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..2000 {
            let a = ring.random_unit_or_zero(&mut rng);
            assert!(a.value() == 0 || ring.is_unit(a));
            seen.insert(a.value());
            assert!(ring.is_unit(ring.random_unit(&mut rng)));
        }
        assert_eq!(seen.len() as u64, ring.unit_count() + 1);
    }

    proptest! {
        #[test]
        fn decomposition_recomposes(p in prop::sample::select(vec![2u64, 3, 5]), r in 1u32..5, a in 1u64..10_000) {
            let ring = zq(p, r);
            let a = ring.elem(a);
            prop_assume!(a.value() != 0);
            let (j, u) = ring.valuation_decompose(a).unwrap();
            prop_assert!(ring.is_unit(u));
            prop_assert_eq!(ring.mul(ring.p_power(j), u), a);
            // invariant under unit scaling
            for w in ring.elements().filter(|&w| ring.is_unit(w)).take(8) {
                prop_assert_eq!(ring.valuation(ring.mul(w, a)), Some(j));
            }
        }

        #[test]
        fn inverse_is_involution(p in prop::sample::select(vec![2u64, 3, 7]), r in 1u32..6, a in 0u64..100_000) {
            let ring = zq(p, r);
            let a = ring.elem(a);
            prop_assume!(ring.is_unit(a));
            let inv = ring.inverse(a).unwrap();
            prop_assert_eq!(ring.mul(a, inv), ring.one());
            prop_assert_eq!(ring.inverse(inv).unwrap(), a);
        }
    }
}
