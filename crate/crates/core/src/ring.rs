//! The chain-ring interface shared by `Z/p^r` and the Galois ring extension.
//!
//! A finite chain ring here is always local with maximal ideal `(p)` and
//! nilpotency index `r`: every nonzero element factors as `p^j * u` with `u`
//! a unit and `0 <= j < r`. The linear algebra in [`crate::linalg`] only
//! relies on the operations below.

use std::fmt::Debug;
use std::hash::Hash;

use crate::error::Result;

pub trait ChainRing {
    type Elem: Clone + PartialEq + Eq + Hash + Debug;

    /// Characteristic prime `p` of the residue field.
    fn prime(&self) -> u64;
    /// Nilpotency index `r` of the maximal ideal: `p^r = 0`.
    fn nilpotency(&self) -> u32;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// `a - c * b`, the elimination step used everywhere.
    fn sub_mul(&self, a: &Self::Elem, c: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.sub(a, &self.mul(c, b))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool;
    fn inverse(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// `p`-adic valuation, `None` for zero.
    fn valuation(&self, a: &Self::Elem) -> Option<u32>;

    /// `a = p^j * u` with `u` a unit; canonical `u` is obtained by exact
    /// division of the representative by `p^j`.
    fn valuation_decompose(&self, a: &Self::Elem) -> Result<(u32, Self::Elem)>;

    /// Exact division by `p^v`. Caller guarantees `valuation(a) >= v`.
    fn div_p_power(&self, a: &Self::Elem, v: u32) -> Self::Elem;

    /// Splits `a = p^v * quot + rem` with `rem` the canonical representative
    /// of `a` modulo `p^v`.
    fn reduce_mod_p_power(&self, a: &Self::Elem, v: u32) -> (Self::Elem, Self::Elem);

    /// The element `p^j` (zero when `j >= r`).
    fn p_power(&self, j: u32) -> Self::Elem;
}
