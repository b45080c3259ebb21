//! Closed-form upper bounds on the probability that each decoding condition
//! fails, and their union.
//!
//! The formulas are generic over [`BoundScalar`]: floating-point types
//! evaluate every term in log space, while `BigRational` evaluates them
//! exactly. All quantities are powers of `p`, since `q / p^j = p^{r-j}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive};

use crate::error::{Error, Result};

/// Scalar type a bound can be evaluated in.
pub trait BoundScalar: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + std::fmt::Debug {
    /// `(p^hi - p^lo) * p^shift` for `lo < hi`.
    fn p_power_gap(p: u64, hi: i64, lo: i64, shift: i64) -> Self;

    /// `1 - prod_e (1 - p^e)`.
    fn complement_of_product<I: IntoIterator<Item = i64>>(p: u64, exps: I) -> Self;

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count is representable")
    }
}

macro_rules! impl_bound_float {
    ($f:ty) => {
        impl BoundScalar for $f {
            fn p_power_gap(p: u64, hi: i64, lo: i64, shift: i64) -> Self {
                debug_assert!(lo < hi);
                let ln_p = (p as $f).ln();
                let log = (hi + shift) as $f * ln_p + (-((lo - hi) as $f * ln_p).exp()).ln_1p();
                log.exp()
            }

            fn complement_of_product<I: IntoIterator<Item = i64>>(p: u64, exps: I) -> Self {
                let ln_p = (p as $f).ln();
                let mut log_sum: $f = 0.0;
                let mut direct: $f = 1.0;
                let mut all_negative = true;
                for e in exps {
                    if e >= 0 {
                        all_negative = false;
                    }
                    let pe = (e as $f * ln_p).exp();
                    direct *= 1.0 - pe;
                    if all_negative {
                        log_sum += (-pe).ln_1p();
                    }
                }
                if all_negative {
                    -log_sum.exp_m1()
                } else {
                    1.0 - direct
                }
            }
        }
    };
}

impl_bound_float!(f32);
impl_bound_float!(f64);

fn exact_p_power(p: u64, e: i64) -> BigRational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

impl BoundScalar for BigRational {
    fn p_power_gap(p: u64, hi: i64, lo: i64, shift: i64) -> Self {
        (exact_p_power(p, hi) - exact_p_power(p, lo)) * exact_p_power(p, shift)
    }

    fn complement_of_product<I: IntoIterator<Item = i64>>(p: u64, exps: I) -> Self {
        let prod = exps
            .into_iter()
            .fold(BigRational::one(), |acc, e| acc * (BigRational::one() - exact_p_power(p, e)));
        BigRational::one() - prod
    }
}

/// Parameters shared by all bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundInputs {
    pub p: u64,
    pub r: u32,
    pub m: u32,
    pub lambda: u32,
    pub n: u32,
    pub k: u32,
    pub t: u32,
}

impl BoundInputs {
    pub fn q(&self) -> u64 {
        self.p.pow(self.r)
    }

    fn require_small_support(&self) -> Result<()> {
        if self.lambda * self.t >= self.m {
            return Err(Error::PreconditionViolated(format!(
                "bound requires lambda * t < m, got {} * {} >= {}",
                self.lambda, self.t, self.m
            )));
        }
        Ok(())
    }

    /// `t * sum_{j<r} [(q/p^j)^lambda - (q/p^{j+1})^lambda] (q/p^j)^exponent`.
    fn layered_sum<S: BoundScalar>(&self, exponent: i64) -> S {
        let lambda = self.lambda as i64;
        let mut sum = S::zero();
        for j in 0..self.r as i64 {
            let level = self.r as i64 - j;
            sum = sum + S::p_power_gap(self.p, level * lambda, (level - 1) * lambda, level * exponent);
        }
        S::from_count(self.t as u64) * sum
    }
}

/// Product-condition failure bound, unclamped. Requires `lambda * t < m`.
pub fn product_failure<S: BoundScalar>(inp: &BoundInputs) -> Result<S> {
    inp.require_small_support()?;
    Ok(inp.layered_sum((inp.lambda * inp.t) as i64 - inp.m as i64))
}

/// Syndrome-condition failure bound `1 - prod_{i < lambda t} (1 - p^{i-(n-k)})`, unclamped.
pub fn syndrome_failure<S: BoundScalar>(inp: &BoundInputs) -> S {
    let redundancy = inp.n as i64 - inp.k as i64;
    S::complement_of_product(inp.p, (0..(inp.lambda * inp.t) as i64).map(|i| i - redundancy))
}

/// Intersection-condition failure bound with exponent `t lambda (lambda+1)/2 - m`,
/// unclamped. Requires `lambda * t < m`; the intermediate-ring hypothesis is
/// reported separately by [`intermediate_ring_ok`].
pub fn intersection_failure<S: BoundScalar>(inp: &BoundInputs) -> Result<S> {
    inp.require_small_support()?;
    let exponent = (inp.t * inp.lambda * (inp.lambda + 1) / 2) as i64 - inp.m as i64;
    Ok(inp.layered_sum(exponent))
}

/// Union bound: sum of the three component bounds, unclamped.
pub fn overall_failure<S: BoundScalar>(inp: &BoundInputs) -> Result<S> {
    Ok(product_failure::<S>(inp)? + syndrome_failure::<S>(inp) + intersection_failure::<S>(inp)?)
}

pub fn overall_success<S: BoundScalar>(inp: &BoundInputs) -> Result<S> {
    Ok(S::one() - clamp_probability(overall_failure::<S>(inp)?))
}

pub fn clamp_probability<S: BoundScalar>(x: S) -> S {
    if x < S::zero() {
        S::zero()
    } else if x > S::one() {
        S::one()
    } else {
        x
    }
}

/// Whether every ring strictly between `R_q` and `R_{q,m}` has more than
/// `q^lambda` elements. Intermediate rings have `q^d` elements for divisors
/// `1 < d <= m` of `m`, so this asks that the smallest such divisor exceed lambda.
pub fn intermediate_ring_ok(m: u32, lambda: u32) -> bool {
    match (2..=m).find(|d| m % d == 0) {
        Some(d) => d > lambda,
        None => true,
    }
}

/// All four bounds for one parameter point, raw and clamped.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundSet<S> {
    pub product: S,
    pub syndrome: S,
    pub intersection: S,
    pub overall: S,
    /// `false` when the intersection bound is evaluated outside its hypothesis.
    pub intermediate_ring_ok: bool,
}

impl<S: BoundScalar> BoundSet<S> {
    pub fn evaluate(inp: &BoundInputs) -> Result<Self> {
        Ok(Self {
            product: product_failure(inp)?,
            syndrome: syndrome_failure(inp),
            intersection: intersection_failure(inp)?,
            overall: overall_failure(inp)?,
            intermediate_ring_ok: intermediate_ring_ok(inp.m, inp.lambda),
        })
    }

    pub fn clamped(&self) -> Self {
        Self {
            product: clamp_probability(self.product.clone()),
            syndrome: clamp_probability(self.syndrome.clone()),
            intersection: clamp_probability(self.intersection.clone()),
            overall: clamp_probability(self.overall.clone()),
            intermediate_ring_ok: self.intermediate_ring_ok,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper(t: u32) -> BoundInputs {
        BoundInputs { p: 2, r: 2, m: 20, lambda: 2, n: 20, k: 8, t }
    }

    fn rel_err(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn syndrome_examples() {
        let zero = BoundInputs { t: 0, ..paper(1) };
        assert_eq!(syndrome_failure::<f64>(&zero), 0.0);
        // 1 - prod_{i=0}^{5} (1 - 2^{i-12}), evaluated independently
        let mut prod = 1.0f64;
        for i in 0..6 {
            prod *= 1.0 - 2f64.powi(i - 12);
        }
        let b = syndrome_failure::<f64>(&paper(3));
        assert!(rel_err(b, 1.0 - prod) < 1e-12);
        assert!((b - 1.53e-2).abs() < 1e-4);
        // lambda t = n - k: last factor is 1 - 1/p
        assert!(syndrome_failure::<f64>(&paper(6)) >= 0.5);
        // beyond n - k some factor vanishes
        assert_eq!(clamp_probability(syndrome_failure::<f64>(&paper(7))), 1.0);
    }

    #[test]
    fn product_requires_small_support() {
        assert!(product_failure::<f64>(&paper(10)).is_err());
        assert!(intersection_failure::<f64>(&paper(10)).is_err());
        assert!(product_failure::<f64>(&paper(9)).is_ok());
    }

    #[test]
    fn field_case_has_single_term() {
        let inp = BoundInputs { p: 3, r: 1, m: 17, lambda: 3, n: 12, k: 6, t: 2 };
        let expected = 2.0 * (27.0 - 1.0) * 3f64.powi(6 - 17);
        assert!(rel_err(product_failure::<f64>(&inp).unwrap(), expected) < 1e-13);
        let expected = 2.0 * 26.0 * 3f64.powi(12 - 17);
        assert!(rel_err(intersection_failure::<f64>(&inp).unwrap(), expected) < 1e-13);
    }

    #[test]
    fn lambda_one_makes_product_and_intersection_coincide() {
        let inp = BoundInputs { p: 2, r: 3, m: 11, lambda: 1, n: 10, k: 5, t: 4 };
        assert_eq!(
            product_failure::<BigRational>(&inp).unwrap(),
            intersection_failure::<BigRational>(&inp).unwrap()
        );
    }

    #[test]
    fn intersection_exponent_at_paper_parameters() {
        // j = 0 term: (16 - 4) * 4^{9 - 20}; j = 1 term: (4 - 1) * 2^{9 - 20}
        let expected = BigRational::new(3.into(), 1.into())
            * (BigRational::new(12.into(), BigInt::from(4).pow(11))
                + BigRational::new(3.into(), BigInt::from(2).pow(11)));
        assert_eq!(intersection_failure::<BigRational>(&paper(3)).unwrap(), expected);
    }

    #[test]
    fn overall_dominates_components_and_grows_with_t() {
        let mut prev = 0.0;
        for t in 1..=7 {
            let set = BoundSet::<f64>::evaluate(&paper(t)).unwrap().clamped();
            assert!(set.overall >= set.product.max(set.syndrome).max(set.intersection));
            assert!(set.overall >= prev);
            prev = set.overall;
        }
        let s = overall_success::<f64>(&paper(1)).unwrap();
        assert!(s > 0.99 && s <= 1.0);
    }

    #[test]
    fn intermediate_ring_examples() {
        assert!(intermediate_ring_ok(19, 2));
        assert!(!intermediate_ring_ok(20, 2));
        assert!(intermediate_ring_ok(20, 1));
        assert!(intermediate_ring_ok(21, 2));
        assert!(intermediate_ring_ok(1, 3));
        assert!(!BoundSet::<f64>::evaluate(&paper(2)).unwrap().intermediate_ring_ok);
    }

    #[test]
    fn single_precision_tracks_double() {
        for t in 1..=7 {
            let a = overall_failure::<f32>(&paper(t)).unwrap() as f64;
            let b = overall_failure::<f64>(&paper(t)).unwrap();
            assert!(rel_err(a, b) < 1e-5);
        }
    }
}
