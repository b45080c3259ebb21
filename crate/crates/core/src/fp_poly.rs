//! Dense polynomials over the prime field `F_p`, used to validate moduli and
//! to seed inversion in the Galois ring.
//!
//! Coefficients are stored constant term first with no trailing zeros, so the
//! zero polynomial is the empty vector.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct FpPoly {
    pub coeffs: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2)
    let mut result = 1u128;
    let mut base = a as u128 % p as u128;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u128;
        }
        base = base * base % p as u128;
        e >>= 1;
    }
    result as u64
}

impl FpPoly {
    pub fn new(mut coeffs: Vec<u64>, p: u64) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        let mut poly = Self { coeffs };
        poly.trim();
        poly
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Self { coeffs: vec![0, 1] }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn sub(&self, other: &Self, p: u64) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = other.coeffs.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        Self::new(coeffs, p)
    }

    pub fn mul(&self, other: &Self, p: u64) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a as u128 * b as u128) % p as u128;
            }
        }
        Self::new(out.into_iter().map(|c| c as u64).collect(), p)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self, p: u64) -> (Self, Self) {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead_inv = inv_mod(divisor.coeffs[d], p) as u128;
        let mut rem: Vec<u128> = self.coeffs.iter().map(|&c| c as u128).collect();
        if rem.len() <= d {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - d];
        let pp = p as u128;
        for k in (d..rem.len()).rev() {
            let c = rem[k] % pp * lead_inv % pp;
            if c == 0 {
                continue;
            }
            quot[k - d] = c as u64;
            for (i, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - d + i;
                rem[idx] = (rem[idx] + pp * pp - c * dc as u128 % pp) % pp;
            }
        }
        rem.truncate(d);
        (
            Self::new(quot, p),
            Self::new(rem.into_iter().map(|c| (c % pp) as u64).collect(), p),
        )
    }

    pub fn rem(&self, divisor: &Self, p: u64) -> Self {
        self.div_rem(divisor, p).1
    }

    pub fn monic(&self, p: u64) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(&lead) => {
                let inv = inv_mod(lead, p) as u128;
                Self::new(
                    self.coeffs
                        .iter()
                        .map(|&c| (c as u128 * inv % p as u128) as u64)
                        .collect(),
                    p,
                )
            }
        }
    }

    pub fn gcd(&self, other: &Self, p: u64) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    /// Returns `(g, s)` with `s * self ≡ g (mod modulus)` and `g` the monic gcd.
    pub fn ext_gcd_inverse_part(&self, modulus: &Self, p: u64) -> (Self, Self) {
        let (mut old_r, mut r) = (self.rem(modulus, p), modulus.clone());
        let (mut old_s, mut s) = (Self::one(), Self::zero());
        while !r.is_zero() {
            let (quot, rem) = old_r.div_rem(&r, p);
            old_r = std::mem::replace(&mut r, rem);
            let next_s = old_s.sub(&quot.mul(&s, p), p);
            old_s = std::mem::replace(&mut s, next_s);
        }
        if let Some(&lead) = old_r.coeffs.last() {
            let inv = Self::new(vec![inv_mod(lead, p)], p);
            (old_r.mul(&inv, p), old_s.mul(&inv, p).rem(modulus, p))
        } else {
            (old_r, old_s)
        }
    }

    /// `base^(p^k) mod modulus` by repeated `p`-th powering.
    pub fn frobenius_power(&self, k: u32, modulus: &Self, p: u64) -> Self {
        let mut acc = self.rem(modulus, p);
        for _ in 0..k {
            acc = acc.pow_mod(p, modulus, p);
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Self, p: u64) -> Self {
        let mut result = Self::one().rem(modulus, p);
        let mut base = self.rem(modulus, p);
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, p).rem(modulus, p);
            }
            base = base.mul(&base, p).rem(modulus, p);
            e >>= 1;
        }
        result
    }
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: a monic `f` of degree `m` is irreducible over `F_p` iff
/// `x^(p^m) ≡ x (mod f)` and `gcd(x^(p^(m/d)) - x, f) = 1` for every prime `d | m`.
pub(crate) fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    let m = match f.degree() {
        Some(0) | None => return false,
        Some(m) => m as u32,
    };
    let x = FpPoly::x();
    let x_mod = x.rem(f, p);
    if x.frobenius_power(m, f, p) != x_mod {
        return false;
    }
    prime_divisors(m as u64).into_iter().all(|d| {
        let g = x.frobenius_power(m / d as u32, f, p).sub(&x_mod, p);
        g.gcd(f, p) == FpPoly::one()
    })
}
