//! The Galois ring `R_{q,m} = Z_q[x]/(h)`, `h` monic of degree `m` and
//! irreducible modulo `p`.
//!
//! Elements are coordinate vectors over the power basis `1, x, ..., x^{m-1}`.

use num_bigint::BigUint;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fp_poly::{is_irreducible, FpPoly};
use crate::matrix::Matrix;
use crate::ring::ChainRing;
use crate::zq::{ChainRingParams, ZqElem};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GrElement {
    coeffs: Vec<ZqElem>,
}

impl GrElement {
    pub fn coeffs(&self) -> &[ZqElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<ZqElem> {
        self.coeffs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRing {
    base: ChainRingParams,
    m: usize,
    // monic, length m + 1, constant term first
    modulus: Vec<ZqElem>,
}

/// Default bound on random modulus draws per unit of extension degree.
pub const MODULUS_ATTEMPTS_PER_DEGREE: usize = 64;

impl GaloisRing {
    /// Validates a supplied monic modulus given as `m + 1` little-endian
    /// coefficients, or as `m` coefficients with the leading one implied.
    pub fn with_modulus(base: ChainRingParams, m: usize, h: &[u64]) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("extension degree must be positive".into()));
        }
        let mut modulus: Vec<ZqElem> = h.iter().map(|&c| base.elem(c)).collect();
        match modulus.len() {
            len if len == m => modulus.push(ZqElem::ONE),
            len if len == m + 1 => {
                if modulus[m] != base.elem(1) {
                    return Err(Error::InvalidParams("modulus must be monic".into()));
                }
            }
            len => {
                return Err(Error::InvalidParams(format!(
                    "modulus has {len} coefficients, expected {}",
                    m + 1
                )))
            }
        }
        let ring = Self { base, m, modulus };
        if !is_irreducible(&ring.projected_modulus(), ring.base.p()) {
            return Err(Error::ReducibleModulus);
        }
        Ok(ring)
    }

    /// Draws random monic moduli until one is irreducible modulo `p`.
    pub fn with_random_modulus<R: Rng + ?Sized>(
        base: ChainRingParams,
        m: usize,
        rng: &mut R,
    ) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("extension degree must be positive".into()));
        }
        let attempts = MODULUS_ATTEMPTS_PER_DEGREE * m;
        for _ in 0..attempts {
            let h: Vec<u64> = (0..m).map(|_| base.random(rng).value()).collect();
            match Self::with_modulus(base.clone(), m, &h) {
                Ok(ring) => return Ok(ring),
                Err(Error::ReducibleModulus) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::ModulusSearchExhausted(attempts))
    }

    /// Builds `R_{q,m}` from scratch; `h` is optional.
    pub fn make<R: Rng + ?Sized>(
        p: u64,
        r: u32,
        m: usize,
        h: Option<&[u64]>,
        rng: &mut R,
    ) -> Result<Self> {
        let base = ChainRingParams::new(p, r)?;
        match h {
            Some(h) => Self::with_modulus(base, m, h),
            None => Self::with_random_modulus(base, m, rng),
        }
    }

    pub fn base(&self) -> &ChainRingParams {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn modulus(&self) -> &[ZqElem] {
        &self.modulus
    }

    fn projected_modulus(&self) -> FpPoly {
        let p = self.base.p();
        FpPoly::new(self.modulus.iter().map(|c| c.value() % p).collect(), p)
    }

    pub fn element(&self, coeffs: Vec<ZqElem>) -> Result<GrElement> {
        if coeffs.len() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficients for extension degree {}",
                coeffs.len(),
                self.m
            )));
        }
        Ok(GrElement { coeffs })
    }

    /// Element from integer coefficients (reduced mod q), padded with zeros.
    pub fn from_u64s(&self, coeffs: &[u64]) -> GrElement {
        assert!(coeffs.len() <= self.m, "too many coefficients");
        let mut out = vec![ZqElem::ZERO; self.m];
        for (o, &c) in out.iter_mut().zip(coeffs) {
            *o = self.base.elem(c);
        }
        GrElement { coeffs: out }
    }

    /// Embeds a base-ring scalar.
    pub fn scalar(&self, c: ZqElem) -> GrElement {
        let mut coeffs = vec![ZqElem::ZERO; self.m];
        coeffs[0] = c;
        GrElement { coeffs }
    }

    /// The basis element `x^i`. With `m == 1` the ring is `R_q` and `x` is
    /// not a basis element, so `i` must be below `m`.
    pub fn basis(&self, i: usize) -> GrElement {
        assert!(i < self.m, "basis index out of range");
        let mut coeffs = vec![ZqElem::ZERO; self.m];
        coeffs[i] = ZqElem::ONE;
        GrElement { coeffs }
    }

    pub fn scalar_mul(&self, c: ZqElem, a: &GrElement) -> GrElement {
        GrElement { coeffs: a.coeffs.iter().map(|&x| self.base.mul(c, x)).collect() }
    }

    /// `acc += c * a`, coordinatewise.
    pub fn add_scaled_into(&self, acc: &mut [ZqElem], c: ZqElem, a: &[ZqElem]) {
        if c == ZqElem::ZERO {
            return;
        }
        for (o, &x) in acc.iter_mut().zip(a) {
            *o = self.base.add(*o, self.base.mul(c, x));
        }
    }

    /// Multiplies coordinate slices, writing the reduced product into `out`.
    pub fn mul_into(&self, a: &[ZqElem], b: &[ZqElem], out: &mut [ZqElem]) {
        let m = self.m;
        let zq = &self.base;
        let mut prod = vec![ZqElem::ZERO; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == ZqElem::ZERO {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = zq.add(prod[i + j], zq.mul(x, y));
            }
        }
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == ZqElem::ZERO {
                continue;
            }
            // x^d = -sum_{i<m} h_i x^{d-m+i}
            for i in 0..m {
                prod[d - m + i] = zq.sub(prod[d - m + i], zq.mul(c, self.modulus[i]));
            }
        }
        out.copy_from_slice(&prod[..m]);
    }

    /// Matrix of multiplication by `a`: row `i` holds the coordinates of `a * x^i`,
    /// so `coords(a * b) = coords(b) * M`.
    pub fn mul_matrix(&self, a: &GrElement) -> Matrix<ZqElem> {
        let m = self.m;
        let mut rows = Vec::with_capacity(m * m);
        let mut current = a.coeffs.clone();
        for _ in 0..m {
            rows.extend_from_slice(&current);
            // multiply by x
            let top = current[m - 1];
            current.rotate_right(1);
            current[0] = ZqElem::ZERO;
            for i in 0..m {
                current[i] = self.base.sub(current[i], self.base.mul(top, self.modulus[i]));
            }
        }
        Matrix::from_vec(m, m, rows).expect("square")
    }

    pub fn is_unit(&self, a: &GrElement) -> bool {
        a.coeffs.iter().any(|&c| self.base.is_unit(c))
    }

    /// Inverts the residue modulo `p` by extended Euclid over `F_p`, then
    /// lifts with Newton steps `y <- y (2 - a y)`.
    pub fn inverse(&self, a: &GrElement) -> Result<GrElement> {
        if !self.is_unit(a) {
            return Err(Error::NonUnit);
        }
        let p = self.base.p();
        let a_bar = FpPoly::new(a.coeffs.iter().map(|c| c.value() % p).collect(), p);
        let (g, s) = a_bar.ext_gcd_inverse_part(&self.projected_modulus(), p);
        debug_assert_eq!(g, FpPoly::one());
        let mut y = self.from_u64s(&s.coeffs);
        let two = self.scalar(self.base.elem(2));
        let mut precision = 1;
        while precision < self.base.r() {
            let ay = self.mul(a, &y);
            y = self.mul(&y, &self.sub(&two, &ay));
            precision *= 2;
        }
        debug_assert_eq!(self.mul(a, &y), self.one());
        Ok(y)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> GrElement {
        GrElement { coeffs: (0..self.m).map(|_| self.base.random(rng)).collect() }
    }

    /// Uniform over the units, by rejection.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> GrElement {
        loop {
            let a = self.random(rng);
            if self.is_unit(&a) {
                return a;
            }
        }
    }

    /// `q^m`, or `None` when it overflows.
    pub fn cardinality(&self) -> Option<u64> {
        self.base.q().checked_pow(self.m as u32)
    }

    /// `|R_{q,m}^*| = q^m - (q/p)^m`.
    pub fn unit_count(&self) -> BigUint {
        let q = BigUint::from(self.base.q());
        let nonunits = BigUint::from(self.base.q() / self.base.p());
        q.pow(self.m as u32) - nonunits.pow(self.m as u32)
    }

    /// Every element, in lexicographic coefficient order. Only for tiny rings.
    pub fn elements(&self) -> impl Iterator<Item = GrElement> + '_ {
        let total = self.cardinality().expect("ring too large to enumerate");
        let q = self.base.q();
        (0..total).map(move |mut idx| {
            let coeffs = (0..self.m)
                .map(|_| {
                    let v = idx % q;
                    idx /= q;
                    self.base.elem(v)
                })
                .collect();
            GrElement { coeffs }
        })
    }

    /// Column `j` of the result holds the coordinates of `v[j]` (an `m x n` matrix).
    pub fn ext_gamma(&self, v: &[GrElement]) -> Matrix<ZqElem> {
        Matrix::from_fn(self.m, v.len(), |i, j| v[j].coeffs[i])
    }

    pub fn ext_gamma_inverse(&self, a: &Matrix<ZqElem>) -> Result<Vec<GrElement>> {
        if a.rows() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "expected {} rows, got {}",
                self.m,
                a.rows()
            )));
        }
        Ok((0..a.cols()).map(|j| GrElement { coeffs: a.column(j) }).collect())
    }

    /// Coordinates of each element as the rows of a matrix over `R_q`.
    pub fn coordinate_rows(&self, v: &[GrElement]) -> Matrix<ZqElem> {
        Matrix::from_rows(self.m, v.iter().map(|e| e.coeffs.as_slice())).expect("uniform length")
    }

    pub fn from_coordinate_row(&self, row: &[ZqElem]) -> GrElement {
        assert_eq!(row.len(), self.m);
        GrElement { coeffs: row.to_vec() }
    }
}

impl ChainRing for GaloisRing {
    type Elem = GrElement;

    fn prime(&self) -> u64 {
        self.base.p()
    }

    fn nilpotency(&self) -> u32 {
        self.base.r()
    }

    fn zero(&self) -> GrElement {
        GrElement { coeffs: vec![ZqElem::ZERO; self.m] }
    }

    fn one(&self) -> GrElement {
        self.scalar(self.base.one())
    }

    fn is_zero(&self, a: &GrElement) -> bool {
        a.coeffs.iter().all(|&c| c == ZqElem::ZERO)
    }

    fn add(&self, a: &GrElement, b: &GrElement) -> GrElement {
        GrElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.base.add(x, y)).collect(),
        }
    }

    fn sub(&self, a: &GrElement, b: &GrElement) -> GrElement {
        GrElement {
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(&x, &y)| self.base.sub(x, y)).collect(),
        }
    }

    fn neg(&self, a: &GrElement) -> GrElement {
        GrElement { coeffs: a.coeffs.iter().map(|&x| self.base.neg(x)).collect() }
    }

    fn mul(&self, a: &GrElement, b: &GrElement) -> GrElement {
        let mut out = vec![ZqElem::ZERO; self.m];
        self.mul_into(&a.coeffs, &b.coeffs, &mut out);
        GrElement { coeffs: out }
    }

    fn is_unit(&self, a: &GrElement) -> bool {
        GaloisRing::is_unit(self, a)
    }

    fn inverse(&self, a: &GrElement) -> Result<GrElement> {
        GaloisRing::inverse(self, a)
    }

    /// Minimum valuation over the coefficients.
    fn valuation(&self, a: &GrElement) -> Option<u32> {
        a.coeffs.iter().filter_map(|&c| self.base.valuation(c)).min()
    }

    fn valuation_decompose(&self, a: &GrElement) -> Result<(u32, GrElement)> {
        let j = self.valuation(a).ok_or(Error::ZeroInput)?;
        Ok((j, self.div_p_power(a, j)))
    }

    fn div_p_power(&self, a: &GrElement, v: u32) -> GrElement {
        let d = self.base.p().pow(v);
        GrElement { coeffs: a.coeffs.iter().map(|c| ZqElem::from_raw(c.value() / d)).collect() }
    }

    fn reduce_mod_p_power(&self, a: &GrElement, v: u32) -> (GrElement, GrElement) {
        let d = self.base.p().pow(v);
        let quot = a.coeffs.iter().map(|c| ZqElem::from_raw(c.value() / d)).collect();
        let rem = a.coeffs.iter().map(|c| ZqElem::from_raw(c.value() % d)).collect();
        (GrElement { coeffs: quot }, GrElement { coeffs: rem })
    }

    fn p_power(&self, j: u32) -> GrElement {
        self.scalar(self.base.p_power(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gr4_2() -> GaloisRing {
        GaloisRing::with_modulus(ChainRingParams::new(2, 2).unwrap(), 2, &[1, 1, 1]).unwrap()
    }

    #[test]
    fn modulus_validation() {
        let base = ChainRingParams::new(2, 2).unwrap();
        assert!(GaloisRing::with_modulus(base.clone(), 2, &[1, 1, 1]).is_ok());
        assert_eq!(
            GaloisRing::with_modulus(base.clone(), 2, &[1, 0, 1]),
            Err(Error::ReducibleModulus)
        );
        // implied leading coefficient
        assert!(GaloisRing::with_modulus(base.clone(), 2, &[1, 1]).is_ok());
        // x^2 + x + 3 projects to x^2 + x + 1
        assert!(GaloisRing::with_modulus(base.clone(), 2, &[3, 1, 1]).is_ok());
        assert!(GaloisRing::with_modulus(base, 2, &[1, 1, 3]).is_err());
    }

    #[test]
    fn multiplication_examples() {
        let ring = gr4_2();
        let x = ring.basis(1);
        assert_eq!(ring.mul(&x, &x), ring.from_u64s(&[3, 3]));
        let one_plus_x = ring.from_u64s(&[1, 1]);
        assert_eq!(ring.mul(&one_plus_x, &one_plus_x), x);
        for a in ring.elements() {
            assert_eq!(ring.mul(&a, &ring.one()), a);
        }
    }

    #[test]
    fn inverse_examples() {
        let ring = gr4_2();
        assert_eq!(ring.inverse(&ring.one()).unwrap(), ring.one());
        assert_eq!(ring.inverse(&ring.basis(1)).unwrap(), ring.from_u64s(&[3, 3]));
        assert_eq!(ring.inverse(&ring.from_u64s(&[2, 2])), Err(Error::NonUnit));
    }

    #[test]
    fn unit_criterion_matches_brute_force() {
        let ring = gr4_2();
        let all: Vec<_> = ring.elements().collect();
        assert_eq!(all.len(), 16);
        let mut units = 0;
        for a in &all {
            let invertible = all.iter().any(|b| ring.mul(a, b) == ring.one());
            assert_eq!(invertible, ring.is_unit(a), "{a:?}");
            if invertible {
                units += 1;
                assert_eq!(ring.mul(a, &ring.inverse(a).unwrap()), ring.one());
            }
        }
        assert_eq!(units, 12);
        assert_eq!(ring.unit_count(), BigUint::from(12u32));
    }

    #[test]
    fn valuation_examples() {
        let ring = gr4_2();
        let two = ring.from_u64s(&[2]);
        assert_eq!(ring.valuation_decompose(&two).unwrap(), (1, ring.one()));
        let x = ring.basis(1);
        assert_eq!(ring.valuation_decompose(&x).unwrap(), (0, x));
        assert_eq!(ring.valuation_decompose(&ring.zero()), Err(Error::ZeroInput));

        let base8 = ChainRingParams::new(2, 3).unwrap();
        let ring8 = GaloisRing::with_modulus(base8, 3, &[1, 1, 0, 1]).unwrap();
        let a = ring8.from_u64s(&[4, 2, 0]);
        assert_eq!(ring8.valuation_decompose(&a).unwrap(), (1, ring8.from_u64s(&[2, 1, 0])));
    }

    #[test]
    fn ext_gamma_examples() {
        let ring = gr4_2();
        let zero = ring.ext_gamma(&[ring.zero(), ring.zero()]);
        assert!(zero.entries().iter().all(|&c| c == ZqElem::ZERO));
        let col = ring.ext_gamma(&[ring.basis(1)]);
        assert_eq!(col.column(0), vec![ZqElem::ZERO, ZqElem::ONE]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v: Vec<_> = (0..5).map(|_| ring.random(&mut rng)).collect();
        assert_eq!(ring.ext_gamma_inverse(&ring.ext_gamma(&v)).unwrap(), v);
    }

    #[test]
    fn mul_matrix_agrees_with_mul() {
        let base = ChainRingParams::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let ring = GaloisRing::with_random_modulus(base, 5, &mut rng).unwrap();
        for _ in 0..20 {
            let a = ring.random(&mut rng);
            let b = ring.random(&mut rng);
            let m = ring.mul_matrix(&a);
            assert_eq!(m.left_mul_vec(ring.base(), b.coeffs()), ring.mul(&a, &b).into_coeffs());
        }
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let ring = gr4_2();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10).map(|_| ring.random_unit(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert!(draw(5).iter().all(|a| ring.is_unit(a)));
    }
}
