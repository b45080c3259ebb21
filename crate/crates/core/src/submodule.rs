//! `R_q`-submodules of the Galois ring, kept in coordinates over the power
//! basis with a canonical (Howell-style) generator matrix.

use rand::Rng;

use crate::error::{Error, Result};
use crate::galois::{GaloisRing, GrElement};
use crate::linalg::{howell_form, left_kernel, rank_profile, snf};
use crate::matrix::Matrix;
use crate::ring::ChainRing;
use crate::zq::ZqElem;

/// Rejection-sampling budget for the random constructions in this module.
pub const SAMPLING_ATTEMPTS: usize = 256;

#[derive(Clone, Debug)]
pub struct Submodule {
    gens: Vec<GrElement>,
    canon: Matrix<ZqElem>,
    dim: usize,
    free_rank: usize,
}

/// Equality is module equality: canonical forms agree.
impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}

impl Eq for Submodule {}

impl Submodule {
    pub fn zero(ring: &GaloisRing) -> Self {
        Self {
            gens: Vec::new(),
            canon: Matrix::zeros(ring.base(), 0, ring.degree()),
            dim: 0,
            free_rank: 0,
        }
    }

    /// The module generated by `gens` over `R_q`.
    pub fn span(ring: &GaloisRing, gens: &[GrElement]) -> Self {
        let coords = ring.coordinate_rows(gens);
        Self::build(ring, gens.to_vec(), &coords)
    }

    /// The module generated by coordinate rows (one element per row).
    pub fn from_coordinate_rows(ring: &GaloisRing, rows: &Matrix<ZqElem>) -> Self {
        let gens = rows.row_iter().map(|row| ring.from_coordinate_row(row)).collect();
        Self::build(ring, gens, rows)
    }

    fn build(ring: &GaloisRing, gens: Vec<GrElement>, coords: &Matrix<ZqElem>) -> Self {
        let canon = howell_form(ring.base(), coords);
        let (dim, free_rank) = rank_profile(ring.base(), &canon);
        Self { gens, canon, dim, free_rank }
    }

    pub fn gens(&self) -> &[GrElement] {
        &self.gens
    }

    /// Canonical generator rows in power-basis coordinates.
    pub fn canon(&self) -> &Matrix<ZqElem> {
        &self.canon
    }

    /// Minimal number of generators; the dimension when the module is free.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_free(&self) -> bool {
        self.free_rank == self.dim
    }

    /// `log_p` of the module's cardinality, read off the canonical pivots.
    pub fn log_p_size(&self, ring: &GaloisRing) -> u32 {
        let zq = ring.base();
        self.canon
            .row_iter()
            .map(|row| {
                let v = row.iter().find_map(|&x| zq.valuation(x)).expect("canonical rows are nonzero");
                zq.r() - v
            })
            .sum()
    }

    pub fn contains(&self, ring: &GaloisRing, v: &GrElement) -> bool {
        let zq = ring.base();
        let mut rest = v.coeffs().to_vec();
        for row in self.canon.row_iter() {
            let c = row.iter().position(|&x| x != ZqElem::ZERO).expect("nonzero row");
            let pivot_val = zq.valuation(row[c]).expect("nonzero pivot");
            match zq.valuation(rest[c]) {
                None => continue,
                Some(w) if w < pivot_val => return false,
                Some(_) => {
                    let k = zq.div_p_power(&rest[c], pivot_val);
                    for j in c..rest.len() {
                        rest[j] = zq.sub(rest[j], zq.mul(k, row[j]));
                    }
                }
            }
        }
        rest.iter().all(|&x| x == ZqElem::ZERO)
    }

    /// `M1 ∩ M2` from the left kernel of the stacked generators `[A; -B]`:
    /// every kernel row `(u | w)` gives `u A = w B` in both modules.
    pub fn intersect(&self, ring: &GaloisRing, other: &Submodule) -> Submodule {
        let zq = ring.base();
        if self.dim == 0 || other.dim == 0 {
            return Submodule::zero(ring);
        }
        let neg_b = other.canon.map(|&x| zq.neg(x));
        let stacked = self.canon.vstack(&neg_b).expect("same column count");
        let kernel = left_kernel(zq, &stacked);
        let a_rows = self.canon.rows();
        let mut rows = Matrix::zeros(zq, 0, ring.degree());
        for k in kernel.row_iter() {
            let u = &k[..a_rows];
            if u.iter().all(|&x| x == ZqElem::ZERO) {
                continue;
            }
            rows.push_row(&self.canon.left_mul_vec(zq, u));
        }
        Submodule::from_coordinate_rows(ring, &rows)
    }

    /// The product module, spanned by all pairwise products of canonical generators.
    pub fn product(&self, ring: &GaloisRing, other: &Submodule) -> Submodule {
        let a: Vec<GrElement> = self.canon.row_iter().map(|r| ring.from_coordinate_row(r)).collect();
        let b: Vec<GrElement> = other.canon.row_iter().map(|r| ring.from_coordinate_row(r)).collect();
        let products: Vec<GrElement> =
            a.iter().flat_map(|x| b.iter().map(move |y| ring.mul(x, y))).collect();
        Submodule::span(ring, &products)
    }

    /// `c * M` for a unit `c`.
    pub fn scale(&self, ring: &GaloisRing, c: &GrElement) -> Result<Submodule> {
        if !ring.is_unit(c) {
            return Err(Error::NonUnit);
        }
        Ok(self.transform(ring, &ring.mul_matrix(c)))
    }

    /// Image under the `R_q`-linear map with the given coordinate matrix
    /// (row vector convention, see [`GaloisRing::mul_matrix`]).
    pub fn transform(&self, ring: &GaloisRing, map: &Matrix<ZqElem>) -> Submodule {
        let rows = self.canon.mul(ring.base(), map).expect("square map");
        Submodule::from_coordinate_rows(ring, &rows)
    }

    /// A basis when the module is free. Reuses the stored generators when they
    /// already are one.
    pub fn basis(&self, ring: &GaloisRing) -> Option<Vec<GrElement>> {
        if !self.is_free() {
            return None;
        }
        if self.gens.len() == self.dim {
            return Some(self.gens.clone());
        }
        // S * canon = D * T^{-1}; its first `dim` rows are unit multiples of a basis
        let res = snf(ring.base(), &self.canon);
        let rows = res.s.mul(ring.base(), &self.canon).expect("compatible");
        Some((0..self.dim).map(|i| ring.from_coordinate_row(rows.row(i))).collect())
    }

    /// Uniform free submodule of dimension `t`, built as `A_i = A_{i-1} + <a_i>`
    /// with each `a_i` uniform among elements that keep the sum free.
    pub fn random_free<R: Rng + ?Sized>(ring: &GaloisRing, t: usize, rng: &mut R) -> Result<Submodule> {
        if t > ring.degree() {
            return Err(Error::PreconditionViolated(format!(
                "free submodule of dimension {t} in extension of degree {}",
                ring.degree()
            )));
        }
        let zq = ring.base();
        let mut basis: Vec<GrElement> = Vec::with_capacity(t);
        let mut coords = Matrix::zeros(zq, 0, ring.degree());
        for i in 0..t {
            let mut accepted = false;
            for _ in 0..SAMPLING_ATTEMPTS {
                let a = ring.random(rng);
                let mut trial = coords.clone();
                trial.push_row(a.coeffs());
                if rank_profile(zq, &trial).1 == i + 1 {
                    coords = trial;
                    basis.push(a);
                    accepted = true;
                    break;
                }
            }
            if !accepted {
                return Err(Error::SamplingExhausted(SAMPLING_ATTEMPTS));
            }
        }
        Ok(Submodule::build(ring, basis, &coords))
    }

    /// Length-`n` vector with support exactly this (free) module and rank and
    /// free rank both equal to its dimension: `e_j = sum_mu B[mu][j] eps_mu`
    /// with `B` uniform among `t x n` matrices of full free rank `t`.
    pub fn random_vector_with_support<R: Rng + ?Sized>(
        &self,
        ring: &GaloisRing,
        n: usize,
        rng: &mut R,
    ) -> Result<Vec<GrElement>> {
        let t = self.dim;
        if t > n {
            return Err(Error::ImpossibleSupport { t, n });
        }
        let basis = self
            .basis(ring)
            .ok_or_else(|| Error::PreconditionViolated("support must be free".into()))?;
        let zq = ring.base();
        let coeffs = sample_full_free_rank(zq, t, n, rng)?;
        Ok(combine_with_basis(ring, &basis, &coeffs))
    }
}

/// Uniform `rows x cols` matrix over `R_q` with free rank `rows`, by rejection.
pub fn sample_full_free_rank<R: Rng + ?Sized>(
    zq: &crate::zq::ChainRingParams,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<Matrix<ZqElem>> {
    for _ in 0..SAMPLING_ATTEMPTS {
        let b = Matrix::from_fn(rows, cols, |_, _| zq.random(rng));
        if rank_profile(zq, &b).1 == rows {
            return Ok(b);
        }
    }
    Err(Error::SamplingExhausted(SAMPLING_ATTEMPTS))
}

/// `e_j = sum_mu coeffs[mu][j] * basis[mu]`.
pub fn combine_with_basis(ring: &GaloisRing, basis: &[GrElement], coeffs: &Matrix<ZqElem>) -> Vec<GrElement> {
    let m = ring.degree();
    (0..coeffs.cols())
        .map(|j| {
            let mut acc = vec![ZqElem::ZERO; m];
            for (mu, eps) in basis.iter().enumerate() {
                ring.add_scaled_into(&mut acc, coeffs[(mu, j)], eps.coeffs());
            }
            ring.from_coordinate_row(&acc)
        })
        .collect()
}
