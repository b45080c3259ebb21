//! LRPC codes: the low-rank space `F = <f_1, ..., f_lambda>`, a parity-check
//! matrix `H` with entries in `F`, and the expanded matrix `Hext` whose row
//! `(i, l)` holds the `F`-coordinates `h_{i,j,l}` of row `i` of `H`.

use std::fmt::Write as _;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::galois::{GaloisRing, GrElement};
use crate::linalg::{rank, rank_profile, snf, solve_unique, solve_unique_columns};
use crate::matrix::Matrix;
use crate::ring::ChainRing;
use crate::submodule::{Submodule, SAMPLING_ATTEMPTS};
use crate::zq::{ChainRingParams, ZqElem};

/// Whole-matrix resampling budget in [`LrpcCode::generate`].
pub const GENERATION_ATTEMPTS: usize = 64;

pub const FORMAT_HEADER: &str = "lrpc-code v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParams {
    pub p: u64,
    pub r: u32,
    pub m: usize,
    pub lambda: usize,
    pub n: usize,
    pub k: usize,
    /// Modulus coefficients, constant term first; random when absent.
    pub modulus: Option<Vec<u64>>,
    pub seed: u64,
}

impl CodeParams {
    pub fn validate(&self) -> Result<()> {
        if !(0 < self.k && self.k < self.n) {
            return Err(Error::PreconditionViolated(format!(
                "need 0 < k < n, got k = {}, n = {}",
                self.k, self.n
            )));
        }
        if self.lambda == 0 || self.lambda > self.m {
            return Err(Error::PreconditionViolated(format!(
                "need 1 <= lambda <= m, got lambda = {}, m = {}",
                self.lambda, self.m
            )));
        }
        if self.lambda * (self.n - self.k) < self.n {
            return Err(Error::PreconditionViolated(format!(
                "unique decoding needs lambda >= n/(n-k), got {} * {} < {}",
                self.lambda,
                self.n - self.k,
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PropertyFlags {
    pub unique_decoding: bool,
    pub max_row_span: bool,
    pub unity: bool,
}

#[derive(Debug)]
pub struct LrpcCode {
    ring: GaloisRing,
    lambda: usize,
    n: usize,
    k: usize,
    f: Vec<GrElement>,
    f_space: Submodule,
    f_mul: Vec<Matrix<ZqElem>>,
    f_inv_mul: Vec<Matrix<ZqElem>>,
    h: Matrix<GrElement>,
    hext: Matrix<ZqElem>,
    hext_left_inverse: Option<Matrix<ZqElem>>,
    flags: PropertyFlags,
    generator: OnceLock<Result<Matrix<GrElement>>>,
}

/// Solves `H_{i,j} = sum_l h_{i,j,l} f_l` for every entry and lays the
/// coefficients out as in `Hext`: row `i * lambda + l`, column `j`.
pub fn build_hext(ring: &GaloisRing, h: &Matrix<GrElement>, f: &[GrElement]) -> Result<Matrix<ZqElem>> {
    let zq = ring.base();
    let lambda = f.len();
    let (rows, n) = (h.rows(), h.cols());
    let f_coords_t = ring.coordinate_rows(f).transpose();
    let targets = ring.ext_gamma(h.entries());
    let solved = match solve_unique_columns(zq, &f_coords_t, &targets) {
        Ok(x) => x,
        Err(Error::Inconsistent) => {
            for i in 0..rows {
                for j in 0..n {
                    if let Err(Error::Inconsistent) = solve_unique(zq, &f_coords_t, h[(i, j)].coeffs()) {
                        return Err(Error::EntryOutsideF(i, j));
                    }
                }
            }
            unreachable!("some entry is inconsistent")
        }
        Err(e) => return Err(e),
    };
    Ok(Matrix::from_fn(rows * lambda, n, |row, j| solved[(row % lambda, (row / lambda) * n + j)]))
}

/// `lambda (n-k) >= n` and `Hext` has rank and free rank `n`.
pub fn hext_unique_decoding(zq: &ChainRingParams, hext: &Matrix<ZqElem>) -> bool {
    let n = hext.cols();
    hext.rows() >= n && rank_profile(zq, hext) == (n, n)
}

/// Every row of `H` spans `F`: each `lambda x n` block of `Hext` has free rank `lambda`.
pub fn hext_max_row_span(zq: &ChainRingParams, hext: &Matrix<ZqElem>, lambda: usize) -> bool {
    (0..hext.rows() / lambda).all(|i| {
        let block = hext.select_rows(i * lambda..(i + 1) * lambda);
        rank_profile(zq, &block).1 == lambda
    })
}

pub fn hext_unity(zq: &ChainRingParams, hext: &Matrix<ZqElem>) -> bool {
    hext.entries().iter().all(|&c| c == ZqElem::ZERO || zq.is_unit(c))
}

/// `H` from its `F`-coordinates.
fn assemble_h(ring: &GaloisRing, hext: &Matrix<ZqElem>, f: &[GrElement]) -> Matrix<GrElement> {
    let lambda = f.len();
    let m = ring.degree();
    Matrix::from_fn(hext.rows() / lambda, hext.cols(), |i, j| {
        let mut acc = vec![ZqElem::ZERO; m];
        for (l, fl) in f.iter().enumerate() {
            ring.add_scaled_into(&mut acc, hext[(i * lambda + l, j)], fl.coeffs());
        }
        ring.from_coordinate_row(&acc)
    })
}

impl LrpcCode {
    /// Builds a code from an explicit low-rank basis and parity-check matrix,
    /// checking the conditions of an LRPC code. The decoding properties are
    /// recorded in [`PropertyFlags`] rather than enforced.
    pub fn from_parts(ring: GaloisRing, f: Vec<GrElement>, h: Matrix<GrElement>) -> Result<Self> {
        let hext = build_hext(&ring, &h, &f)?;
        Self::assemble(ring, f, h, hext)
    }

    /// Builds a code from `F`-coordinates laid out as in `Hext`.
    pub fn from_coefficients(ring: GaloisRing, f: Vec<GrElement>, hext: Matrix<ZqElem>) -> Result<Self> {
        if f.is_empty() || hext.rows() % f.len() != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} coefficient rows for lambda = {}",
                hext.rows(),
                f.len()
            )));
        }
        let h = assemble_h(&ring, &hext, &f);
        Self::assemble(ring, f, h, hext)
    }

    fn assemble(ring: GaloisRing, f: Vec<GrElement>, h: Matrix<GrElement>, hext: Matrix<ZqElem>) -> Result<Self> {
        let zq = ring.base().clone();
        let lambda = f.len();
        let (rows, n) = (h.rows(), h.cols());
        if rows == 0 || rows >= n {
            return Err(Error::PreconditionViolated(format!("need 0 < k < n, got {rows} checks on length {n}")));
        }
        if f.iter().any(|x| x.coeffs().len() != ring.degree()) {
            return Err(Error::DimensionMismatch("basis element of wrong length".into()));
        }
        let f_space = Submodule::span(&ring, &f);
        if f_space.free_rank() != lambda || f_space.dim() != lambda {
            return Err(Error::PreconditionViolated("f is not a free basis".into()));
        }
        if Submodule::span(&ring, h.entries()) != f_space {
            return Err(Error::PreconditionViolated("entries of H do not span F".into()));
        }
        if rank(&ring, &h) != rows {
            return Err(Error::PreconditionViolated("H does not have full rank".into()));
        }
        let f_inv = f.iter().map(|x| ring.inverse(x)).collect::<Result<Vec<_>>>()?;
        let flags = PropertyFlags {
            unique_decoding: hext_unique_decoding(&zq, &hext),
            max_row_span: hext_max_row_span(&zq, &hext, lambda),
            unity: hext_unity(&zq, &hext),
        };
        // S Hext T = [I; 0] gives the left inverse T * S[..n]
        let hext_left_inverse = flags.unique_decoding.then(|| {
            let res = snf(&zq, &hext);
            res.t.mul(&zq, &res.s.select_rows(0..n)).expect("compatible")
        });
        Ok(Self {
            f_mul: f.iter().map(|x| ring.mul_matrix(x)).collect(),
            f_inv_mul: f_inv.iter().map(|x| ring.mul_matrix(x)).collect(),
            ring,
            lambda,
            n,
            k: n - rows,
            f,
            f_space,
            h,
            hext,
            hext_left_inverse,
            flags,
            generator: OnceLock::new(),
        })
    }

    /// Random code with all three decoding properties.
    pub fn generate(params: &CodeParams) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        Self::generate_with_rng(params, &mut rng)
    }

    pub fn generate_with_rng<R: Rng + ?Sized>(params: &CodeParams, rng: &mut R) -> Result<Self> {
        params.validate()?;
        let ring = GaloisRing::make(params.p, params.r, params.m, params.modulus.as_deref(), rng)?;
        let zq = ring.base().clone();
        let (lambda, n, rows) = (params.lambda, params.n, params.n - params.k);
        let f = Submodule::random_free(&ring, lambda, rng)?
            .basis(&ring)
            .expect("random free submodule has a basis");
        for _ in 0..GENERATION_ATTEMPTS {
            let mut hext = Matrix::zeros(&zq, 0, n);
            for _ in 0..rows {
                let block = sample_row_block(&zq, lambda, n, rng)?;
                for row in block.row_iter() {
                    hext.push_row(row);
                }
            }
            if !hext_unique_decoding(&zq, &hext) {
                continue;
            }
            match Self::from_coefficients(ring.clone(), f.clone(), hext) {
                Ok(code) => return Ok(code),
                Err(Error::PreconditionViolated(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::GenerationTimeout(GENERATION_ATTEMPTS))
    }

    /// The matrix of Remark 2: `f_1` on the diagonal of the first `n-k-1`
    /// rows, and a last row carrying `f_2, ..., f_lambda` from column `n-k-1` on.
    /// Its syndromes span at most `t + 1` dimensions.
    pub fn degenerate_row_span(ring: GaloisRing, f: Vec<GrElement>, n: usize, k: usize) -> Result<Self> {
        let lambda = f.len();
        if lambda < 2 || !(0 < k && k < n) || k + 1 < lambda - 1 {
            return Err(Error::PreconditionViolated("need lambda >= 2, 0 < k < n and room for f_2..f_lambda".into()));
        }
        let rows = n - k;
        let h = Matrix::from_fn(rows, n, |i, j| {
            if i + 1 < rows {
                if i == j {
                    f[0].clone()
                } else {
                    ring.zero()
                }
            } else if j + 1 >= rows {
                f[1 + (j + 1 - rows) % (lambda - 1)].clone()
            } else {
                ring.zero()
            }
        });
        Self::from_parts(ring, f, h)
    }

    pub fn ring(&self) -> &GaloisRing {
        &self.ring
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn f(&self) -> &[GrElement] {
        &self.f
    }

    pub fn f_space(&self) -> &Submodule {
        &self.f_space
    }

    /// Coordinate matrix of multiplication by `f_l^{-1}`.
    pub fn f_inv_mul(&self, l: usize) -> &Matrix<ZqElem> {
        &self.f_inv_mul[l]
    }

    pub fn h(&self) -> &Matrix<GrElement> {
        &self.h
    }

    pub fn hext(&self) -> &Matrix<ZqElem> {
        &self.hext
    }

    /// `h_{i,j,l}`.
    pub fn h_coeff(&self, i: usize, j: usize, l: usize) -> ZqElem {
        self.hext[(i * self.lambda + l, j)]
    }

    /// `L` with `L * Hext = I_n`, present when the code has unique decoding.
    pub fn hext_left_inverse(&self) -> Option<&Matrix<ZqElem>> {
        self.hext_left_inverse.as_ref()
    }

    pub fn flags(&self) -> PropertyFlags {
        self.flags
    }

    pub fn check_unique_decoding(&self) -> bool {
        self.flags.unique_decoding
    }

    pub fn check_max_row_span(&self) -> bool {
        self.flags.max_row_span
    }

    pub fn check_unity(&self) -> bool {
        self.flags.unity
    }

    /// `s = y H^T`, computed through `F`: `s_i = sum_l f_l * (sum_j h_{i,j,l} y_j)`.
    pub fn syndrome(&self, y: &[GrElement]) -> Vec<GrElement> {
        assert_eq!(y.len(), self.n, "received word has wrong length");
        let m = self.ring.degree();
        let zq = self.ring.base();
        let mut w = vec![ZqElem::ZERO; m];
        (0..self.n - self.k)
            .map(|i| {
                let mut s = vec![ZqElem::ZERO; m];
                for l in 0..self.lambda {
                    w.fill(ZqElem::ZERO);
                    for (j, yj) in y.iter().enumerate() {
                        self.ring.add_scaled_into(&mut w, self.h_coeff(i, j, l), yj.coeffs());
                    }
                    let fw = self.f_mul[l].left_mul_vec(zq, &w);
                    for (o, x) in s.iter_mut().zip(fw) {
                        *o = zq.add(*o, x);
                    }
                }
                self.ring.from_coordinate_row(&s)
            })
            .collect()
    }

    /// `y H^T` by direct multiplication in the Galois ring.
    pub fn syndrome_direct(&self, y: &[GrElement]) -> Vec<GrElement> {
        self.h.mul_vec(&self.ring, y)
    }

    /// A `k x n` generator matrix: the rows of `S` past the rank in a Smith
    /// form `S H^T T = D` over the Galois ring. Requires every pivot to be a
    /// unit, so that the kernel of `H` is free of rank `k`.
    pub fn generator_matrix(&self) -> Result<&Matrix<GrElement>> {
        self.generator
            .get_or_init(|| {
                let res = snf(&self.ring, &self.h.transpose());
                let rows = self.n - self.k;
                let pivots_are_units = (0..rows).all(|i| res.d[(i, i)] == self.ring.one());
                if !pivots_are_units {
                    return Err(Error::KernelRankMismatch);
                }
                Ok(res.s.select_rows(rows..self.n))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn encode(&self, u: &[GrElement]) -> Result<Vec<GrElement>> {
        if u.len() != self.k {
            return Err(Error::DimensionMismatch(format!("message of length {} for k = {}", u.len(), self.k)));
        }
        Ok(self.generator_matrix()?.left_mul_vec(&self.ring, u))
    }

    pub fn to_text(&self) -> String {
        let zq = self.ring.base();
        let join = |xs: &[ZqElem]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let mut out = String::new();
        writeln!(out, "{FORMAT_HEADER}").unwrap();
        writeln!(out, "p {}", zq.p()).unwrap();
        writeln!(out, "r {}", zq.r()).unwrap();
        writeln!(out, "m {}", self.ring.degree()).unwrap();
        writeln!(out, "lambda {}", self.lambda).unwrap();
        writeln!(out, "n {}", self.n).unwrap();
        writeln!(out, "k {}", self.k).unwrap();
        writeln!(out, "modulus {}", join(self.ring.modulus())).unwrap();
        for fl in &self.f {
            writeln!(out, "f {}", join(fl.coeffs())).unwrap();
        }
        for i in 0..self.n - self.k {
            let row: Vec<ZqElem> =
                (0..self.n).flat_map(|j| (0..self.lambda).map(move |l| (j, l))).map(|(j, l)| self.h_coeff(i, j, l)).collect();
            writeln!(out, "h {}", join(&row)).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, FORMAT_HEADER)) => {}
            Some((line, _)) => return Err(Error::Parse { line, msg: format!("expected header '{FORMAT_HEADER}'") }),
            None => return Err(Error::Parse { line: 1, msg: "empty input".into() }),
        }
        let mut scalars = std::collections::HashMap::new();
        let mut modulus = None;
        let mut f_rows: Vec<Vec<u64>> = Vec::new();
        let mut h_rows: Vec<(usize, Vec<u64>)> = Vec::new();
        for (line, content) in lines {
            let mut parts = content.split_whitespace();
            let key = parts.next().unwrap_or_default();
            let values = parts
                .map(|v| v.parse::<u64>().map_err(|_| Error::Parse { line, msg: format!("not an integer: {v}") }))
                .collect::<Result<Vec<u64>>>()?;
            match key {
                "p" | "r" | "m" | "lambda" | "n" | "k" => {
                    let [v] = values[..] else {
                        return Err(Error::Parse { line, msg: format!("{key} takes one value") });
                    };
                    scalars.insert(key, v);
                }
                "modulus" => modulus = Some(values),
                "f" => f_rows.push(values),
                "h" => h_rows.push((line, values)),
                _ => return Err(Error::Parse { line, msg: format!("unknown key '{key}'") }),
            }
        }
        let get = |key: &str| {
            scalars.get(key).copied().ok_or_else(|| Error::Parse { line: 0, msg: format!("missing '{key}'") })
        };
        let (p, r, m, lambda, n, k) = (get("p")?, get("r")?, get("m")? as usize, get("lambda")? as usize, get("n")? as usize, get("k")? as usize);
        let modulus = modulus.ok_or_else(|| Error::Parse { line: 0, msg: "missing 'modulus'".into() })?;
        let zq = ChainRingParams::new(p, r as u32)?;
        let ring = GaloisRing::with_modulus(zq.clone(), m, &modulus)?;
        if f_rows.len() != lambda {
            return Err(Error::Parse { line: 0, msg: format!("expected {lambda} 'f' lines, found {}", f_rows.len()) });
        }
        let f = f_rows
            .iter()
            .map(|c| if c.len() == m { Ok(ring.from_u64s(c)) } else { Err(Error::DimensionMismatch("f line length".into())) })
            .collect::<Result<Vec<_>>>()?;
        if h_rows.len() + k != n {
            return Err(Error::Parse { line: 0, msg: format!("expected {} 'h' lines, found {}", n.saturating_sub(k), h_rows.len()) });
        }
        let mut hext = Matrix::zeros(&zq, h_rows.len() * lambda, n);
        for (i, (line, values)) in h_rows.iter().enumerate() {
            if values.len() != n * lambda {
                return Err(Error::Parse { line: *line, msg: format!("expected {} coefficients", n * lambda) });
            }
            for j in 0..n {
                for l in 0..lambda {
                    hext[(i * lambda + l, j)] = zq.elem(values[j * lambda + l]);
                }
            }
        }
        Self::from_coefficients(ring, f, hext)
    }
}

/// `lambda x n` block of coefficients from `R_q^* ∪ {0}` with free rank `lambda`.
fn sample_row_block<R: Rng + ?Sized>(zq: &ChainRingParams, lambda: usize, n: usize, rng: &mut R) -> Result<Matrix<ZqElem>> {
    for _ in 0..SAMPLING_ATTEMPTS {
        let block = Matrix::from_fn(lambda, n, |_, _| zq.random_unit_or_zero(rng));
        if rank_profile(zq, &block).1 == lambda {
            return Ok(block);
        }
    }
    Err(Error::SamplingExhausted(SAMPLING_ATTEMPTS))
}
