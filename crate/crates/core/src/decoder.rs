//! The basic LRPC decoder: syndrome space, support recovery by intersecting
//! the spaces `f_l^{-1} S`, and erasure decoding on the recovered support.

use crate::code::LrpcCode;
use crate::error::{Error, Result};
use crate::galois::GrElement;
use crate::linalg::{solve_unique, solve_unique_columns};
use crate::matrix::Matrix;
use crate::ring::ChainRing;
use crate::submodule::{combine_with_basis, Submodule};
use crate::zq::ZqElem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FailureReason {
    SyndromeDim,
    SupportDim,
    ProductDim,
    ErasureInconsistent,
}

/// Observed module sizes; later stages are `None` when decoding stopped earlier.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub syndrome_dim: usize,
    pub syndrome_free_rank: usize,
    pub support_dim: Option<usize>,
    pub product_dim: Option<usize>,
    pub product_free_rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    Success { codeword: Vec<GrElement>, error: Vec<GrElement> },
    Failure(FailureReason),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub diagnostics: Diagnostics,
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self.status, DecodeStatus::Success { .. })
    }

    pub fn reason(&self) -> Option<FailureReason> {
        match self.status {
            DecodeStatus::Failure(reason) => Some(reason),
            DecodeStatus::Success { .. } => None,
        }
    }

    pub fn codeword(&self) -> Option<&[GrElement]> {
        match &self.status {
            DecodeStatus::Success { codeword, .. } => Some(codeword),
            DecodeStatus::Failure(_) => None,
        }
    }

    fn failure(reason: FailureReason, diagnostics: Diagnostics) -> Self {
        Self { status: DecodeStatus::Failure(reason), diagnostics }
    }
}

/// How the error is recovered once its support is known.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ErasureMethod {
    /// Coordinates of each syndrome in the basis `{eps_mu f_l}` of `E F`,
    /// then the left inverse of `Hext`.
    #[default]
    ProductBasis,
    /// All `m (n-k)` coordinate equations in the `t n` unknowns at once.
    GammaExpansion,
}

/// Which of the three sufficient conditions for decoding hold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Conditions {
    /// `E F` is free of dimension `lambda t`.
    pub product: bool,
    /// The syndrome space is free of dimension `lambda t`.
    pub syndrome: bool,
    /// `∩_l f_l^{-1} S` has dimension `t`.
    pub intersection: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.product && self.syndrome && self.intersection
    }
}

/// `∩_l f_l^{-1} S`.
pub fn recover_support(code: &LrpcCode, s: &Submodule) -> Submodule {
    let ring = code.ring();
    let mut acc = s.transform(ring, code.f_inv_mul(0));
    for l in 1..code.lambda() {
        if acc.dim() == 0 {
            break;
        }
        acc = acc.intersect(ring, &s.transform(ring, code.f_inv_mul(l)));
    }
    acc
}

fn support_basis(code: &LrpcCode, support: &Submodule) -> Result<Vec<GrElement>> {
    support
        .basis(code.ring())
        .ok_or_else(|| Error::PreconditionViolated("support is not free".into()))
}

/// Coordinates of `eps_mu * f_l`, row `mu * lambda + l`.
fn product_rows(code: &LrpcCode, basis: &[GrElement]) -> Matrix<ZqElem> {
    let ring = code.ring();
    let products: Vec<GrElement> =
        basis.iter().flat_map(|eps| code.f().iter().map(move |fl| ring.mul(eps, fl))).collect();
    ring.coordinate_rows(&products)
}

fn verified(code: &LrpcCode, e: Vec<GrElement>, s: &[GrElement]) -> Result<Vec<GrElement>> {
    if code.syndrome(&e) == s {
        Ok(e)
    } else {
        Err(Error::ErasureInconsistent)
    }
}

fn check_syndrome_length(code: &LrpcCode, s: &[GrElement]) -> Result<()> {
    if s.len() != code.n() - code.k() {
        return Err(Error::DimensionMismatch(format!(
            "syndrome of length {} for {} checks",
            s.len(),
            code.n() - code.k()
        )));
    }
    Ok(())
}

/// The unique `e` with support in the free module `support` and `e H^T = s`,
/// from the coordinate expansion `s_i = sum_j H_{i,j} sum_mu B_{mu,j} eps_mu`.
pub fn erasure_decode(code: &LrpcCode, support: &Submodule, s: &[GrElement]) -> Result<Vec<GrElement>> {
    check_syndrome_length(code, s)?;
    let ring = code.ring();
    let zq = ring.base();
    let (m, n, lambda) = (ring.degree(), code.n(), code.lambda());
    let checks = n - code.k();
    let basis = support_basis(code, support)?;
    let t = basis.len();
    let products = product_rows(code, &basis);
    let mut a = Matrix::zeros(zq, checks * m, t * n);
    for i in 0..checks {
        for j in 0..n {
            for mu in 0..t {
                // coordinates of H_{i,j} eps_mu = sum_l h_{i,j,l} (f_l eps_mu)
                for l in 0..lambda {
                    let h = code.h_coeff(i, j, l);
                    if h == ZqElem::ZERO {
                        continue;
                    }
                    for (c, &x) in products.row(mu * lambda + l).iter().enumerate() {
                        let entry = &mut a[(i * m + c, mu * n + j)];
                        *entry = zq.add(*entry, zq.mul(h, x));
                    }
                }
            }
        }
    }
    let y: Vec<ZqElem> = s.iter().flat_map(|si| si.coeffs().iter().copied()).collect();
    let b = match solve_unique(zq, &a, &y) {
        Ok(b) => b,
        Err(Error::Inconsistent) => return Err(Error::ErasureInconsistent),
        Err(e) => return Err(e),
    };
    let coeffs = Matrix::from_vec(t, n, b)?;
    verified(code, combine_with_basis(ring, &basis, &coeffs), s)
}

/// Same contract as [`erasure_decode`], solved through a basis of `E F`:
/// writing `s_i = sum c_{(i,l),mu} eps_mu f_l`, column `mu` of the
/// coefficients satisfies `Hext B_mu = c_mu`.
pub fn erasure_decode_product_basis(code: &LrpcCode, support: &Submodule, s: &[GrElement]) -> Result<Vec<GrElement>> {
    check_syndrome_length(code, s)?;
    let ring = code.ring();
    let zq = ring.base();
    let (n, lambda) = (code.n(), code.lambda());
    let checks = n - code.k();
    let left = code
        .hext_left_inverse()
        .ok_or_else(|| Error::PreconditionViolated("code lacks the unique-decoding property".into()))?;
    let basis = support_basis(code, support)?;
    let t = basis.len();
    if t == 0 {
        return verified(code, vec![ring.zero(); n], s);
    }
    let products_t = product_rows(code, &basis).transpose();
    let c = match solve_unique_columns(zq, &products_t, &ring.ext_gamma(s)) {
        Ok(c) => c,
        Err(Error::Inconsistent) => return Err(Error::ErasureInconsistent),
        Err(e) => return Err(e),
    };
    let mut coeffs = Matrix::zeros(zq, t, n);
    let mut c_mu = vec![ZqElem::ZERO; checks * lambda];
    for mu in 0..t {
        for i in 0..checks {
            for l in 0..lambda {
                c_mu[i * lambda + l] = c[(mu * lambda + l, i)];
            }
        }
        coeffs.row_mut(mu).copy_from_slice(&left.mul_vec(zq, &c_mu));
    }
    verified(code, combine_with_basis(ring, &basis, &coeffs), s)
}

/// Evaluates the three conditions for an error with free support `support`
/// and syndrome `s`.
pub fn check_conditions(code: &LrpcCode, support: &Submodule, s: &[GrElement]) -> Conditions {
    let ring = code.ring();
    let syndrome_space = Submodule::span(ring, s);
    let recovered = recover_support(code, &syndrome_space);
    let product_space = support.product(ring, code.f_space());
    conditions_from(code, support.dim(), &syndrome_space, &recovered, &product_space)
}

fn conditions_from(code: &LrpcCode, t: usize, syndrome: &Submodule, recovered: &Submodule, product: &Submodule) -> Conditions {
    let target = code.lambda() * t;
    let free_of = |module: &Submodule, d: usize| module.free_rank() == d && module.dim() == d;
    Conditions {
        product: free_of(product, target),
        syndrome: free_of(syndrome, target),
        intersection: recovered.dim() == t,
    }
}

pub fn decode(code: &LrpcCode, r: &[GrElement], t: usize) -> Result<DecodeOutcome> {
    decode_with(code, r, t, ErasureMethod::default())
}

pub fn decode_with(code: &LrpcCode, r: &[GrElement], t: usize, method: ErasureMethod) -> Result<DecodeOutcome> {
    check_inputs(code, r, t)?;
    let ring = code.ring();
    let s = code.syndrome(r);
    let syndrome_space = Submodule::span(ring, &s);
    Ok(run(code, r, t, &s, &syndrome_space, None, method).0)
}

/// Decodes and evaluates the conditions for a known support in one pass,
/// sharing the syndrome and intersection computations.
pub fn decode_and_check(
    code: &LrpcCode,
    r: &[GrElement],
    t: usize,
    support: &Submodule,
    method: ErasureMethod,
) -> Result<(DecodeOutcome, Conditions)> {
    check_inputs(code, r, t)?;
    let ring = code.ring();
    let s = code.syndrome(r);
    let syndrome_space = Submodule::span(ring, &s);
    let product_space = support.product(ring, code.f_space());
    let (outcome, recovered) = run(code, r, t, &s, &syndrome_space, Some((support, &product_space)), method);
    let recovered = recovered.unwrap_or_else(|| recover_support(code, &syndrome_space));
    let conditions = conditions_from(code, support.dim(), &syndrome_space, &recovered, &product_space);
    Ok((outcome, conditions))
}

fn check_inputs(code: &LrpcCode, r: &[GrElement], t: usize) -> Result<()> {
    if r.len() != code.n() {
        return Err(Error::PreconditionViolated(format!(
            "received word of length {} for a code of length {}",
            r.len(),
            code.n()
        )));
    }
    if code.lambda() * t > code.ring().degree() {
        return Err(Error::PreconditionViolated(format!(
            "lambda * t = {} exceeds m = {}",
            code.lambda() * t,
            code.ring().degree()
        )));
    }
    Ok(())
}

/// Algorithm body. `known` carries a support and its product space that may
/// be reused when the recovered support coincides with it.
fn run(
    code: &LrpcCode,
    r: &[GrElement],
    t: usize,
    s: &[GrElement],
    syndrome_space: &Submodule,
    known: Option<(&Submodule, &Submodule)>,
    method: ErasureMethod,
) -> (DecodeOutcome, Option<Submodule>) {
    let ring = code.ring();
    let target = code.lambda() * t;
    let mut diagnostics = Diagnostics {
        syndrome_dim: syndrome_space.dim(),
        syndrome_free_rank: syndrome_space.free_rank(),
        ..Diagnostics::default()
    };
    if syndrome_space.free_rank() < target || !syndrome_space.is_free() {
        return (DecodeOutcome::failure(FailureReason::SyndromeDim, diagnostics), None);
    }
    let recovered = recover_support(code, syndrome_space);
    diagnostics.support_dim = Some(recovered.dim());
    if recovered.dim() > t {
        return (DecodeOutcome::failure(FailureReason::SupportDim, diagnostics), Some(recovered));
    }
    let product_space = match known {
        Some((support, product)) if *support == recovered => product.clone(),
        _ => recovered.product(ring, code.f_space()),
    };
    diagnostics.product_dim = Some(product_space.dim());
    diagnostics.product_free_rank = Some(product_space.free_rank());
    if product_space.free_rank() < target {
        return (DecodeOutcome::failure(FailureReason::ProductDim, diagnostics), Some(recovered));
    }
    let erased = match method {
        ErasureMethod::ProductBasis => erasure_decode_product_basis(code, &recovered, s),
        ErasureMethod::GammaExpansion => erasure_decode(code, &recovered, s),
    };
    let outcome = match erased {
        Ok(error) => {
            let codeword = r.iter().zip(&error).map(|(a, b)| ring.sub(a, b)).collect();
            DecodeOutcome { status: DecodeStatus::Success { codeword, error }, diagnostics }
        }
        Err(_) => DecodeOutcome::failure(FailureReason::ErasureInconsistent, diagnostics),
    };
    (outcome, Some(recovered))
}
