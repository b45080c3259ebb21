//! Low-rank parity-check codes over Galois rings.
//!
//! The layers build on each other: [`zq`] and [`galois`] provide the chain
//! ring `Z/p^r` and its extension `R_{q,m}`; [`linalg`] does Smith forms,
//! kernels and solving over any [`ring::ChainRing`]; [`submodule`] keeps
//! `R_q`-submodules of `R_{q,m}` in canonical form; [`code`] and [`decoder`]
//! implement the codes and their decoder; [`bounds`] evaluates the analytic
//! failure bounds in floating point or exactly.

pub mod bounds;
pub mod code;
pub mod decoder;
pub mod error;
pub(crate) mod fp_poly;
pub mod galois;
pub mod linalg;
pub mod matrix;
pub mod ring;
pub mod submodule;
pub mod zq;

use num_rational::BigRational;

pub use bounds::{BoundInputs, BoundScalar, BoundSet};
pub use code::{CodeParams, LrpcCode, PropertyFlags};
pub use decoder::{decode, Conditions, DecodeOutcome, DecodeStatus, ErasureMethod, FailureReason};
pub use error::{Error, Result};
pub use galois::{GaloisRing, GrElement};
pub use matrix::Matrix;
pub use ring::ChainRing;
pub use submodule::Submodule;
pub use zq::{ChainRingParams, ZqElem};

pub type Zq = ChainRingParams;
pub type ZqMatrix = Matrix<ZqElem>;
pub type GrMatrix = Matrix<GrElement>;

pub type Bounds = BoundSet<f64>;
pub type BoundsF32 = BoundSet<f32>;
pub type ExactBounds = BoundSet<BigRational>;
