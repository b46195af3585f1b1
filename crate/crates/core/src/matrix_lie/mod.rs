//! Matrix Lie groups: exponential, seeded sampling, numerical differentials
//! and the Lie functor on homomorphisms.

mod diff;
mod expm;
mod group;

use thiserror::Error;

pub use diff::{
    derivative_at_zero, differential, differential_binary, differential_fn, lie_functor, reset_richardson_stats,
    richardson_stats, RichardsonStats, FD_STEP, RICHARDSON_TOL,
};
pub use expm::{expm, EXPM_NORM_LIMIT};
pub use group::{
    commutator, BlockSpec, MatrixLieGroup, Membership, SmoothMap, TangentVector, CLOSURE_TOL, TANGENT_TOL,
};

/// Dense real matrix used throughout the numeric modules.
pub type Mat = nalgebra::DMatrix<f64>;
/// Coordinate vector with respect to an algebra basis.
pub type Coords = nalgebra::DVector<f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("matrix exponential overflows (norm {norm:e})")]
    Overflow { norm: f64 },
    #[error("non-finite matrix entries")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("algebra basis is linearly dependent")]
    NotIndependent,
    #[error("commutator of basis elements {i} and {j} leaves the span (residual {residual:e})")]
    NotClosed { i: usize, j: usize, residual: f64 },
    #[error("matrix fails membership (residual {residual:e})")]
    NotMember { residual: f64 },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("tangent direction leaves the left-translated algebra (residual {residual:e})")]
    InvalidTangent { residual: f64 },
    #[error("finite differences at h and h/2 disagree by {discrepancy:e} (scale {scale:e})")]
    NumericalInstability { discrepancy: f64, scale: f64 },
    #[error("not a homomorphism: {reason} (residual {residual:e})")]
    NotHomomorphism { reason: &'static str, residual: f64 },
}
