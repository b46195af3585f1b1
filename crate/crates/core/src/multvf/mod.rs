//! Multiplicative vector fields on a matrix Lie 2-group: the category they
//! form, the maps `j`, `J`, `q` and `p`, brackets, the left-regular
//! representation and the fixed-point factorization.
//!
//! Fields are evaluable closures. Every law is checked at seeded sample
//! points and reported as a maximum residual.

mod category;
mod field;
mod lambda;
mod limit;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::lie2::{Lie2Error, MatrixLie2Group};
use crate::matrix_lie::{LieError, Mat, TangentVector};

pub use category::{AlgebroidSection, BracketedArrow, FieldCategory, PValue};
pub use field::{ArrowCertificate, MultCertificate, MultVectorField, VFArrow};
pub use lambda::{HomomorphismResiduals, LambdaRoutes};
pub use limit::{limit_factorize, Factorization, TwoVectorSpaceMap};

/// A vector field given by evaluation.
pub type FieldFn = Arc<dyn Fn(&Mat) -> Result<TangentVector, LieError> + Send + Sync>;

/// Default number of composable pairs sampled per law.
pub const DEFAULT_PAIR_SAMPLES: usize = 64;
/// Default number of group elements sampled per law.
pub const DEFAULT_ELEMENT_SAMPLES: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MultVfError {
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Lie2(#[from] Lie2Error),
    #[error("arrow is not {which}-related to its declared endpoint (residual {residual:e})")]
    RelatednessViolation { which: &'static str, residual: f64 },
    #[error("bracket field is not left-invariant (residual {residual:e})")]
    NotInInvariantSubspace { residual: f64 },
    #[error("{element} is not invariant under the left-regular representation (residual {residual:e})")]
    NotEquivariant { element: String, residual: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Seeded sample points shared by the checks.
#[derive(Debug, Clone)]
pub struct Samples {
    pub objects: Vec<Mat>,
    pub arrows: Vec<Mat>,
    /// Composable pairs `(sigma, gamma)`.
    pub pairs: Vec<(Mat, Mat)>,
}

impl Samples {
    pub fn draw(g: &MatrixLie2Group, n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let objects = (0..n).map(|_| g.sample_object(&mut rng)).collect();
        let arrows = (0..n).map(|_| g.sample_arrow(&mut rng)).collect();
        let pairs = (0..n).map(|_| g.sample_composable(&mut rng)).collect();
        Self { objects, arrows, pairs }
    }
}

fn invert(m: &Mat) -> Mat {
    m.clone().try_inverse().expect("group elements are invertible")
}
