use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{expm, Coords, LieError, Mat};

/// Residual allowed when expanding a commutator of basis elements.
pub const CLOSURE_TOL: f64 = 1e-9;
/// Residual allowed when expanding `base^-1 dir` in the algebra basis.
pub const TANGENT_TOL: f64 = 1e-7;

/// `ab - ba`.
pub fn commutator(a: &Mat, b: &Mat) -> Mat {
    a * b - b * a
}

/// Which matrices belong to a group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    /// Last row `(0, ..., 0, 1)` and invertible.
    Affine,
    /// `Q^T Q = I` and `det Q = 1`.
    SpecialOrthogonal,
    /// Nonzero determinant.
    Invertible,
    /// Block diagonal with zero off-diagonal blocks.
    BlockDiag { blocks: Vec<BlockSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub size: usize,
    pub membership: Membership,
}

impl Membership {
    /// Zero for members up to rounding; grows with the violation.
    pub fn residual(&self, m: &Mat) -> f64 {
        if !m.is_square() || m.iter().any(|v| !v.is_finite()) {
            return f64::INFINITY;
        }
        let n = m.nrows();
        let singular = |m: &Mat| m.determinant().abs() < 1e-12;
        match self {
            Membership::Affine => {
                if singular(m) {
                    return f64::INFINITY;
                }
                (0..n)
                    .map(|j| (m[(n - 1, j)] - if j == n - 1 { 1.0 } else { 0.0 }).abs())
                    .fold(0.0, f64::max)
            }
            Membership::SpecialOrthogonal => {
                let gram = m.transpose() * m - Mat::identity(n, n);
                gram.amax().max((m.determinant() - 1.0).abs())
            }
            Membership::Invertible => {
                if singular(m) {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Membership::BlockDiag { blocks } => {
                if blocks.iter().map(|b| b.size).sum::<usize>() != n {
                    return f64::INFINITY;
                }
                let mut residual: f64 = 0.0;
                let mut start = 0;
                for b in blocks {
                    let end = start + b.size;
                    for i in start..end {
                        for j in (0..n).filter(|j| !(start..end).contains(j)) {
                            residual = residual.max(m[(i, j)].abs());
                        }
                    }
                    let block = m.view((start, start), (b.size, b.size)).into_owned();
                    residual = residual.max(b.membership.residual(&block));
                    start = end;
                }
                residual
            }
        }
    }
}

/// A matrix Lie group given by a basis of its Lie algebra and a membership
/// predicate.
#[derive(Clone)]
pub struct MatrixLieGroup {
    name: String,
    n: usize,
    basis: Vec<Mat>,
    membership: Membership,
    membership_tol: f64,
    /// Left inverse of the flattened basis, `d x n^2`.
    coord_map: DMatrix<f64>,
    flat_basis: DMatrix<f64>,
    /// `structure[k][(i, j)]` is the `k`-th coordinate of `[b_i, b_j]`.
    structure: Vec<DMatrix<f64>>,
}

impl fmt::Debug for MatrixLieGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixLieGroup")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("dim", &self.basis.len())
            .finish()
    }
}

impl MatrixLieGroup {
    /// Validates independence, commutator closure and membership of `I`.
    pub fn new(
        name: impl Into<String>,
        basis: Vec<Mat>,
        membership: Membership,
        membership_tol: f64,
    ) -> Result<Self, LieError> {
        let n = basis.first().map_or(0, |b| b.nrows());
        if let Some(b) = basis.iter().find(|b| b.nrows() != n || b.ncols() != n) {
            return Err(LieError::DimensionMismatch {
                expected: n,
                got: b.ncols(),
            });
        }
        let d = basis.len();
        let flat_basis = DMatrix::from_fn(n * n, d, |r, c| basis[c][(r / n, r % n)]);
        let svd = flat_basis.clone().svd(true, true);
        let smax = svd.singular_values.max();
        if d > 0 && svd.singular_values.min() <= 1e-10 * smax.max(1.0) {
            return Err(LieError::NotIndependent);
        }
        let coord_map = if d == 0 {
            DMatrix::zeros(0, n * n)
        } else {
            svd.pseudo_inverse(1e-12).map_err(|_| LieError::NotIndependent)?
        };
        let mut group = Self {
            name: name.into(),
            n,
            basis,
            membership,
            membership_tol,
            coord_map,
            flat_basis,
            structure: Vec::new(),
        };
        let mut structure = vec![DMatrix::zeros(d, d); d];
        for i in 0..d {
            for j in 0..d {
                let (c, residual) = group.coordinates(&commutator(&group.basis[i], &group.basis[j]));
                if residual > CLOSURE_TOL {
                    return Err(LieError::NotClosed { i, j, residual });
                }
                for k in 0..d {
                    structure[k][(i, j)] = c[k];
                }
            }
        }
        group.structure = structure;
        let residual = group.membership_residual(&Mat::identity(n, n));
        if residual > membership_tol {
            return Err(LieError::NotMember { residual });
        }
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Matrices are `n x n`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Mat] {
        &self.basis
    }

    pub fn membership(&self) -> &Membership {
        &self.membership
    }

    pub fn membership_tol(&self) -> f64 {
        self.membership_tol
    }

    pub fn identity(&self) -> Mat {
        Mat::identity(self.n, self.n)
    }

    pub fn membership_residual(&self, m: &Mat) -> f64 {
        self.membership.residual(m)
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.membership_residual(m) <= self.membership_tol
    }

    /// Least-squares coordinates of `x` and the residual of the expansion.
    pub fn coordinates(&self, x: &Mat) -> (Coords, f64) {
        let flat = Coords::from_iterator(self.n * self.n, x.transpose().iter().copied());
        let c = &self.coord_map * &flat;
        let residual = (&self.flat_basis * &c - flat).norm();
        (c, residual)
    }

    /// `sum c_i b_i`.
    pub fn algebra_element(&self, c: &Coords) -> Result<Mat, LieError> {
        if c.len() != self.dim() {
            return Err(LieError::DimensionMismatch {
                expected: self.dim(),
                got: c.len(),
            });
        }
        Ok(self
            .basis
            .iter()
            .zip(c.iter())
            .fold(Mat::zeros(self.n, self.n), |acc, (b, &ci)| acc + b * ci))
    }

    /// Structure constants: `structure_constants()[k][(i, j)]` is the
    /// `k`-th coordinate of `[b_i, b_j]`.
    pub fn structure_constants(&self) -> &[DMatrix<f64>] {
        &self.structure
    }

    /// Coordinates of `[a, b]` computed from the structure constants.
    pub fn bracket_coords(&self, a: &Coords, b: &Coords) -> Coords {
        Coords::from_iterator(
            self.dim(),
            self.structure.iter().map(|s| (a.transpose() * s * b)[(0, 0)]),
        )
    }

    /// `exp(sum c_i b_i)` with `c_i` uniform in `[-1, 1]`.
    pub fn sample_with(&self, rng: &mut impl Rng) -> Mat {
        let c = Coords::from_fn(self.dim(), |_, _| rng.random_range(-1.0..=1.0));
        expm(&self.algebra_element(&c).expect("matching dimension")).expect("bounded coefficients")
    }

    /// [`MatrixLieGroup::sample_with`] on a fresh generator seeded by `seed`.
    pub fn sample_element(&self, seed: u64) -> Mat {
        self.sample_with(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Checks that `v.dir` lies in `v.base * g` and returns the residual.
    pub fn tangent_residual(&self, v: &TangentVector) -> Result<f64, LieError> {
        let inv = v.base.clone().try_inverse().ok_or(LieError::NotInvertible)?;
        Ok(self.coordinates(&(inv * &v.dir)).1)
    }

    /// Algebra coordinates of `base^-1 dir`.
    pub fn tangent_coords(&self, v: &TangentVector) -> Result<Coords, LieError> {
        let inv = v.base.clone().try_inverse().ok_or(LieError::NotInvertible)?;
        Ok(self.coordinates(&(inv * &v.dir)).0)
    }
}

/// A tangent vector `dir` at the point `base`, both in ambient matrix
/// coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub base: Mat,
    pub dir: Mat,
}

impl TangentVector {
    pub fn new(base: Mat, dir: Mat) -> Self {
        Self { base, dir }
    }

    pub fn zero(base: Mat) -> Self {
        let (r, c) = base.shape();
        Self {
            base,
            dir: Mat::zeros(r, c),
        }
    }

    /// `(g base, g dir)`, the differential of left multiplication by `g`.
    pub fn translate_left(&self, g: &Mat) -> Self {
        Self {
            base: g * &self.base,
            dir: g * &self.dir,
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            base: self.base.clone(),
            dir: &self.dir * c,
        }
    }

    /// Sum of directions; the bases are assumed equal.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            base: self.base.clone(),
            dir: &self.dir + &other.dir,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            base: self.base.clone(),
            dir: &self.dir - &other.dir,
        }
    }

    /// Frobenius distance of directions plus distance of bases.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.dir - &other.dir).norm() + (&self.base - &other.base).norm()
    }
}

/// A smooth map between matrix groups given by evaluation.
#[derive(Clone)]
pub struct SmoothMap {
    pub dom: Arc<MatrixLieGroup>,
    pub cod: Arc<MatrixLieGroup>,
    eval: Arc<dyn Fn(&Mat) -> Mat + Send + Sync>,
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmoothMap({} -> {})", self.dom.name(), self.cod.name())
    }
}

impl SmoothMap {
    pub fn new(
        dom: Arc<MatrixLieGroup>,
        cod: Arc<MatrixLieGroup>,
        eval: impl Fn(&Mat) -> Mat + Send + Sync + 'static,
    ) -> Self {
        Self {
            dom,
            cod,
            eval: Arc::new(eval),
        }
    }

    pub fn identity(group: Arc<MatrixLieGroup>) -> Self {
        Self::new(group.clone(), group, Mat::clone)
    }

    #[inline]
    pub fn eval(&self, x: &Mat) -> Mat {
        (self.eval)(x)
    }

    /// Largest membership residual of `eval` over `samples` seeded domain
    /// elements.
    pub fn spot_check(&self, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                self.cod
                    .membership_residual(&self.eval(&self.dom.sample_with(&mut rng)))
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize, j: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        m[(i, j)] = 1.0;
        m
    }

    fn affine() -> MatrixLieGroup {
        MatrixLieGroup::new("aff", vec![e(2, 0, 0), e(2, 0, 1)], Membership::Affine, 1e-9).unwrap()
    }

    #[test]
    fn affine_structure_constants() {
        let g = affine();
        // [E00, E01] = E01.
        assert!((g.structure_constants()[1][(0, 1)] - 1.0).abs() < 1e-14);
        assert!((g.structure_constants()[1][(1, 0)] + 1.0).abs() < 1e-14);
        assert!(g.structure_constants()[0].norm() < 1e-14);
    }

    #[test]
    fn dependent_and_unclosed_bases() {
        assert_eq!(
            MatrixLieGroup::new("x", vec![e(2, 0, 1), e(2, 0, 1) * 2.0], Membership::Invertible, 1e-9).unwrap_err(),
            LieError::NotIndependent
        );
        assert!(matches!(
            MatrixLieGroup::new("x", vec![e(2, 0, 1), e(2, 1, 0)], Membership::Invertible, 1e-9),
            Err(LieError::NotClosed { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_in_group() {
        let g = affine();
        assert_eq!(g.sample_element(7), g.sample_element(7));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..64 {
            assert!(g.contains(&g.sample_with(&mut rng)));
        }
        let zero = g.algebra_element(&Coords::zeros(2)).unwrap();
        assert_eq!(expm(&zero).unwrap(), g.identity());
    }

    #[test]
    fn block_membership() {
        let m = Membership::BlockDiag {
            blocks: vec![
                BlockSpec {
                    size: 2,
                    membership: Membership::SpecialOrthogonal,
                },
                BlockSpec {
                    size: 1,
                    membership: Membership::Invertible,
                },
            ],
        };
        assert_eq!(m.residual(&Mat::identity(3, 3)), 0.0);
        let mut off = Mat::identity(3, 3);
        off[(0, 2)] = 0.5;
        assert!(m.residual(&off) >= 0.5);
    }
}
