use std::sync::Arc;

use crate::matrix_lie::{commutator, differential_fn, Coords, LieError, Mat, MatrixLieGroup, TangentVector};

use super::{Lie2Algebra, Lie2Error, MatrixLie2Group};

/// The left-invariant field `g -> g A` with `A = sum c_i b_i`.
#[derive(Debug, Clone)]
pub struct LeftInvariantField {
    group: Arc<MatrixLieGroup>,
    coords: Coords,
    algebra: Mat,
}

impl LeftInvariantField {
    pub fn new(group: Arc<MatrixLieGroup>, coords: Coords) -> Result<Self, LieError> {
        let algebra = group.algebra_element(&coords)?;
        Ok(Self { group, coords, algebra })
    }

    pub fn eval(&self, g: &Mat) -> TangentVector {
        TangentVector::new(g.clone(), g * &self.algebra)
    }

    /// Coordinates of the value at the identity.
    pub fn at_identity(&self) -> &Coords {
        &self.coords
    }

    pub fn algebra_element(&self) -> &Mat {
        &self.algebra
    }

    pub fn group(&self) -> &Arc<MatrixLieGroup> {
        &self.group
    }
}

/// Level of a Lie 2-algebra element: objects `g0` or arrows `g1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Objects,
    Arrows,
}

/// The left-invariant field on `G0` or `G1` with value `a` at the identity.
pub fn ell(l: &Lie2Algebra, g: &MatrixLie2Group, a: &Coords, level: Level) -> Result<LeftInvariantField, Lie2Error> {
    let (group, dim) = match level {
        Level::Objects => (g.g0(), l.g0_dim),
        Level::Arrows => (g.g1(), l.g1_dim),
    };
    if a.len() != dim {
        return Err(LieError::DimensionMismatch {
            expected: dim,
            got: a.len(),
        }
        .into());
    }
    Ok(LeftInvariantField::new(group.clone(), a.clone())?)
}

/// `[U, V](p) = DV(p)[U(p)] - DU(p)[V(p)]`, each directional derivative
/// taken by central differences along the left-translation curve.
pub fn vector_field_bracket(
    u: impl Fn(&Mat) -> Result<TangentVector, LieError>,
    v: impl Fn(&Mat) -> Result<TangentVector, LieError>,
    p: &Mat,
) -> Result<TangentVector, LieError> {
    let up = u(p)?;
    let vp = v(p)?;
    let dv = differential_fn(
        |x| {
            v(x).map(|t| t.dir)
                .unwrap_or_else(|_| Mat::from_element(1, 1, f64::NAN))
        },
        &up,
    )?;
    let du = differential_fn(
        |x| {
            u(x).map(|t| t.dir)
                .unwrap_or_else(|_| Mat::from_element(1, 1, f64::NAN))
        },
        &vp,
    )?;
    if dv.dir.iter().chain(du.dir.iter()).any(|x| !x.is_finite()) {
        return Err(LieError::NonFinite);
    }
    Ok(TangentVector::new(p.clone(), dv.dir - du.dir))
}

/// Largest difference, over basis pairs, between the finite-difference
/// bracket of left-invariant fields at `e` and the structure constants.
pub fn bracket_oracle_residual(group: &Arc<MatrixLieGroup>) -> Result<f64, LieError> {
    let d = group.dim();
    let e = group.identity();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let (bi, bj) = (group.basis()[i].clone(), group.basis()[j].clone());
            let fd = vector_field_bracket(
                |x: &Mat| Ok(TangentVector::new(x.clone(), x * &bi)),
                |x: &Mat| Ok(TangentVector::new(x.clone(), x * &bj)),
                &e,
            )?;
            let (coords, _) = group.coordinates(&fd.dir);
            let unit = |k: usize| Coords::from_fn(d, |r, _| if r == k { 1.0 } else { 0.0 });
            let expected = group.bracket_coords(&unit(i), &unit(j));
            worst = worst.max((coords - expected).norm());
            let direct = group.coordinates(&commutator(&bi, &bj)).0;
            worst = worst.max((direct - group.bracket_coords(&unit(i), &unit(j))).norm());
        }
    }
    Ok(worst)
}
