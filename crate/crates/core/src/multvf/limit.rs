use nalgebra::DMatrix;
use serde::Serialize;

use crate::matrix_lie::Coords;

use super::{FieldCategory, MultVectorField, MultVfError, Samples, VFArrow};

/// Residual above which a basis element counts as not invariant.
pub const EQUIVARIANCE_TOL: f64 = 1e-4;

/// A linear map from a 2-vector space `h1 => h0` into the fields, given on
/// bases.
#[derive(Debug, Clone)]
pub struct TwoVectorSpaceMap {
    pub h0_dim: usize,
    pub h1_dim: usize,
    /// Structure maps of the source: `ds, dt: h1 -> h0`, `d1: h0 -> h1`.
    pub h_ds: DMatrix<f64>,
    pub h_dt: DMatrix<f64>,
    pub h_d1: DMatrix<f64>,
    /// Image of each basis vector of `h0`.
    pub objects: Vec<MultVectorField>,
    /// Image of each basis vector of `h1`.
    pub arrows: Vec<VFArrow>,
}

impl TwoVectorSpaceMap {
    /// Largest sampled defect of `psi` commuting with source, target and
    /// unit.
    pub fn structure_residual(&self, x: &FieldCategory, samples: &Samples) -> Result<f64, MultVfError> {
        let combo = |coeffs: Vec<f64>| {
            let terms: Vec<(f64, MultVectorField)> = coeffs.into_iter().zip(self.objects.iter().cloned()).collect();
            MultVectorField::linear_combination(x.g.clone(), &terms)
        };
        let mut worst: f64 = 0.0;
        for (j, arrow) in self.arrows.iter().enumerate() {
            let src = combo(self.h_ds.column(j).iter().copied().collect());
            let dst = combo(self.h_dt.column(j).iter().copied().collect());
            worst = worst.max(arrow.src.distance(&src, samples)?);
            worst = worst.max(arrow.dst.distance(&dst, samples)?);
        }
        for (i, object) in self.objects.iter().enumerate() {
            let terms: Vec<(f64, VFArrow)> = self
                .h_d1
                .column(i)
                .iter()
                .copied()
                .zip(self.arrows.iter().cloned())
                .collect();
            if terms.is_empty() {
                continue;
            }
            let image = VFArrow::linear_combination(&terms);
            worst = worst.max(image.distance(&x.unit_arrow(object), samples)?);
        }
        Ok(worst)
    }
}

/// The factorization `psi = p . psi_bar` and its certificates.
#[derive(Debug, Clone, Serialize)]
pub struct Factorization {
    /// `g0_dim x h0_dim`.
    pub psi_bar0: Vec<Vec<f64>>,
    /// `g1_dim x h1_dim`.
    pub psi_bar1: Vec<Vec<f64>>,
    pub reconstruction_residual: f64,
    /// Rank of the Gram matrix of `p` evaluated on each basis of `g`.
    pub p_rank0: usize,
    pub p_rank1: usize,
    pub g0_dim: usize,
    pub g1_dim: usize,
    /// Rank of the Gram matrix of `psi` evaluated on each basis of `h`.
    pub psi_rank0: usize,
    pub psi_rank1: usize,
    /// Defect of `psi_bar` commuting with `ds`, `dt` and `d1`.
    pub map_residual: f64,
    pub structure_residual: f64,
    pub equivariance_residual: f64,
}

impl Factorization {
    pub fn unique(&self) -> bool {
        self.p_rank0 == self.g0_dim && self.p_rank1 == self.g1_dim
    }

    pub fn psi_bar0(&self) -> DMatrix<f64> {
        from_rows(&self.psi_bar0)
    }

    pub fn psi_bar1(&self) -> DMatrix<f64> {
        from_rows(&self.psi_bar1)
    }
}

fn from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let ncols = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

fn to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn gram_rank(rows: &[Vec<f64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let m = from_rows(rows);
    let gram = &m * m.transpose();
    let sv = gram.singular_values();
    let top = sv.max();
    sv.iter().filter(|&&s| s > 1e-10 * top.max(1e-300)).count()
}

/// Factors an equivariant `psi` through `p` by evaluating at the identity.
///
/// Every basis image is first checked for invariance under the left-regular
/// representation; the first failure is returned as
/// [`MultVfError::NotEquivariant`].
pub fn limit_factorize(
    x: &FieldCategory,
    psi: &TwoVectorSpaceMap,
    samples: &Samples,
) -> Result<Factorization, MultVfError> {
    if psi.objects.len() != psi.h0_dim || psi.arrows.len() != psi.h1_dim {
        return Err(MultVfError::DimensionMismatch {
            expected: psi.h0_dim + psi.h1_dim,
            got: psi.objects.len() + psi.arrows.len(),
        });
    }
    let mut equivariance: f64 = 0.0;
    for (i, v) in psi.objects.iter().enumerate() {
        let (obj, morph) = x.invariance_residual(v, samples)?;
        let residual = obj.max(morph);
        if residual > EQUIVARIANCE_TOL {
            return Err(MultVfError::NotEquivariant {
                element: format!("object basis vector {i}"),
                residual,
            });
        }
        equivariance = equivariance.max(residual);
    }
    for (j, a) in psi.arrows.iter().enumerate() {
        let residual = x.arrow_invariance_residual(a, samples)?;
        if residual > EQUIVARIANCE_TOL {
            return Err(MultVfError::NotEquivariant {
                element: format!("arrow basis vector {j}"),
                residual,
            });
        }
        equivariance = equivariance.max(residual);
    }

    let (g0, g1) = (x.g.g0(), x.g.g1());
    let (e0, e1) = (x.g.e0(), x.g.e1());
    let mut psi_bar0 = DMatrix::zeros(x.l.g0_dim, psi.h0_dim);
    for (i, v) in psi.objects.iter().enumerate() {
        psi_bar0.set_column(i, &g0.coordinates(&v.v0(&e0)?.dir).0);
    }
    let mut psi_bar1 = DMatrix::zeros(x.l.g1_dim, psi.h1_dim);
    for (j, a) in psi.arrows.iter().enumerate() {
        psi_bar1.set_column(j, &g1.coordinates(&a.alpha(&e0)?.dir).0);
    }
    debug_assert_eq!(e1, x.g.unit_of(&e0));

    let mut reconstruction: f64 = 0.0;
    for (i, v) in psi.objects.iter().enumerate() {
        let rebuilt = x.p_object(&Coords::from(psi_bar0.column(i)))?;
        reconstruction = reconstruction.max(v.distance(&rebuilt, samples)?);
    }
    for (j, a) in psi.arrows.iter().enumerate() {
        let rebuilt = x.p_arrow(&Coords::from(psi_bar1.column(j)))?;
        reconstruction = reconstruction.max(a.distance(&rebuilt, samples)?);
        reconstruction = reconstruction.max(a.src.distance(&rebuilt.src, samples)?);
        reconstruction = reconstruction.max(a.dst.distance(&rebuilt.dst, samples)?);
    }

    let gram_points: Vec<_> = samples.objects.iter().take(8).collect();
    let object_evals = |v: &MultVectorField| -> Result<Vec<f64>, MultVfError> {
        let mut row = Vec::new();
        for z in &gram_points {
            row.extend(v.v0(z)?.dir.iter().copied());
        }
        Ok(row)
    };
    let arrow_evals = |a: &VFArrow| -> Result<Vec<f64>, MultVfError> {
        let mut row = Vec::new();
        for z in &gram_points {
            row.extend(a.alpha(z)?.dir.iter().copied());
        }
        Ok(row)
    };
    let unit = |n: usize, i: usize| Coords::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
    let p_rows0 = (0..x.l.g0_dim)
        .map(|i| object_evals(&x.p_object(&unit(x.l.g0_dim, i))?))
        .collect::<Result<Vec<_>, _>>()?;
    let p_rows1 = (0..x.l.g1_dim)
        .map(|i| arrow_evals(&x.p_arrow(&unit(x.l.g1_dim, i))?))
        .collect::<Result<Vec<_>, _>>()?;
    let psi_rows0 = psi.objects.iter().map(object_evals).collect::<Result<Vec<_>, _>>()?;
    let psi_rows1 = psi.arrows.iter().map(arrow_evals).collect::<Result<Vec<_>, _>>()?;

    let map_residual = [
        (&x.l.ds * &psi_bar1 - &psi_bar0 * &psi.h_ds).norm(),
        (&x.l.dt * &psi_bar1 - &psi_bar0 * &psi.h_dt).norm(),
        (&x.l.d1 * &psi_bar0 - &psi_bar1 * &psi.h_d1).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    Ok(Factorization {
        psi_bar0: to_rows(&psi_bar0),
        psi_bar1: to_rows(&psi_bar1),
        reconstruction_residual: reconstruction,
        p_rank0: gram_rank(&p_rows0),
        p_rank1: gram_rank(&p_rows1),
        g0_dim: x.l.g0_dim,
        g1_dim: x.l.g1_dim,
        psi_rank0: gram_rank(&psi_rows0),
        psi_rank1: gram_rank(&psi_rows1),
        map_residual,
        structure_residual: psi.structure_residual(x, samples)?,
        equivariance_residual: equivariance,
    })
}
