use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::matrix_lie::{differential_binary, lie_functor, Coords, Mat, TangentVector};

use super::{Lie2Error, MatrixLie2Group};

/// The strict Lie 2-algebra `g1 => g0` of a matrix Lie 2-group.
#[derive(Debug, Clone)]
pub struct Lie2Algebra {
    pub g0_dim: usize,
    pub g1_dim: usize,
    /// `bracket0[k][(i, j)]` is the `k`-th coordinate of `[b_i, b_j]` in `g0`.
    pub bracket0: Vec<DMatrix<f64>>,
    pub bracket1: Vec<DMatrix<f64>>,
    pub ds: DMatrix<f64>,
    pub dt: DMatrix<f64>,
    pub d1: DMatrix<f64>,
    /// Basis of `ker ds`, one coordinate vector per element.
    pub source_kernel: Vec<Coords>,
    /// Pairs `(alpha, beta)` with `ds alpha = dt beta` spanning the matched
    /// subspace.
    pub matched_basis: Vec<(Coords, Coords)>,
    /// `alpha (*) beta` for each element of `matched_basis`, from the
    /// differential of composition at the identities.
    pub circledast_images: Vec<Coords>,
    matched_solve: DMatrix<f64>,
}

/// Differentiates every structure map of `g` at the identities.
pub fn lie2algebra_of(g: &MatrixLie2Group) -> Result<Lie2Algebra, Lie2Error> {
    let ds = lie_functor(g.s())?;
    let dt = lie_functor(g.t())?;
    let d1 = lie_functor(g.unit())?;
    let (g0_dim, g1_dim) = (g.g0().dim(), g.g1().dim());
    let id0 = DMatrix::<f64>::identity(g0_dim, g0_dim);
    for (law, m) in [("ds d1 = id", &ds), ("dt d1 = id", &dt)] {
        let residual = (m * &d1 - &id0).norm();
        if residual > 1e-8 {
            return Err(Lie2Error::Invariant { law, residual });
        }
    }

    let eig = SymmetricEigen::new(ds.transpose() * &ds);
    let source_kernel: Vec<Coords> = (0..g1_dim)
        .filter(|&i| eig.eigenvalues[i].abs() < 1e-8)
        .map(|i| Coords::from(eig.eigenvectors.column(i)))
        .collect();

    let mut matched_basis: Vec<(Coords, Coords)> = (0..g1_dim)
        .map(|j| {
            let beta = Coords::from_fn(g1_dim, |i, _| if i == j { 1.0 } else { 0.0 });
            (&d1 * (&dt * &beta), beta)
        })
        .collect();
    matched_basis.extend(source_kernel.iter().map(|k| (k.clone(), Coords::zeros(g1_dim))));

    let g1 = g.g1();
    let e1 = g.e1();
    let mut circledast_images = Vec::with_capacity(matched_basis.len());
    for (alpha, beta) in &matched_basis {
        let va = TangentVector::new(e1.clone(), g1.algebra_element(alpha)?);
        let vb = TangentVector::new(e1.clone(), g1.algebra_element(beta)?);
        let out = differential_binary(|a, b| g.compose(a, b), &va, &vb)?;
        circledast_images.push(g1.coordinates(&out.dir).0);
    }

    let stacked = DMatrix::from_fn(2 * g1_dim, matched_basis.len(), |r, c| {
        let (a, b) = &matched_basis[c];
        if r < g1_dim {
            a[r]
        } else {
            b[r - g1_dim]
        }
    });
    let matched_solve = stacked
        .pseudo_inverse(1e-10)
        .map_err(|_| Lie2Error::Model("matched basis is degenerate"))?;

    Ok(Lie2Algebra {
        g0_dim,
        g1_dim,
        bracket0: g.g0().structure_constants().to_vec(),
        bracket1: g1.structure_constants().to_vec(),
        ds,
        dt,
        d1,
        source_kernel,
        matched_basis,
        circledast_images,
        matched_solve,
    })
}

fn bracket(constants: &[DMatrix<f64>], a: &Coords, b: &Coords) -> Coords {
    Coords::from_iterator(
        constants.len(),
        constants.iter().map(|c| (a.transpose() * c * b)[(0, 0)]),
    )
}

impl Lie2Algebra {
    pub fn bracket0(&self, a: &Coords, b: &Coords) -> Coords {
        bracket(&self.bracket0, a, b)
    }

    pub fn bracket1(&self, a: &Coords, b: &Coords) -> Coords {
        bracket(&self.bracket1, a, b)
    }

    /// `alpha (*) beta` for `ds alpha = dt beta`, by expanding the pair in
    /// the matched basis.
    pub fn circledast(&self, alpha: &Coords, beta: &Coords) -> Result<Coords, Lie2Error> {
        let residual = (&self.ds * alpha - &self.dt * beta).norm();
        if residual > 1e-8 {
            return Err(Lie2Error::NotMatched { residual });
        }
        let stacked = Coords::from_iterator(2 * self.g1_dim, alpha.iter().chain(beta.iter()).copied());
        let c = &self.matched_solve * stacked;
        Ok(self
            .circledast_images
            .iter()
            .zip(c.iter())
            .fold(Coords::zeros(self.g1_dim), |acc, (img, &ci)| acc + img * ci))
    }

    /// Largest bracket defect of `ds`, `dt` and `d1` on basis pairs.
    pub fn structure_map_bracket_residual(&self) -> f64 {
        let unit = |n: usize, i: usize| Coords::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 });
        let mut worst: f64 = 0.0;
        for i in 0..self.g1_dim {
            for j in 0..self.g1_dim {
                let (a, b) = (unit(self.g1_dim, i), unit(self.g1_dim, j));
                let ab = self.bracket1(&a, &b);
                for m in [&self.ds, &self.dt] {
                    let lhs = m * &ab;
                    let rhs = self.bracket0(&(m * &a), &(m * &b));
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        for i in 0..self.g0_dim {
            for j in 0..self.g0_dim {
                let (a, b) = (unit(self.g0_dim, i), unit(self.g0_dim, j));
                let lhs = &self.d1 * self.bracket0(&a, &b);
                let rhs = self.bracket1(&(&self.d1 * &a), &(&self.d1 * &b));
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }

    /// Largest deviation of `ds d1` and `dt d1` from the identity.
    pub fn unit_section_residual(&self) -> f64 {
        let id = DMatrix::<f64>::identity(self.g0_dim, self.g0_dim);
        (&self.ds * &self.d1 - &id)
            .norm()
            .max((&self.dt * &self.d1 - id).norm())
    }

    /// Structure-constant document for export.
    pub fn to_document(&self, fixture: &str, tolerances: DocumentTolerances) -> StructureDocument {
        let tensor = |t: &[DMatrix<f64>]| {
            t.iter()
                .map(|m| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect())
                .collect()
        };
        let rows = |m: &DMatrix<f64>| (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
        StructureDocument {
            fixture: fixture.to_string(),
            g0_dim: self.g0_dim,
            g1_dim: self.g1_dim,
            bracket0: tensor(&self.bracket0),
            bracket1: tensor(&self.bracket1),
            ds: rows(&self.ds),
            dt: rows(&self.dt),
            d1: rows(&self.d1),
            tolerances,
        }
    }
}

/// Tolerances recorded alongside exported structure constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DocumentTolerances {
    pub finite_difference_step: f64,
    pub richardson_relative: f64,
    pub closure: f64,
}

/// The serialized form of a [`Lie2Algebra`]. Tensors are indexed
/// `[k][i][j]`, matrices by rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureDocument {
    pub fixture: String,
    pub g0_dim: usize,
    pub g1_dim: usize,
    pub bracket0: Vec<Vec<Vec<f64>>>,
    pub bracket1: Vec<Vec<Vec<f64>>>,
    pub ds: Vec<Vec<f64>>,
    pub dt: Vec<Vec<f64>>,
    pub d1: Vec<Vec<f64>>,
    pub tolerances: DocumentTolerances,
}

/// Largest `|alpha (*) beta - (alpha + beta - d1 ds alpha)|` over the
/// matched basis, plus the unit pairs `(d1 u, d1 u)` for basis `u` of `g0`.
pub fn circledast_identity_check(l: &Lie2Algebra) -> f64 {
    let expected = |a: &Coords, b: &Coords| a + b - &l.d1 * (&l.ds * a);
    let mut worst: f64 = 0.0;
    for ((a, b), img) in l.matched_basis.iter().zip(&l.circledast_images) {
        worst = worst.max((img - expected(a, b)).norm());
    }
    for i in 0..l.g0_dim {
        let u = &l.d1 * Coords::from_fn(l.g0_dim, |r, _| if r == i { 1.0 } else { 0.0 });
        let out = l.circledast(&u, &u).expect("unit pairs are matched");
        worst = worst.max((out - &u).norm());
    }
    worst
}

/// `Tm(a (*) b, c (*) d)` against `Tm(a, c) (*) Tm(b, d)` over pairs of
/// matched basis elements, with `Tm` the numerical differential of
/// multiplication at `(e1, e1)`.
pub fn algebra_interchange_residual(l: &Lie2Algebra, g: &MatrixLie2Group) -> Result<f64, Lie2Error> {
    let g1 = g.g1();
    let e1 = g.e1();
    let tm = |x: &Coords, y: &Coords| -> Result<Coords, Lie2Error> {
        let vx = TangentVector::new(e1.clone(), g1.algebra_element(x)?);
        let vy = TangentVector::new(e1.clone(), g1.algebra_element(y)?);
        let out = differential_binary(|a: &Mat, b: &Mat| a * b, &vx, &vy)?;
        Ok(g1.coordinates(&out.dir).0)
    };
    let mut worst: f64 = 0.0;
    for (a, b) in &l.matched_basis {
        for (c, d) in &l.matched_basis {
            let lhs = tm(&l.circledast(a, b)?, &l.circledast(c, d)?)?;
            let rhs = l.circledast(&tm(a, c)?, &tm(b, d)?)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}
