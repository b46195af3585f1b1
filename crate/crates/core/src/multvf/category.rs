use std::sync::Arc;

use crate::lie2::{ell, lie2algebra_of, vector_field_bracket, LeftInvariantField, Level, Lie2Algebra, MatrixLie2Group};
use crate::matrix_lie::{differential, differential_fn, Coords, LieError, Mat, TangentVector};

use super::field::combine;
use super::{invert, FieldFn, MultVectorField, MultVfError, Samples, VFArrow};

/// The category of multiplicative vector fields on a matrix Lie 2-group,
/// together with its Lie 2-algebra.
#[derive(Clone)]
pub struct FieldCategory {
    pub g: Arc<MatrixLie2Group>,
    pub l: Arc<Lie2Algebra>,
}

/// A section of the Lie algebroid: `zeta(x)` sits at `1_x` and is killed by
/// `Ts`.
#[derive(Clone)]
pub struct AlgebroidSection {
    pub zeta: FieldFn,
}

impl AlgebroidSection {
    /// Largest `|Ts(zeta(x))|` over sampled objects.
    pub fn source_residual(&self, g: &MatrixLie2Group, samples: &Samples) -> Result<f64, LieError> {
        let mut worst: f64 = 0.0;
        for x in &samples.objects {
            worst = worst.max(differential(g.s(), &(self.zeta)(x)?)?.dir.norm());
        }
        Ok(worst)
    }
}

/// Value of `p` at one level.
#[derive(Debug, Clone)]
pub enum PValue {
    Object(MultVectorField),
    Arrow(VFArrow),
}

/// An arrow bracket with the residual of `J(result)` against the bracket of
/// the `J` fields.
#[derive(Debug, Clone)]
pub struct BracketedArrow {
    pub arrow: VFArrow,
    pub residual: f64,
    pub invariance_residual: f64,
}

impl FieldCategory {
    pub fn new(g: MatrixLie2Group) -> Result<Self, MultVfError> {
        let l = lie2algebra_of(&g)?;
        Ok(Self {
            g: Arc::new(g),
            l: Arc::new(l),
        })
    }

    /// `T1(v)` through the Lie map `d1`: `T1(x X) = 1_x d1(X)`.
    pub fn t_unit(&self, v: &TangentVector) -> TangentVector {
        let x = &v.base;
        let (xi, _) = self.g.g0().coordinates(&(invert(x) * &v.dir));
        let image = self.g.g1().algebra_element(&(&self.l.d1 * xi)).expect("dimension");
        let ux = self.g.unit_of(x);
        TangentVector::new(ux.clone(), ux * image)
    }

    /// The field `u` on `G0` lifted to `G1` by `gamma -> T L_gamma T1 u(e0)`.
    pub fn q_object(&self, u: &LeftInvariantField) -> Result<MultVectorField, MultVfError> {
        let e0 = self.g.e0();
        let lifted = differential(self.g.unit(), &u.eval(&e0))?.dir;
        let u0 = u.clone();
        Ok(MultVectorField::new(
            self.g.clone(),
            move |x| Ok(u0.eval(x)),
            move |gamma| Ok(TangentVector::new(gamma.clone(), gamma * &lifted)),
        ))
    }

    /// The arrow `x -> beta(1_x)` from `q(src)` to `q(dst)`. Checks that
    /// `ds` and `dt` of `beta` at the identity match the declared endpoints.
    pub fn q_arrow(
        &self,
        beta: &LeftInvariantField,
        src: &LeftInvariantField,
        dst: &LeftInvariantField,
    ) -> Result<VFArrow, MultVfError> {
        let e1 = self.g.e1();
        let at_e = beta.eval(&e1);
        for (which, map, end) in [("source", self.g.s(), src), ("target", self.g.t(), dst)] {
            let image = differential(map, &at_e)?;
            let (coords, _) = self.g.g0().coordinates(&image.dir);
            let residual = (coords - end.at_identity()).norm();
            if residual > 1e-6 {
                return Err(MultVfError::RelatednessViolation { which, residual });
            }
        }
        let (g, b) = (self.g.clone(), beta.clone());
        Ok(VFArrow::new(self.q_object(src)?, self.q_object(dst)?, move |x| {
            Ok(b.eval(&g.unit_of(x)))
        }))
    }

    pub fn p_object(&self, a: &Coords) -> Result<MultVectorField, MultVfError> {
        self.check_dim(a, self.l.g0_dim)?;
        self.q_object(&ell(&self.l, &self.g, a, Level::Objects)?)
    }

    pub fn p_arrow(&self, c: &Coords) -> Result<VFArrow, MultVfError> {
        self.check_dim(c, self.l.g1_dim)?;
        let beta = ell(&self.l, &self.g, c, Level::Arrows)?;
        let src = ell(&self.l, &self.g, &(&self.l.ds * c), Level::Objects)?;
        let dst = ell(&self.l, &self.g, &(&self.l.dt * c), Level::Objects)?;
        self.q_arrow(&beta, &src, &dst)
    }

    pub fn p(&self, a: &Coords, level: Level) -> Result<PValue, MultVfError> {
        Ok(match level {
            Level::Objects => PValue::Object(self.p_object(a)?),
            Level::Arrows => PValue::Arrow(self.p_arrow(a)?),
        })
    }

    fn check_dim(&self, a: &Coords, expected: usize) -> Result<(), MultVfError> {
        if a.len() != expected {
            return Err(MultVfError::DimensionMismatch { expected, got: a.len() });
        }
        Ok(())
    }

    /// `j(zeta)(gamma) = T L_{gamma 1_{t gamma}^-1} zeta(t gamma)`.
    pub fn j_section(&self, zeta: &AlgebroidSection) -> FieldFn {
        let (g, z) = (self.g.clone(), zeta.zeta.clone());
        Arc::new(move |gamma: &Mat| {
            let t = g.target(gamma);
            let shift = gamma * invert(&g.unit_of(&t));
            Ok(z(&t)?.translate_left(&shift))
        })
    }

    /// `j(zeta)(gamma)` as the differential of `mu -> mu * gamma` at
    /// `1_{t gamma}`, with composition written as `gamma 1_{s(mu)^-1} mu`.
    pub fn j_section_by_definition(&self, zeta: &AlgebroidSection) -> FieldFn {
        let (g, z) = (self.g.clone(), zeta.zeta.clone());
        Arc::new(move |gamma: &Mat| {
            let v = z(&g.target(gamma))?;
            differential_fn(|mu| g.compose_via_multiplication(mu, gamma), &v)
        })
    }

    /// `J(alpha) = j(alpha - 1_{src}) + src_1`.
    pub fn big_j(&self, alpha: &VFArrow) -> FieldFn {
        let this = self.clone();
        let (a, src0, src1) = (alpha.alpha_fn(), alpha.src.v0_fn(), alpha.src.v1_fn());
        let zeta = AlgebroidSection {
            zeta: Arc::new(move |x: &Mat| {
                let unit_part = this.t_unit(&src0(x)?);
                Ok(a(x)?.sub(&unit_part))
            }),
        };
        let j = self.j_section(&zeta);
        Arc::new(move |gamma: &Mat| Ok(j(gamma)?.add(&src1(gamma)?)))
    }

    /// Pointwise bracket of two fields on the same group.
    pub fn bracket_fields(u: FieldFn, v: FieldFn) -> FieldFn {
        Arc::new(move |p: &Mat| vector_field_bracket(|x| u(x), |x| v(x), p))
    }

    /// `([u0, v0], [u1, v1])`.
    pub fn bracket_objects(&self, u: &MultVectorField, v: &MultVectorField) -> MultVectorField {
        MultVectorField::from_fns(
            self.g.clone(),
            Self::bracket_fields(u.v0_fn(), v.v0_fn()),
            Self::bracket_fields(u.v1_fn(), v.v1_fn()),
        )
    }

    /// The arrow whose `J` is `[J(alpha), J(beta)]`, found by evaluating that
    /// bracket at the identity and applying `p`. Only defined when the
    /// bracket field is left-invariant to within `1e-3` on the samples.
    pub fn bracket_arrows(
        &self,
        alpha: &VFArrow,
        beta: &VFArrow,
        samples: &Samples,
    ) -> Result<BracketedArrow, MultVfError> {
        let field = Self::bracket_fields(self.big_j(alpha), self.big_j(beta));
        let e1 = self.g.e1();
        let at_e = field(&e1)?.dir;
        let mut invariance: f64 = 0.0;
        for gamma in &samples.arrows {
            let value = field(gamma)?;
            let expected = gamma * &at_e;
            invariance = invariance.max((&value.dir - &expected).norm() / expected.norm().max(1.0));
        }
        if invariance > 1e-3 {
            return Err(MultVfError::NotInInvariantSubspace { residual: invariance });
        }
        let (coords, _) = self.g.g1().coordinates(&at_e);
        let arrow = self.p_arrow(&coords)?;
        let j_result = self.big_j(&arrow);
        let mut residual: f64 = 0.0;
        for gamma in &samples.arrows {
            residual = residual.max(j_result(gamma)?.distance(&field(gamma)?));
        }
        Ok(BracketedArrow {
            arrow,
            residual,
            invariance_residual: invariance,
        })
    }

    /// `v` with a constant left-translated vector `gamma C` added to `v1`.
    pub fn perturb_v1(&self, v: &MultVectorField, c: &Mat) -> MultVectorField {
        let (v1, c) = (v.v1_fn(), c.clone());
        let extra: FieldFn = Arc::new(move |gamma: &Mat| Ok(TangentVector::new(gamma.clone(), gamma * &c)));
        MultVectorField::from_fns(self.g.clone(), v.v0_fn(), combine(vec![(1.0, v1), (1.0, extra)]))
    }
}
