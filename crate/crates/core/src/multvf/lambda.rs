use std::sync::Arc;

use serde::Serialize;

use crate::matrix_lie::{derivative_at_zero, expm, Coords, LieError, Mat, TangentVector};

use super::field::{combine, star};
use super::{invert, FieldCategory, FieldFn, MultVectorField, MultVfError, Samples, VFArrow};

/// Step used for derivatives in the bisection parameter. Larger than the
/// tangent step so that fields built this way can be differentiated again.
const BISECTION_STEP: f64 = 1e-4;

/// Largest disagreement between the two evaluations of `lambda(gamma) v`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct LambdaRoutes {
    pub samples: usize,
    pub residual: f64,
}

/// Sampled residuals of the homomorphism laws of the representation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct HomomorphismResiduals {
    pub samples: usize,
    /// `lambda(x y) = lambda(x) lambda(y)`.
    pub objects: f64,
    /// `lambda(g2 g1) = lambda(g2) o lambda(g1)`, horizontally.
    pub horizontal: f64,
    /// `lambda(y) a . lambda(gamma) v = lambda(gamma) w . lambda(x) a`.
    pub naturality: f64,
    /// `lambda(gamma) v` is an arrow `lambda(s gamma) v => lambda(t gamma) v`.
    pub endpoints: f64,
}

impl FieldCategory {
    /// `lambda(x) v`: conjugation of `v` by left multiplication.
    pub fn lambda_object(&self, x: &Mat, v: &MultVectorField) -> MultVectorField {
        let (x_inv, ux, ux_inv) = (invert(x), self.g.unit_of(x), self.g.unit_of(&invert(x)));
        let (x0, v0, v1) = (x.clone(), v.v0_fn(), v.v1_fn());
        MultVectorField::new(
            self.g.clone(),
            move |z| Ok(v0(&(&x_inv * z))?.translate_left(&x0)),
            move |sigma| Ok(v1(&(&ux_inv * sigma))?.translate_left(&ux)),
        )
    }

    /// `lambda(x)` on an arrow of fields.
    pub fn lambda_arrow(&self, x: &Mat, alpha: &VFArrow) -> VFArrow {
        let (ux, x_inv, a) = (self.g.unit_of(x), invert(x), alpha.alpha_fn());
        VFArrow::new(
            self.lambda_object(x, &alpha.src),
            self.lambda_object(x, &alpha.dst),
            move |z| Ok(a(&(&x_inv * z))?.translate_left(&ux)),
        )
    }

    /// `lambda(gamma) v` by the closed form `z -> T L_gamma v1(gamma^-1 1_z)`.
    pub fn lambda_morphism(&self, gamma: &Mat, v: &MultVectorField) -> VFArrow {
        let (g, gm, gm_inv, v1) = (self.g.clone(), gamma.clone(), invert(gamma), v.v1_fn());
        VFArrow::new(
            self.lambda_object(&self.g.source(gamma), v),
            self.lambda_object(&self.g.target(gamma), v),
            move |z| Ok(v1(&(&gm_inv * g.unit_of(z)))?.translate_left(&gm)),
        )
    }

    /// `lambda(gamma) v` as the whiskering `(L_gamma v0) * (L_x v1)`, where
    /// `L_gamma` is `a -> gamma 1_a` and `x = s(gamma)`.
    pub fn lambda_morphism_whiskered(&self, gamma: &Mat, v: &MultVectorField) -> VFArrow {
        let (x, y) = (self.g.source(gamma), self.g.target(gamma));
        let (this, gm, gm_inv, y_inv, ux) = (
            self.clone(),
            gamma.clone(),
            invert(gamma),
            invert(&y),
            self.g.unit_of(&x),
        );
        let (v0, v1) = (v.v0_fn(), v.v1_fn());
        VFArrow::new(self.lambda_object(&x, v), self.lambda_object(&y, v), move |z| {
            let outer = this.t_unit(&v0(&(&y_inv * z))?).translate_left(&gm);
            let inner = v1(&(&gm_inv * this.g.unit_of(z)))?.translate_left(&ux);
            star(&this.g, &outer, &inner)
        })
    }

    /// `(max |lambda(x) v - v|, max |lambda(gamma) v - 1_v|)` over the
    /// sample points.
    pub fn invariance_residual(&self, v: &MultVectorField, samples: &Samples) -> Result<(f64, f64), LieError> {
        let mut object: f64 = 0.0;
        for x in &samples.objects {
            let moved = self.lambda_object(x, v);
            object = object.max(moved.distance(v, samples)?);
        }
        let mut morphism: f64 = 0.0;
        for gamma in &samples.arrows {
            let arrow = self.lambda_morphism(gamma, v);
            for z in &samples.objects {
                let unit = self.t_unit(&v.v0(z)?);
                morphism = morphism.max(arrow.alpha(z)?.distance(&unit));
            }
        }
        Ok((object, morphism))
    }

    /// `max |lambda(x) alpha - alpha|` over the sample points.
    pub fn arrow_invariance_residual(&self, alpha: &VFArrow, samples: &Samples) -> Result<f64, LieError> {
        let mut worst: f64 = 0.0;
        for x in &samples.objects {
            worst = worst.max(self.lambda_arrow(x, alpha).distance(alpha, samples)?);
        }
        Ok(worst)
    }

    /// `|v - p(v0(e0))|` over the sample points.
    pub fn reconstruction_residual(&self, v: &MultVectorField, samples: &Samples) -> Result<f64, MultVfError> {
        let (coords, _) = self.g.g0().coordinates(&v.v0(&self.g.e0())?.dir);
        Ok(v.distance(&self.p_object(&coords)?, samples)?)
    }

    /// Compares the closed form of `lambda(gamma) v` with the whiskering.
    pub fn lambda_routes(&self, v: &MultVectorField, samples: &Samples) -> Result<LambdaRoutes, LieError> {
        let mut residual: f64 = 0.0;
        for gamma in &samples.arrows {
            let closed = self.lambda_morphism(gamma, v);
            let whiskered = self.lambda_morphism_whiskered(gamma, v);
            residual = residual.max(closed.distance(&whiskered, samples)?);
        }
        Ok(LambdaRoutes {
            samples: samples.arrows.len(),
            residual,
        })
    }

    /// Checks the homomorphism laws of `lambda` on `v` and an arrow
    /// `alpha: v => w`.
    pub fn lambda_homomorphism(
        &self,
        v: &MultVectorField,
        alpha: &VFArrow,
        samples: &Samples,
    ) -> Result<HomomorphismResiduals, LieError> {
        let g = &self.g;
        let mut r = HomomorphismResiduals {
            samples: samples.pairs.len(),
            ..HomomorphismResiduals::default()
        };
        let n = samples.arrows.len();
        for i in 0..n {
            let (x, y) = (&samples.objects[i], &samples.objects[(i + 1) % n]);
            let lhs = self.lambda_object(&(x * y), v);
            let rhs = self.lambda_object(x, &self.lambda_object(y, v));
            r.objects = r.objects.max(lhs.distance(&rhs, samples)?);

            let (g2, g1) = (&samples.arrows[i], &samples.arrows[(i + 1) % n]);
            let (x2, y1) = (g.source(g2), g.target(g1));
            let lhs = self.lambda_morphism(&(g2 * g1), v);
            let outer = self.lambda_morphism(g2, &self.lambda_object(&y1, v));
            let inner = self.lambda_arrow(&x2, &self.lambda_morphism(g1, v));
            let rhs = VFArrow::vertical(&outer, &inner);
            r.horizontal = r.horizontal.max(lhs.distance(&rhs, samples)?);

            let gamma = g1;
            let (x, y) = (g.source(gamma), g.target(gamma));
            let lhs = VFArrow::vertical(&self.lambda_arrow(&y, alpha), &self.lambda_morphism(gamma, &alpha.src));
            let rhs = VFArrow::vertical(&self.lambda_morphism(gamma, &alpha.dst), &self.lambda_arrow(&x, alpha));
            r.naturality = r.naturality.max(lhs.distance(&rhs, samples)?);

            let arrow = self.lambda_morphism(gamma, v);
            let c = arrow.verify(samples)?;
            r.endpoints = r.endpoints.max(c.base.max(c.source).max(c.target));
        }
        Ok(r)
    }

    /// The multiplicative field generated by conjugating with the bisections
    /// `b_tau(x) = exp(tau f(x) Z) 1_x`, for `Z` in the kernel of `ds` given
    /// by coordinates `kernel`.
    pub fn inner_field(
        &self,
        kernel: &Coords,
        f: impl Fn(&Mat) -> f64 + Send + Sync + 'static,
    ) -> Result<MultVectorField, MultVfError> {
        let z = self.g.g1().algebra_element(kernel)?;
        let f = Arc::new(f);
        let g = self.g.clone();
        let bisection = {
            let (g, f, z) = (g.clone(), f.clone(), z.clone());
            Arc::new(move |tau: f64, x: &Mat| expm(&(&z * (tau * f(x)))).map(|k| k * g.unit_of(x)))
        };
        let v0 = {
            let (g, b) = (g.clone(), bisection.clone());
            move |x: &Mat| {
                let dir = derivative_at_zero(|tau| g.target(&b(tau, x).expect("bounded")), BISECTION_STEP)?;
                Ok(TangentVector::new(x.clone(), dir))
            }
        };
        let v1 = {
            let (g, b) = (g.clone(), bisection);
            move |gamma: &Mat| {
                let (s, t) = (g.source(gamma), g.target(gamma));
                let dir = derivative_at_zero(
                    |tau| {
                        let (bt, bs) = (b(tau, &t).expect("bounded"), b(tau, &s).expect("bounded"));
                        g.compose(&g.compose(&bt, gamma), &g.comp_inverse(&bs))
                    },
                    BISECTION_STEP,
                )?;
                Ok(TangentVector::new(gamma.clone(), dir))
            }
        };
        Ok(MultVectorField::new(g, v0, v1))
    }

    /// `p(a) + eps * inner`, a multiplicative field that is not invariant.
    /// The bisection uses the first kernel direction of `ds` and the
    /// function `f(x) = x[0][0]`.
    pub fn control_field(&self, a: &Coords, eps: f64) -> Result<MultVectorField, MultVfError> {
        let kernel = self
            .l
            .source_kernel
            .first()
            .cloned()
            .ok_or(MultVfError::DimensionMismatch { expected: 1, got: 0 })?;
        let inner = self.inner_field(&kernel, |x| x[(0, 0)])?;
        let base = self.p_object(a)?;
        Ok(MultVectorField::from_fns(
            self.g.clone(),
            combine(vec![(1.0, base.v0_fn()), (eps, inner.v0_fn())]),
            combine(vec![(1.0, base.v1_fn()), (eps, inner.v1_fn())]),
        ))
    }

    /// The unit arrow of a field, for use as an arrow of fields.
    pub fn unit_arrow(&self, v: &MultVectorField) -> VFArrow {
        let (this, v0) = (self.clone(), v.v0_fn());
        VFArrow::from_fn(
            v.clone(),
            v.clone(),
            Arc::new(move |x: &Mat| Ok(this.t_unit(&v0(x)?))) as FieldFn,
        )
    }
}
