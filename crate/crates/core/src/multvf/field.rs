use std::sync::Arc;

use serde::Serialize;

use crate::lie2::MatrixLie2Group;
use crate::matrix_lie::{differential, differential_binary, LieError, Mat, TangentVector};

use super::{FieldFn, Samples};

/// An object of the category of multiplicative vector fields: a field `v0`
/// on `G0` and a field `v1` on `G1`.
#[derive(Clone)]
pub struct MultVectorField {
    pub g: Arc<MatrixLie2Group>,
    v0: FieldFn,
    v1: FieldFn,
}

impl std::fmt::Debug for MultVectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MultVectorField({})", self.g.name())
    }
}

impl MultVectorField {
    pub fn new(
        g: Arc<MatrixLie2Group>,
        v0: impl Fn(&Mat) -> Result<TangentVector, LieError> + Send + Sync + 'static,
        v1: impl Fn(&Mat) -> Result<TangentVector, LieError> + Send + Sync + 'static,
    ) -> Self {
        Self {
            g,
            v0: Arc::new(v0),
            v1: Arc::new(v1),
        }
    }

    pub fn from_fns(g: Arc<MatrixLie2Group>, v0: FieldFn, v1: FieldFn) -> Self {
        Self { g, v0, v1 }
    }

    pub fn zero(g: Arc<MatrixLie2Group>) -> Self {
        Self::new(
            g,
            |x| Ok(TangentVector::zero(x.clone())),
            |x| Ok(TangentVector::zero(x.clone())),
        )
    }

    pub fn v0(&self, x: &Mat) -> Result<TangentVector, LieError> {
        (self.v0)(x)
    }

    pub fn v1(&self, gamma: &Mat) -> Result<TangentVector, LieError> {
        (self.v1)(gamma)
    }

    pub fn v0_fn(&self) -> FieldFn {
        self.v0.clone()
    }

    pub fn v1_fn(&self) -> FieldFn {
        self.v1.clone()
    }

    /// `sum c_i f_i`, evaluated pointwise.
    pub fn linear_combination(g: Arc<MatrixLie2Group>, terms: &[(f64, MultVectorField)]) -> Self {
        let terms0: Vec<(f64, FieldFn)> = terms.iter().map(|(c, f)| (*c, f.v0.clone())).collect();
        let terms1: Vec<(f64, FieldFn)> = terms.iter().map(|(c, f)| (*c, f.v1.clone())).collect();
        Self::from_fns(g, combine(terms0), combine(terms1))
    }

    /// Largest pointwise distance to `other` over the sample points.
    pub fn distance(&self, other: &Self, samples: &Samples) -> Result<f64, LieError> {
        let mut worst: f64 = 0.0;
        for x in &samples.objects {
            worst = worst.max(self.v0(x)?.distance(&other.v0(x)?));
        }
        for a in &samples.arrows {
            worst = worst.max(self.v1(a)?.distance(&other.v1(a)?));
        }
        Ok(worst)
    }

    /// Sampled residuals of the section, relatedness and functoriality laws.
    /// Source and target maps and composition are differentiated
    /// numerically.
    pub fn verify_multiplicative(&self, samples: &Samples) -> Result<MultCertificate, LieError> {
        let g = &self.g;
        let mut c = MultCertificate {
            samples: samples.pairs.len(),
            ..MultCertificate::default()
        };
        for x in &samples.objects {
            let v = self.v0(x)?;
            c.section = c.section.max((&v.base - x).norm());
            let unit_image = differential(g.unit(), &v)?;
            c.unit = c.unit.max(self.v1(&g.unit_of(x))?.distance(&unit_image));
        }
        for gamma in &samples.arrows {
            let v = self.v1(gamma)?;
            c.section = c.section.max((&v.base - gamma).norm());
            c.source = c
                .source
                .max(differential(g.s(), &v)?.distance(&self.v0(&g.source(gamma))?));
            c.target = c
                .target
                .max(differential(g.t(), &v)?.distance(&self.v0(&g.target(gamma))?));
        }
        for (sigma, gamma) in &samples.pairs {
            let lhs = self.v1(&g.compose(sigma, gamma))?;
            let rhs = star(g, &self.v1(sigma)?, &self.v1(gamma)?)?;
            c.functoriality = c.functoriality.max(lhs.distance(&rhs));
        }
        Ok(c)
    }
}

/// `a * b` on tangent vectors: the differential of composition.
pub fn star(g: &MatrixLie2Group, a: &TangentVector, b: &TangentVector) -> Result<TangentVector, LieError> {
    differential_binary(|x, y| g.compose(x, y), a, b)
}

pub(crate) fn combine(terms: Vec<(f64, FieldFn)>) -> FieldFn {
    Arc::new(move |x: &Mat| {
        let mut out: Option<TangentVector> = None;
        for (c, f) in &terms {
            let term = f(x)?.scale(*c);
            out = Some(match out {
                Some(acc) => acc.add(&term),
                None => term,
            });
        }
        Ok(out.unwrap_or_else(|| TangentVector::zero(x.clone())))
    })
}

/// Largest residuals from [`MultVectorField::verify_multiplicative`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct MultCertificate {
    pub samples: usize,
    pub section: f64,
    pub source: f64,
    pub target: f64,
    pub unit: f64,
    pub functoriality: f64,
}

impl MultCertificate {
    pub fn max_residual(&self) -> f64 {
        [self.section, self.source, self.target, self.unit, self.functoriality]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// An arrow `src => dst` of multiplicative vector fields: `alpha(x)` is a
/// tangent vector at the unit arrow `1_x`.
#[derive(Clone)]
pub struct VFArrow {
    pub src: MultVectorField,
    pub dst: MultVectorField,
    alpha: FieldFn,
}

impl std::fmt::Debug for VFArrow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VFArrow({})", self.src.g.name())
    }
}

impl VFArrow {
    pub fn new(
        src: MultVectorField,
        dst: MultVectorField,
        alpha: impl Fn(&Mat) -> Result<TangentVector, LieError> + Send + Sync + 'static,
    ) -> Self {
        Self {
            src,
            dst,
            alpha: Arc::new(alpha),
        }
    }

    pub fn from_fn(src: MultVectorField, dst: MultVectorField, alpha: FieldFn) -> Self {
        Self { src, dst, alpha }
    }

    pub fn alpha(&self, x: &Mat) -> Result<TangentVector, LieError> {
        (self.alpha)(x)
    }

    pub fn alpha_fn(&self) -> FieldFn {
        self.alpha.clone()
    }

    /// The identity arrow `x -> T1(v0(x))`.
    pub fn unit(v: &MultVectorField) -> Self {
        let g = v.g.clone();
        let v0 = v.v0_fn();
        Self::new(v.clone(), v.clone(), move |x| differential(g.unit(), &v0(x)?))
    }

    pub fn linear_combination(terms: &[(f64, VFArrow)]) -> Self {
        let g = terms[0].1.src.g.clone();
        let src = MultVectorField::linear_combination(
            g.clone(),
            &terms.iter().map(|(c, a)| (*c, a.src.clone())).collect::<Vec<_>>(),
        );
        let dst = MultVectorField::linear_combination(
            g.clone(),
            &terms.iter().map(|(c, a)| (*c, a.dst.clone())).collect::<Vec<_>>(),
        );
        let fns: Vec<(f64, FieldFn)> = terms.iter().map(|(c, a)| (*c, a.alpha.clone())).collect();
        Self::from_fn(src, dst, combine(fns))
    }

    /// `(beta . alpha)(x) = beta(x) * alpha(x)`.
    pub fn vertical(beta: &VFArrow, alpha: &VFArrow) -> Self {
        let g = alpha.src.g.clone();
        let (b, a) = (beta.alpha.clone(), alpha.alpha.clone());
        Self::new(alpha.src.clone(), beta.dst.clone(), move |x| star(&g, &b(x)?, &a(x)?))
    }

    /// Largest pointwise distance between components over sampled objects.
    pub fn distance(&self, other: &Self, samples: &Samples) -> Result<f64, LieError> {
        let mut worst: f64 = 0.0;
        for x in &samples.objects {
            worst = worst.max(self.alpha(x)?.distance(&other.alpha(x)?));
        }
        Ok(worst)
    }

    /// Sampled residuals of the base, source/target and naturality laws.
    pub fn verify(&self, samples: &Samples) -> Result<ArrowCertificate, LieError> {
        let g = &self.src.g;
        let mut c = ArrowCertificate {
            samples: samples.arrows.len(),
            ..ArrowCertificate::default()
        };
        for x in &samples.objects {
            let a = self.alpha(x)?;
            c.base = c.base.max((&a.base - g.unit_of(x)).norm());
            c.source = c.source.max(differential(g.s(), &a)?.distance(&self.src.v0(x)?));
            c.target = c.target.max(differential(g.t(), &a)?.distance(&self.dst.v0(x)?));
        }
        for gamma in &samples.arrows {
            let lhs = star(g, &self.alpha(&g.target(gamma))?, &self.src.v1(gamma)?)?;
            let rhs = star(g, &self.dst.v1(gamma)?, &self.alpha(&g.source(gamma))?)?;
            c.naturality = c.naturality.max(lhs.distance(&rhs));
        }
        Ok(c)
    }
}

/// Largest residuals from [`VFArrow::verify`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct ArrowCertificate {
    pub samples: usize,
    pub base: f64,
    pub source: f64,
    pub target: f64,
    pub naturality: f64,
}

impl ArrowCertificate {
    pub fn max_residual(&self) -> f64 {
        [self.base, self.source, self.target, self.naturality]
            .into_iter()
            .fold(0.0, f64::max)
    }
}
