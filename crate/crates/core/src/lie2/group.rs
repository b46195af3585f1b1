use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::matrix_lie::{BlockSpec, Mat, MatrixLieGroup, Membership, SmoothMap};

use super::Lie2Error;

/// How a crossed module of matrix groups `(H, G)` is realized as block
/// matrices `diag(., .)` of size `n_H + n_G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlockModel {
    /// `H = G`, boundary the identity, `G` acting by conjugation. The pair
    /// `(h, g)` is stored as `diag(h g, g)`.
    Inner,
    /// Trivial action, stored as `diag(h, g)`. Needs abelian groups when the
    /// boundary is the identity.
    Direct { boundary: Boundary },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Identity,
    Trivial,
}

/// A strict matrix Lie 2-group `G1 = H x| G => G` in a block model.
///
/// Composition is the closed formula `(h2, _) * (h1, g) = (h2 h1, g)`, which
/// is defined for all pairs; it agrees with categorical composition on
/// composable pairs.
#[derive(Debug, Clone)]
pub struct MatrixLie2Group {
    name: String,
    model: BlockModel,
    h: Arc<MatrixLieGroup>,
    g0: Arc<MatrixLieGroup>,
    g1: Arc<MatrixLieGroup>,
    s: SmoothMap,
    t: SmoothMap,
    unit: SmoothMap,
}

fn block_diag(a: &Mat, b: &Mat) -> Mat {
    let (na, nb) = (a.nrows(), b.nrows());
    let mut m = Mat::zeros(na + nb, na + nb);
    m.view_mut((0, 0), (na, na)).copy_from(a);
    m.view_mut((na, na), (nb, nb)).copy_from(b);
    m
}

fn invert(m: &Mat) -> Mat {
    m.clone().try_inverse().expect("group elements are invertible")
}

impl MatrixLie2Group {
    pub fn new(
        name: impl Into<String>,
        h: Arc<MatrixLieGroup>,
        g: Arc<MatrixLieGroup>,
        model: BlockModel,
    ) -> Result<Self, Lie2Error> {
        let same = h.n() == g.n() && h.dim() == g.dim();
        let needs_same = matches!(
            model,
            BlockModel::Inner
                | BlockModel::Direct {
                    boundary: Boundary::Identity
                }
        );
        if needs_same && !same {
            return Err(Lie2Error::Model("the boundary needs H and G to coincide"));
        }
        let (nh, ng) = (h.n(), g.n());
        let mut basis: Vec<Mat> = h.basis().iter().map(|b| block_diag(b, &Mat::zeros(ng, ng))).collect();
        basis.extend(g.basis().iter().map(|b| block_diag(&Mat::zeros(nh, nh), b)));
        let membership = Membership::BlockDiag {
            blocks: vec![
                BlockSpec {
                    size: nh,
                    membership: h.membership().clone(),
                },
                BlockSpec {
                    size: ng,
                    membership: g.membership().clone(),
                },
            ],
        };
        let tol = h.membership_tol().max(g.membership_tol());
        let g1 = Arc::new(MatrixLieGroup::new(format!("{}_1", g.name()), basis, membership, tol)?);
        let upper = move |m: &Mat| m.view((0, 0), (nh, nh)).into_owned();
        let lower = move |m: &Mat| m.view((nh, nh), (ng, ng)).into_owned();
        let s = SmoothMap::new(g1.clone(), g.clone(), lower);
        let t = match model {
            BlockModel::Inner => SmoothMap::new(g1.clone(), g.clone(), upper),
            BlockModel::Direct {
                boundary: Boundary::Identity,
            } => SmoothMap::new(g1.clone(), g.clone(), move |m| upper(m) * lower(m)),
            BlockModel::Direct {
                boundary: Boundary::Trivial,
            } => SmoothMap::new(g1.clone(), g.clone(), lower),
        };
        let unit = match model {
            BlockModel::Inner => SmoothMap::new(g.clone(), g1.clone(), |x| block_diag(x, x)),
            BlockModel::Direct { .. } => {
                SmoothMap::new(g.clone(), g1.clone(), move |x| block_diag(&Mat::identity(nh, nh), x))
            }
        };
        Ok(Self {
            name: name.into(),
            model,
            h,
            g0: g,
            g1,
            s,
            t,
            unit,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn model(&self) -> BlockModel {
        self.model
    }

    pub fn h(&self) -> &Arc<MatrixLieGroup> {
        &self.h
    }

    pub fn g0(&self) -> &Arc<MatrixLieGroup> {
        &self.g0
    }

    pub fn g1(&self) -> &Arc<MatrixLieGroup> {
        &self.g1
    }

    pub fn s(&self) -> &SmoothMap {
        &self.s
    }

    pub fn t(&self) -> &SmoothMap {
        &self.t
    }

    pub fn unit(&self) -> &SmoothMap {
        &self.unit
    }

    pub fn e0(&self) -> Mat {
        self.g0.identity()
    }

    pub fn e1(&self) -> Mat {
        self.g1.identity()
    }

    pub fn source(&self, m: &Mat) -> Mat {
        self.s.eval(m)
    }

    pub fn target(&self, m: &Mat) -> Mat {
        self.t.eval(m)
    }

    pub fn unit_of(&self, x: &Mat) -> Mat {
        self.unit.eval(x)
    }

    /// The block matrix of the pair `(h, g)`.
    pub fn encode(&self, h: &Mat, g: &Mat) -> Mat {
        match self.model {
            BlockModel::Inner => block_diag(&(h * g), g),
            BlockModel::Direct { .. } => block_diag(h, g),
        }
    }

    /// Inverse of [`MatrixLie2Group::encode`].
    pub fn decode(&self, m: &Mat) -> (Mat, Mat) {
        let nh = self.h.n();
        let upper = m.view((0, 0), (nh, nh)).into_owned();
        let g = self.source(m);
        match self.model {
            BlockModel::Inner => (upper * invert(&g), g),
            BlockModel::Direct { .. } => (upper, g),
        }
    }

    /// `sigma * gamma` by the closed formula `(h_sigma h_gamma, g_gamma)`.
    pub fn compose(&self, sigma: &Mat, gamma: &Mat) -> Mat {
        let (hs, _) = self.decode(sigma);
        let (hg, g) = self.decode(gamma);
        self.encode(&(hs * hg), &g)
    }

    /// `gamma 1_{s(sigma)^-1} sigma`, which equals `sigma * gamma` on
    /// composable pairs.
    pub fn compose_via_multiplication(&self, sigma: &Mat, gamma: &Mat) -> Mat {
        gamma * self.unit_of(&invert(&self.source(sigma))) * sigma
    }

    /// The inverse of `gamma` for composition: `1_{s} gamma^-1 1_{t}`.
    pub fn comp_inverse(&self, gamma: &Mat) -> Mat {
        self.unit_of(&self.source(gamma)) * invert(gamma) * self.unit_of(&self.target(gamma))
    }

    pub fn sample_object(&self, rng: &mut impl Rng) -> Mat {
        self.g0.sample_with(rng)
    }

    pub fn sample_arrow(&self, rng: &mut impl Rng) -> Mat {
        self.g1.sample_with(rng)
    }

    /// A random composable pair `(sigma, gamma)`: `gamma` is sampled, and
    /// `sigma = k 1_{t(gamma)}` for a random `k` in the kernel of `s`.
    pub fn sample_composable(&self, rng: &mut impl Rng) -> (Mat, Mat) {
        let gamma = self.sample_arrow(rng);
        let other = self.sample_arrow(rng);
        let k = &other * self.unit_of(&invert(&self.source(&other)));
        let sigma = k * self.unit_of(&self.target(&gamma));
        (sigma, gamma)
    }

    /// Sampled residuals of the 2-group axioms.
    pub fn check(&self, samples: usize, seed: u64) -> Lie2GroupReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut r = Lie2GroupReport::default();
        let e1_unit = (self.unit_of(&self.e0()) - self.e1()).norm();
        r.unit_identity = e1_unit;
        let bump = |slot: &mut f64, v: f64| *slot = slot.max(v);
        for _ in 0..samples {
            let (a, b) = (self.sample_arrow(&mut rng), self.sample_arrow(&mut rng));
            let (x, y) = (self.sample_object(&mut rng), self.sample_object(&mut rng));
            let ab = &a * &b;
            bump(
                &mut r.homomorphism,
                (self.source(&ab) - self.source(&a) * self.source(&b)).norm(),
            );
            bump(
                &mut r.homomorphism,
                (self.target(&ab) - self.target(&a) * self.target(&b)).norm(),
            );
            bump(
                &mut r.homomorphism,
                (self.unit_of(&(&x * &y)) - self.unit_of(&x) * self.unit_of(&y)).norm(),
            );
            bump(&mut r.membership, self.g1.membership_residual(&a));

            let (s2, s1) = self.sample_composable(&mut rng);
            let (g2, g1) = self.sample_composable(&mut rng);
            let c = self.compose(&s2, &s1);
            bump(&mut r.category, (self.source(&c) - self.source(&s1)).norm());
            bump(&mut r.category, (self.target(&c) - self.target(&s2)).norm());
            bump(
                &mut r.category,
                (self.compose(&self.unit_of(&self.target(&a)), &a) - &a).norm(),
            );
            bump(
                &mut r.category,
                (self.compose(&a, &self.unit_of(&self.source(&a))) - &a).norm(),
            );
            bump(
                &mut r.composition_formula,
                (self.compose_via_multiplication(&s2, &s1) - &c).norm(),
            );
            let lhs = &c * self.compose(&g2, &g1);
            let rhs = self.compose(&(&s2 * &g2), &(&s1 * &g1));
            bump(&mut r.interchange, (lhs - rhs).norm());
            let inv = self.comp_inverse(&a);
            bump(
                &mut r.category,
                (self.compose(&inv, &a) - self.unit_of(&self.source(&a))).norm(),
            );
        }
        r.samples = samples;
        r
    }
}

/// Largest residuals found by [`MatrixLie2Group::check`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Lie2GroupReport {
    pub samples: usize,
    pub unit_identity: f64,
    pub homomorphism: f64,
    pub membership: f64,
    pub category: f64,
    pub composition_formula: f64,
    pub interchange: f64,
}

impl Lie2GroupReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.unit_identity,
            self.homomorphism,
            self.membership,
            self.category,
            self.composition_formula,
            self.interchange,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}
