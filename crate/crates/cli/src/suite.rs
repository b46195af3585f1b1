//! The law suites. Each law is evaluated once and reported as a
//! [`LawResult`]; numerical failures inside a law become an error outcome for
//! that law instead of aborting the run.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twogroup::finite_core::{
    action_groupoid_iso, check_interchange_seeded, compose_via_multiplication, source_kernel_matches, CheckMode,
    CrossedModule, Internal2Group,
};
use twogroup::gpd_cat::{action_to_hom, check_middle_four, Action2, FiniteGroupoid, GpdError};
use twogroup::lie2::{algebra_interchange_residual, bracket_oracle_residual, circledast_identity_check, ell, Level};
use twogroup::matrix_lie::{
    lie_functor, reset_richardson_stats, richardson_stats, Coords, Mat, SmoothMap, TangentVector,
};
use twogroup::multvf::{
    limit_factorize, AlgebroidSection, FieldCategory, MultVectorField, MultVfError, Samples, TwoVectorSpaceMap,
};

use crate::fixture::{Fixture, FixtureBody, FixtureKind, Tolerances};
use crate::report::{LawResult, Mode, Outcome, RunOutput, SuiteReport};
use crate::{CliError, Suite};

/// Sample points for the laws whose cost is quadratic in the sample count.
pub const POINT_SAMPLES: usize = 8;

/// Number of group elements used against the adjoint oracle.
const ADJOINT_ELEMENTS: usize = 4;

type Check<T = (f64, usize)> = anyhow::Result<T>;

fn at_most(id: &str, statement: &str, mode: Mode, bound: f64, check: impl FnOnce() -> Check) -> LawResult {
    match check() {
        Ok((residual, checked)) => LawResult::new(id, statement, mode, checked, Outcome::AtMost { residual, bound }),
        Err(e) => failed(id, statement, mode, e),
    }
}

fn at_least(id: &str, statement: &str, mode: Mode, bound: f64, check: impl FnOnce() -> Check) -> LawResult {
    match check() {
        Ok((residual, checked)) => LawResult::new(id, statement, mode, checked, Outcome::AtLeast { residual, bound }),
        Err(e) => failed(id, statement, mode, e),
    }
}

fn count(id: &str, statement: &str, mode: Mode, checked: usize, violations: usize) -> LawResult {
    LawResult::new(id, statement, mode, checked, Outcome::Count { violations })
}

fn failed(id: &str, statement: &str, mode: Mode, e: anyhow::Error) -> LawResult {
    LawResult::new(
        id,
        statement,
        mode,
        0,
        Outcome::Error {
            message: format!("{e:#}"),
        },
    )
}

fn unit(n: usize, i: usize) -> Coords {
    Coords::from_fn(n, |r, _| if r == i { 1.0 } else { 0.0 })
}

fn check_compatible(fixture: &Fixture, suite: Suite) -> Result<(), CliError> {
    let ok = match fixture.kind() {
        FixtureKind::Finite => matches!(suite, Suite::Finite | Suite::All),
        FixtureKind::Matrix => suite != Suite::Finite,
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::IncompatibleSuite {
            operation: format!("suite {suite}"),
            kind: fixture.kind(),
            fixture: fixture.name.clone(),
        })
    }
}

/// Runs every law of `suite` on `fixture`, using the fixture's seed and
/// sample count.
pub fn run_suite(fixture: &Fixture, suite: Suite) -> Result<RunOutput, CliError> {
    check_compatible(fixture, suite)?;
    let start = Instant::now();
    let mut laws = Vec::new();
    match &fixture.body {
        FixtureBody::Finite {
            crossed_module,
            two_group,
        } => finite_laws(crossed_module, two_group, fixture.seed, &mut laws),
        FixtureBody::Matrix(x) => {
            reset_richardson_stats();
            let ctx = MatrixContext::new(x, fixture);
            if matches!(suite, Suite::Lie | Suite::All) {
                ctx.lie_laws(&mut laws);
            }
            if matches!(suite, Suite::Invariance | Suite::All) {
                ctx.invariance_laws(&mut laws);
            }
            if matches!(suite, Suite::Limit | Suite::All) {
                ctx.limit_laws(&mut laws);
            }
            let stats = richardson_stats();
            laws.push(
                count(
                    "numerics.richardson",
                    "every finite difference agrees with its half-step value",
                    Mode::Exhaustive,
                    stats.evaluations as usize,
                    stats.failures as usize,
                )
                .with_detail(format!(
                    "largest relative step discrepancy {:.3e}",
                    stats.max_relative_discrepancy
                )),
            );
        }
    }
    laws.sort_by(|a, b| a.id.cmp(&b.id));
    let report = SuiteReport {
        fixture: fixture.name.clone(),
        kind: fixture.kind(),
        suite,
        seed: fixture.seed,
        samples: fixture.samples,
        passed: laws.iter().all(|l| l.passed),
        laws,
    };
    Ok(RunOutput::new(report, start.elapsed()))
}

fn finite_laws(cm: &CrossedModule, g: &Internal2Group, seed: u64, out: &mut Vec<LawResult>) {
    let pairs = g.composable_pairs();
    let n1 = g.g1().order();

    out.push(count(
        "finite.two-group-axioms",
        "source, target and unit are homomorphisms and composition is a category",
        Mode::Exhaustive,
        n1 * n1,
        usize::from(g.validate().is_err()),
    ));

    let r = check_interchange_seeded(g, seed);
    let mode = match r.mode {
        CheckMode::Exhaustive => Mode::Exhaustive,
        CheckMode::Sampled { .. } => Mode::Sampled,
    };
    let mut law = count(
        "finite.interchange",
        "(s2 . s1)(g2 . g1) = (s2 g2) . (s1 g1) for composable pairs",
        mode,
        r.pairs_checked,
        r.violations,
    );
    if let Some(w) = r.witnesses.first() {
        law = law.with_detail(format!("first witness {w:?}"));
    }
    out.push(law);

    let mismatches = pairs
        .iter()
        .filter(|&&(sigma, gamma)| compose_via_multiplication(g, sigma, gamma).ok() != g.compose(sigma, gamma))
        .count();
    out.push(count(
        "finite.composition-formula",
        "sigma . gamma = gamma 1_{s(sigma)}^-1 sigma",
        Mode::Exhaustive,
        pairs.len(),
        mismatches,
    ));

    let iso = action_groupoid_iso(g);
    let defects = [
        iso.bijective,
        iso.functorial,
        iso.preserves_units,
        iso.preserves_source_target,
    ]
    .iter()
    .filter(|ok| !**ok)
    .count();
    out.push(count(
        "finite.action-groupoid",
        "gamma -> (gamma 1_x^-1, x) is an isomorphism onto the action groupoid of ker s on G0",
        Mode::Exhaustive,
        iso.pairs_checked,
        defects,
    ));

    out.push(count(
        "finite.source-kernel",
        "ker s is isomorphic to H",
        Mode::Exhaustive,
        n1,
        usize::from(!source_kernel_matches(cm, g)),
    ));

    left_regular_laws(g, out);
}

fn left_regular_laws(g: &Internal2Group, out: &mut Vec<LawResult>) {
    const LAWS: [(&str, &str, &str); 4] = [
        (
            "finite.left-regular.naturality",
            "each arrow acts by a natural transformation between the object actions",
            "action on an arrow is natural",
        ),
        (
            "finite.left-regular.horizontal",
            "acting by g2 g1 is the horizontal composite of the actions",
            "acting by a product of arrows is horizontal composition",
        ),
        (
            "finite.left-regular.objects",
            "acting by x y is the composite of the functors",
            "acting by x y composes the functors",
        ),
        (
            "finite.left-regular.units",
            "the identities act as identity functor and transformation",
            "identity",
        ),
    ];
    let k = FiniteGroupoid::from_internal(g);
    let action = Action2::new(
        g.clone(),
        k.clone(),
        |x, b| g.g0().mul(x, b),
        |gamma, sigma| g.g1().mul(gamma, sigma),
    );
    let hom = action.and_then(|a| action_to_hom(&a));
    match hom {
        Ok(hom) => {
            let r = hom.report;
            let checked = [r.naturality_squares, r.horizontal_pairs, r.object_pairs, r.unit_laws];
            for ((id, statement, _), n) in LAWS.iter().zip(checked) {
                out.push(count(id, statement, Mode::Exhaustive, n, 0));
            }
            let (n, bad) = check_middle_four(&k, &hom.arrows);
            out.push(count(
                "finite.left-regular.middle-four",
                "horizontal and vertical composition of the image transformations interchange",
                Mode::Exhaustive,
                n,
                bad,
            ));
        }
        Err(e) => {
            let culprit = match &e {
                GpdError::ActionAxiomViolation { law, .. } => LAWS.iter().position(|(_, _, l)| law.starts_with(l)),
                _ => None,
            };
            for (i, (id, statement, _)) in LAWS.iter().enumerate() {
                let law = match culprit {
                    Some(c) if c != i => LawResult::new(
                        id,
                        statement,
                        Mode::Exhaustive,
                        0,
                        Outcome::Error {
                            message: "not reached".into(),
                        },
                    ),
                    _ => failed(id, statement, Mode::Exhaustive, anyhow::anyhow!("{e}")),
                };
                out.push(law);
            }
            out.push(failed(
                "finite.left-regular.middle-four",
                "horizontal and vertical composition of the image transformations interchange",
                Mode::Exhaustive,
                anyhow::anyhow!("no homomorphism to check"),
            ));
        }
    }
}

struct MatrixContext<'a> {
    x: &'a FieldCategory,
    tol: Tolerances,
    seed: u64,
    samples: usize,
    /// `samples` composable pairs, arrows and objects.
    wide: Samples,
    /// [`POINT_SAMPLES`] of each, for the quadratic laws.
    points: Samples,
}

impl<'a> MatrixContext<'a> {
    fn new(x: &'a FieldCategory, fixture: &Fixture) -> Self {
        Self {
            x,
            tol: fixture.tolerances,
            seed: fixture.seed,
            samples: fixture.samples,
            wide: Samples::draw(&x.g, fixture.samples, fixture.seed),
            points: Samples::draw(&x.g, POINT_SAMPLES.min(fixture.samples), fixture.seed.wrapping_add(1)),
        }
    }

    fn dims(&self) -> (usize, usize) {
        (self.x.l.g0_dim, self.x.l.g1_dim)
    }

    fn is_abelian(&self) -> bool {
        let l = &self.x.l;
        l.bracket0.iter().chain(&l.bracket1).all(|m| m.amax() <= 1e-12)
    }

    fn lie_laws(&self, out: &mut Vec<LawResult>) {
        let (x, tol) = (self.x, &self.tol);
        let (d0, d1) = self.dims();

        out.push(at_most(
            "lie.two-group-axioms",
            "sampled homomorphism, category, composition-formula and interchange laws",
            Mode::Sampled,
            tol.structure,
            || Ok((x.g.check(self.samples, self.seed).max_residual(), self.samples)),
        ));

        out.push(at_most(
            "lie.adjoint-oracle",
            "the Lie functor of conjugation by a equals Ad_a, relative residual per basis direction",
            Mode::Sampled,
            tol.lie_functor,
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(2));
                let mut worst: f64 = 0.0;
                let mut checked = 0;
                for group in [x.g.g0(), x.g.g1()] {
                    for _ in 0..ADJOINT_ELEMENTS {
                        let a = group.sample_with(&mut rng);
                        let a_inv = a
                            .clone()
                            .try_inverse()
                            .ok_or_else(|| anyhow::anyhow!("singular sample"))?;
                        let (a2, ai2) = (a.clone(), a_inv.clone());
                        let conj = SmoothMap::new(group.clone(), group.clone(), move |m: &Mat| &a2 * m * &ai2);
                        let ad = lie_functor(&conj)?;
                        for (i, b) in group.basis().iter().enumerate() {
                            let (oracle, _) = group.coordinates(&(&a * b * &a_inv));
                            let diff = (Coords::from(ad.column(i)) - &oracle).norm();
                            worst = worst.max(diff / oracle.norm().max(f64::MIN_POSITIVE));
                            checked += 1;
                        }
                    }
                }
                Ok((worst, checked))
            },
        ));

        out.push(at_most(
            "lie.bracket-oracle",
            "structure constants match finite-difference brackets of left-invariant fields",
            Mode::Exhaustive,
            tol.bracket_constants,
            || {
                let r = bracket_oracle_residual(x.g.g0())?.max(bracket_oracle_residual(x.g.g1())?);
                Ok((r, d0 * d0 + d1 * d1))
            },
        ));

        out.push(at_most(
            "lie.unit-section",
            "ds d1 = dt d1 = id",
            Mode::Exhaustive,
            tol.structure,
            || Ok((x.l.unit_section_residual(), d0)),
        ));

        out.push(at_most(
            "lie.structure-map-brackets",
            "ds, dt and d1 preserve brackets",
            Mode::Exhaustive,
            tol.bracket_constants,
            || Ok((x.l.structure_map_bracket_residual(), d0 * d0 + d1 * d1)),
        ));

        out.push(at_most(
            "lie.circledast-identity",
            "a (*) b = a + b - d1 ds a on matched pairs",
            Mode::Exhaustive,
            tol.circledast,
            || Ok((circledast_identity_check(&x.l), x.l.matched_basis.len() + d0)),
        ));

        out.push(at_most(
            "lie.algebra-interchange",
            "the differential of multiplication interchanges with (*)",
            Mode::Exhaustive,
            tol.circledast,
            || {
                let n = x.l.matched_basis.len();
                Ok((algebra_interchange_residual(&x.l, &x.g)?, n * n))
            },
        ));

        out.push(at_most(
            "fields.object-functoriality",
            "p(b_i) is multiplicative for every basis element of g0",
            Mode::Sampled,
            tol.functoriality,
            || {
                let mut worst: f64 = 0.0;
                for i in 0..d0 {
                    let cert = x.p_object(&unit(d0, i))?.verify_multiplicative(&self.wide)?;
                    worst = worst.max(cert.max_residual());
                }
                Ok((worst, d0 * self.wide.pairs.len()))
            },
        ));

        out.push(at_most(
            "fields.arrow-naturality",
            "p(c_j) is an arrow of multiplicative fields for every basis element of g1",
            Mode::Sampled,
            tol.functoriality,
            || {
                let mut worst: f64 = 0.0;
                for j in 0..d1 {
                    worst = worst.max(x.p_arrow(&unit(d1, j))?.verify(&self.wide)?.max_residual());
                }
                Ok((worst, d1 * self.wide.pairs.len()))
            },
        ));

        out.push(at_most(
            "fields.j-inverts-q",
            "J(q(beta)) = beta pointwise for left-invariant beta",
            Mode::Sampled,
            tol.j_inverse,
            || {
                let mut worst: f64 = 0.0;
                for j in 0..d1 {
                    let c = unit(d1, j);
                    let beta = ell(&x.l, &x.g, &c, Level::Arrows)?;
                    let big_j = x.big_j(&x.p_arrow(&c)?);
                    for gamma in &self.wide.arrows {
                        worst = worst.max(big_j(gamma)?.distance(&beta.eval(gamma)));
                    }
                }
                Ok((worst, d1 * self.wide.arrows.len()))
            },
        ));

        out.push(at_most(
            "fields.j-formulas",
            "the closed form of j agrees with the differential of right composition",
            Mode::Sampled,
            tol.j_inverse,
            || {
                let kernel = &x.l.source_kernel;
                if kernel.is_empty() {
                    return Ok((0.0, 0));
                }
                let mut direction = Coords::zeros(d1);
                for (i, k) in kernel.iter().enumerate() {
                    direction += k * (1.0 / (i as f64 + 1.0));
                }
                let k = x.g.g1().algebra_element(&direction)?;
                let g = x.g.clone();
                let zeta = AlgebroidSection {
                    zeta: Arc::new(move |p: &Mat| {
                        let u = g.unit_of(p);
                        Ok(TangentVector::new(u.clone(), &u * &k * (1.0 + 0.5 * p[(0, 0)])))
                    }),
                };
                let mut worst = zeta.source_residual(&x.g, &self.wide)?;
                let (closed, direct) = (x.j_section(&zeta), x.j_section_by_definition(&zeta));
                for gamma in &self.wide.arrows {
                    worst = worst.max(closed(gamma)?.distance(&direct(gamma)?));
                }
                Ok((worst, self.wide.arrows.len()))
            },
        ));

        let bracket_bound = if self.is_abelian() {
            tol.abelian_brackets
        } else {
            tol.field_brackets
        };
        out.push(at_most(
            "fields.object-brackets",
            "[p(a), p(b)] = p([a, b]) on basis pairs of g0",
            Mode::Sampled,
            bracket_bound,
            || {
                let mut worst: f64 = 0.0;
                for i in 0..d0 {
                    for j in 0..d0 {
                        let (a, b) = (unit(d0, i), unit(d0, j));
                        let lhs = x.bracket_objects(&x.p_object(&a)?, &x.p_object(&b)?);
                        let rhs = x.p_object(&x.l.bracket0(&a, &b))?;
                        worst = worst.max(lhs.distance(&rhs, &self.points)?);
                    }
                }
                Ok((worst, d0 * d0))
            },
        ));

        out.push(at_most(
            "fields.arrow-brackets",
            "[J p(a), J p(b)] = J p([a, b]) on basis pairs of g1",
            Mode::Sampled,
            bracket_bound,
            || {
                let mut worst: f64 = 0.0;
                for i in 0..d1 {
                    for j in 0..d1 {
                        let (a, b) = (unit(d1, i), unit(d1, j));
                        let br = x.bracket_arrows(&x.p_arrow(&a)?, &x.p_arrow(&b)?, &self.points)?;
                        let expected = x.p_arrow(&x.l.bracket1(&a, &b))?;
                        worst = worst.max(br.residual).max(br.arrow.distance(&expected, &self.points)?);
                    }
                }
                Ok((worst, d1 * d1))
            },
        ));
    }

    fn control(&self) -> Result<MultVectorField, MultVfError> {
        self.x.control_field(&unit(self.x.l.g0_dim, 0), self.tol.control_eps)
    }

    fn invariance_laws(&self, out: &mut Vec<LawResult>) {
        let (x, tol) = (self.x, &self.tol);
        let (d0, d1) = self.dims();
        let pts = &self.points;

        out.push(at_most(
            "invariance.forward",
            "p(a) is fixed by the left-regular representation for every basis element",
            Mode::Sampled,
            tol.invariance,
            || {
                let mut worst: f64 = 0.0;
                for i in 0..d0 {
                    let (obj, morph) = x.invariance_residual(&x.p_object(&unit(d0, i))?, pts)?;
                    worst = worst.max(obj).max(morph);
                }
                for j in 0..d1 {
                    worst = worst.max(x.arrow_invariance_residual(&x.p_arrow(&unit(d1, j))?, pts)?);
                }
                Ok((worst, d0 + d1))
            },
        ));

        out.push(at_most(
            "invariance.converse",
            "invariant fields are reconstructed by p from their value at the identity",
            Mode::Sampled,
            tol.reconstruction,
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(3));
                let mut candidates: Vec<MultVectorField> =
                    (0..d0).map(|i| x.p_object(&unit(d0, i))).collect::<Result<_, _>>()?;
                let terms: Vec<(f64, MultVectorField)> = candidates
                    .iter()
                    .map(|v| (rng.random_range(-1.0..1.0), v.clone()))
                    .collect();
                candidates.push(MultVectorField::linear_combination(x.g.clone(), &terms));
                let mut worst: f64 = 0.0;
                let mut checked = 0;
                for v in &candidates {
                    let (obj, morph) = x.invariance_residual(v, pts)?;
                    if obj.max(morph) <= tol.invariance {
                        worst = worst.max(x.reconstruction_residual(v, pts)?);
                        checked += 1;
                    }
                }
                if checked == 0 {
                    anyhow::bail!("no invariant candidate field");
                }
                Ok((worst, checked))
            },
        ));

        out.push(at_most(
            "invariance.control-multiplicative",
            "the control field p(b_0) + eps * inner is multiplicative",
            Mode::Sampled,
            tol.functoriality,
            || {
                Ok((
                    self.control()?.verify_multiplicative(pts)?.max_residual(),
                    pts.pairs.len(),
                ))
            },
        ));

        out.push(at_least(
            "invariance.control-not-invariant",
            "the control field moves under the left-regular representation",
            Mode::Sampled,
            tol.control_min,
            || Ok((x.invariance_residual(&self.control()?, pts)?.0, pts.objects.len())),
        ));

        out.push(at_least(
            "invariance.control-not-reconstructed",
            "the control field is not reconstructed by p from its value at the identity",
            Mode::Sampled,
            tol.reconstruction,
            || Ok((x.reconstruction_residual(&self.control()?, pts)?, pts.objects.len())),
        ));

        out.push(at_most(
            "invariance.lambda-routes",
            "the closed form and the whiskered form of lambda(gamma) agree",
            Mode::Sampled,
            tol.lambda,
            || {
                let w = self.control()?;
                let p = x.p_object(&unit(d0, 0))?;
                let r = x
                    .lambda_routes(&w, pts)?
                    .residual
                    .max(x.lambda_routes(&p, pts)?.residual);
                Ok((r, pts.arrows.len() * 2))
            },
        ));

        out.push(at_most(
            "invariance.lambda-homomorphism",
            "lambda respects products of objects and arrows, naturality and endpoints",
            Mode::Sampled,
            tol.lambda,
            || {
                let w = self.control()?;
                let alpha = x.p_arrow(&unit(d1, 0))?;
                let r = x.lambda_homomorphism(&w, &alpha, pts)?;
                let worst = [r.objects, r.horizontal, r.naturality, r.endpoints]
                    .into_iter()
                    .fold(0.0, f64::max);
                Ok((worst, r.samples))
            },
        ));
    }

    /// `psi(e_i) = p(M e_i)` on a discrete 2-vector space of dimension
    /// `min(2, dim g0)`, with `M` drawn from the seed.
    fn random_psi(&self) -> Result<(TwoVectorSpaceMap, Mat), MultVfError> {
        let x = self.x;
        let (d0, _) = self.dims();
        let h = d0.min(2);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(4));
        let m = Mat::from_fn(d0, h, |_, _| rng.random_range(-1.0..1.0));
        let lifted = &x.l.d1 * &m;
        let objects = (0..h)
            .map(|i| x.p_object(&Coords::from(m.column(i))))
            .collect::<Result<_, _>>()?;
        let arrows = (0..h)
            .map(|i| x.p_arrow(&Coords::from(lifted.column(i))))
            .collect::<Result<_, _>>()?;
        let id = Mat::identity(h, h);
        Ok((
            TwoVectorSpaceMap {
                h0_dim: h,
                h1_dim: h,
                h_ds: id.clone(),
                h_dt: id.clone(),
                h_d1: id,
                objects,
                arrows,
            },
            m,
        ))
    }

    fn identity_psi(&self) -> Result<TwoVectorSpaceMap, MultVfError> {
        let x = self.x;
        let (d0, d1) = self.dims();
        Ok(TwoVectorSpaceMap {
            h0_dim: d0,
            h1_dim: d1,
            h_ds: x.l.ds.clone(),
            h_dt: x.l.dt.clone(),
            h_d1: x.l.d1.clone(),
            objects: (0..d0).map(|i| x.p_object(&unit(d0, i))).collect::<Result<_, _>>()?,
            arrows: (0..d1).map(|j| x.p_arrow(&unit(d1, j))).collect::<Result<_, _>>()?,
        })
    }

    fn limit_laws(&self, out: &mut Vec<LawResult>) {
        let (x, tol) = (self.x, &self.tol);
        let (d0, d1) = self.dims();
        let pts = &self.points;

        out.push(at_most(
            "limit.identity",
            "p itself factors through the identity of g",
            Mode::Sampled,
            tol.limit_reconstruction,
            || {
                let f = limit_factorize(x, &self.identity_psi()?, pts)?;
                let r = (f.psi_bar0() - Mat::identity(d0, d0))
                    .norm()
                    .max((f.psi_bar1() - Mat::identity(d1, d1)).norm())
                    .max(f.reconstruction_residual);
                Ok((r, d0 + d1))
            },
        ));

        let random = self
            .random_psi()
            .map_err(anyhow::Error::from)
            .and_then(|(psi, m)| Ok((limit_factorize(x, &psi, pts)?, psi, m)));

        out.push(at_most(
            "limit.reconstruction",
            "an equivariant psi equals p composed with its value at the identity",
            Mode::Sampled,
            tol.limit_reconstruction,
            || {
                let (f, psi, _) = random.as_ref().map_err(|e| anyhow::anyhow!("{e:#}"))?;
                Ok((f.reconstruction_residual, psi.h0_dim + psi.h1_dim))
            },
        ));

        out.push(at_most(
            "limit.recovered-map",
            "the factor psi_bar is the generating linear map and commutes with the structure maps",
            Mode::Sampled,
            tol.limit_reconstruction,
            || {
                let (f, psi, m) = random.as_ref().map_err(|e| anyhow::anyhow!("{e:#}"))?;
                let r = (f.psi_bar0() - m)
                    .norm()
                    .max((f.psi_bar1() - &x.l.d1 * m).norm())
                    .max(f.map_residual)
                    .max(f.structure_residual);
                Ok((r, psi.h0_dim + psi.h1_dim))
            },
        ));

        out.push(match &random {
            Ok((f, psi, _)) => {
                let violations = usize::from(f.p_rank0 != f.g0_dim)
                    + usize::from(f.p_rank1 != f.g1_dim)
                    + usize::from(f.psi_rank0 != psi.h0_dim)
                    + usize::from(f.psi_rank1 != psi.h1_dim);
                count(
                    "limit.uniqueness",
                    "the Gram matrices of p and psi evaluations have full rank",
                    Mode::Sampled,
                    4,
                    violations,
                )
                .with_detail(format!(
                    "ranks p {}/{} {}/{}, psi {}/{} {}/{}",
                    f.p_rank0, f.g0_dim, f.p_rank1, f.g1_dim, f.psi_rank0, psi.h0_dim, f.psi_rank1, psi.h1_dim
                ))
            }
            Err(e) => failed(
                "limit.uniqueness",
                "the Gram matrices of p and psi evaluations have full rank",
                Mode::Sampled,
                anyhow::anyhow!("{e:#}"),
            ),
        });

        let statement = "factoring a psi that hits the control field is refused";
        out.push(match self.control() {
            Ok(w) => {
                let psi = TwoVectorSpaceMap {
                    h0_dim: 1,
                    h1_dim: 0,
                    h_ds: Mat::zeros(1, 0),
                    h_dt: Mat::zeros(1, 0),
                    h_d1: Mat::zeros(0, 1),
                    objects: vec![w],
                    arrows: vec![],
                };
                match limit_factorize(x, &psi, pts) {
                    Err(MultVfError::NotEquivariant { residual, .. }) => {
                        count("limit.rejects-control", statement, Mode::Sampled, 1, 0)
                            .with_detail(format!("refused with residual {residual:.3e}"))
                    }
                    Err(e) => failed("limit.rejects-control", statement, Mode::Sampled, e.into()),
                    Ok(_) => count("limit.rejects-control", statement, Mode::Sampled, 1, 1),
                }
            }
            Err(e) => failed("limit.rejects-control", statement, Mode::Sampled, e.into()),
        });
    }
}
