//! Finite strict 2-groups (categories internal to finite groups).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::crossed::CrossedModule;
use super::group::{build_group, FiniteGroup, GroupHom};
use super::TwoGroupError;

/// Order of `G1` up to which law checks enumerate every case.
pub const EXHAUSTIVE_ORDER_CAP: usize = 64;

/// Random pairs drawn for interchange checks above [`EXHAUSTIVE_ORDER_CAP`].
pub const SAMPLED_PAIRS: usize = 20_000;

/// A category internal to finite groups.
///
/// Arrows are elements of `G1`, objects elements of `G0`. The composition
/// `sigma * gamma` (first `gamma`, then `sigma`) is stored as a table over the
/// composable pairs `s(sigma) = t(gamma)`, listed in `composable`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Internal2Group {
    g0: FiniteGroup,
    g1: FiniteGroup,
    s: GroupHom,
    t: GroupHom,
    unit: GroupHom,
    composable: Vec<(usize, usize)>,
    pair_index: Vec<Option<usize>>,
    comp: Vec<usize>,
}

impl Internal2Group {
    /// Assembles a 2-group from its structure maps without checking the
    /// category axioms; see [`Internal2Group::validate`].
    ///
    /// `comp` is indexed like [`Internal2Group::composable_pairs`], which
    /// enumerates `(sigma, gamma)` with `sigma` as the outer loop.
    pub fn from_parts(
        g0: FiniteGroup,
        g1: FiniteGroup,
        s: GroupHom,
        t: GroupHom,
        unit: GroupHom,
        comp: Vec<usize>,
    ) -> Result<Self, TwoGroupError> {
        let n1 = g1.order();
        let mut composable = Vec::new();
        let mut pair_index = vec![None; n1 * n1];
        for sigma in 0..n1 {
            for gamma in 0..n1 {
                if s.apply(sigma) == t.apply(gamma) {
                    pair_index[sigma * n1 + gamma] = Some(composable.len());
                    composable.push((sigma, gamma));
                }
            }
        }
        if comp.len() != composable.len() {
            return Err(TwoGroupError::CompTableLength {
                len: comp.len(),
                expected: composable.len(),
            });
        }
        if let Some(&bad) = comp.iter().find(|&&c| c >= n1) {
            return Err(TwoGroupError::CompTableLength { len: bad, expected: n1 });
        }
        Ok(Self {
            g0,
            g1,
            s,
            t,
            unit,
            composable,
            pair_index,
            comp,
        })
    }

    /// Like [`Internal2Group::from_parts`] with the composition given as a
    /// function on composable pairs.
    pub fn from_composition(
        g0: FiniteGroup,
        g1: FiniteGroup,
        s: GroupHom,
        t: GroupHom,
        unit: GroupHom,
        comp: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, TwoGroupError> {
        let table = (0..g1.order())
            .flat_map(|sigma| (0..g1.order()).map(move |gamma| (sigma, gamma)))
            .filter(|&(sigma, gamma)| s.apply(sigma) == t.apply(gamma))
            .map(|(sigma, gamma)| comp(sigma, gamma))
            .collect();
        Self::from_parts(g0, g1, s, t, unit, table)
    }

    /// Checks the unit identity, the category axioms, invertibility of every
    /// arrow, and that composition is a homomorphism on composable pairs.
    pub fn validate(&self) -> Result<(), TwoGroupError> {
        let axiom = |law: &'static str, witness: Vec<usize>| TwoGroupError::CategoryAxiom { law, witness };
        if self.e1() != self.unit.apply(self.e0()) {
            return Err(axiom("identity arrow is the unit at the identity object", vec![]));
        }
        for x in self.g0.elements() {
            let ux = self.unit.apply(x);
            if self.s.apply(ux) != x || self.t.apply(ux) != x {
                return Err(axiom("unit arrow runs from x to x", vec![x]));
            }
        }
        for &(sigma, gamma) in &self.composable {
            let c = self.compose(sigma, gamma).expect("listed pair");
            if self.s.apply(c) != self.s.apply(gamma) {
                return Err(axiom("source of a composite", vec![sigma, gamma]));
            }
            if self.t.apply(c) != self.t.apply(sigma) {
                return Err(axiom("target of a composite", vec![sigma, gamma]));
            }
        }
        for gamma in self.g1.elements() {
            let left = self.compose(self.unit.apply(self.t.apply(gamma)), gamma);
            let right = self.compose(gamma, self.unit.apply(self.s.apply(gamma)));
            if left != Some(gamma) || right != Some(gamma) {
                return Err(axiom("unit law", vec![gamma]));
            }
        }
        if self.g1.order() <= EXHAUSTIVE_ORDER_CAP {
            for &(c, b) in &self.composable {
                let cb = self.compose(c, b).expect("listed pair");
                for a in self.g1.elements().filter(|&a| self.t.apply(a) == self.s.apply(b)) {
                    let lhs = self.compose(cb, a);
                    let rhs = self.compose(b, a).and_then(|ba| self.compose(c, ba));
                    if lhs != rhs || lhs.is_none() {
                        return Err(axiom("associativity", vec![c, b, a]));
                    }
                }
            }
        }
        for gamma in self.g1.elements() {
            if self.comp_inverse(gamma).is_none() {
                return Err(axiom("every arrow is invertible", vec![gamma]));
            }
        }
        let report = check_interchange(self);
        if let Some(v) = report.witnesses.first() {
            return Err(axiom(
                "composition is a homomorphism (interchange)",
                vec![v.sigma2, v.sigma1, v.gamma2, v.gamma1],
            ));
        }
        Ok(())
    }

    pub fn g0(&self) -> &FiniteGroup {
        &self.g0
    }

    pub fn g1(&self) -> &FiniteGroup {
        &self.g1
    }

    pub fn e0(&self) -> usize {
        self.g0.identity()
    }

    pub fn e1(&self) -> usize {
        self.g1.identity()
    }

    pub fn source(&self, arrow: usize) -> usize {
        self.s.apply(arrow)
    }

    pub fn target(&self, arrow: usize) -> usize {
        self.t.apply(arrow)
    }

    pub fn unit_of(&self, object: usize) -> usize {
        self.unit.apply(object)
    }

    pub fn source_hom(&self) -> &GroupHom {
        &self.s
    }

    pub fn target_hom(&self) -> &GroupHom {
        &self.t
    }

    pub fn unit_hom(&self) -> &GroupHom {
        &self.unit
    }

    /// `sigma * gamma`, or `None` when `s(sigma) != t(gamma)`.
    #[inline]
    pub fn compose(&self, sigma: usize, gamma: usize) -> Option<usize> {
        self.pair_index[sigma * self.g1.order() + gamma].map(|i| self.comp[i])
    }

    /// The fiber product `G2` as `(sigma, gamma)` pairs.
    pub fn composable_pairs(&self) -> &[(usize, usize)] {
        &self.composable
    }

    pub fn comp_table(&self) -> &[usize] {
        &self.comp
    }

    /// Componentwise product in `G2`.
    pub fn mul_pairs(&self, a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
        (self.g1.mul(a.0, b.0), self.g1.mul(a.1, b.1))
    }

    /// The inverse of `gamma` for composition, found by search.
    pub fn comp_inverse(&self, gamma: usize) -> Option<usize> {
        let (x, y) = (self.source(gamma), self.target(gamma));
        let (ux, uy) = (self.unit_of(x), self.unit_of(y));
        self.g1.elements().find(|&bar| {
            self.source(bar) == y
                && self.target(bar) == x
                && self.compose(bar, gamma) == Some(ux)
                && self.compose(gamma, bar) == Some(uy)
        })
    }
}

/// Builds `G1 = H x| G` with `s(h, g) = g`, `t(h, g) = boundary(h) g`,
/// `unit(g) = (e, g)` and `(h2, boundary(h1) g) * (h1, g) = (h2 h1, g)`.
///
/// The arrow `(h, g)` has index `h * |G| + g`. After construction the stored
/// composition is cross-checked against [`compose_via_multiplication`] and
/// every 2-group axiom is validated.
pub fn two_group_from_crossed_module(cm: &CrossedModule) -> Result<Internal2Group, TwoGroupError> {
    cm.check_axioms()?;
    let (h, g) = (cm.h(), cm.g());
    let ng = g.order();
    let encode = |k: usize, x: usize| k * ng + x;
    let decode = |a: usize| (a / ng, a % ng);

    let n1 = h.order() * ng;
    let table: Vec<Vec<usize>> = (0..n1)
        .map(|a| {
            let (k1, x1) = decode(a);
            (0..n1)
                .map(|b| {
                    let (k2, x2) = decode(b);
                    encode(h.mul(k1, cm.act(x1, k2)), g.mul(x1, x2))
                })
                .collect()
        })
        .collect();
    let g1 = build_group(&table)?;
    let structure = |map: &'static str, result: Result<GroupHom, super::GroupError>| {
        result.map_err(|source| TwoGroupError::StructureMap { map, source })
    };
    let s = structure("source", GroupHom::new(&g1, g, (0..n1).map(|a| decode(a).1).collect()))?;
    let t = structure(
        "target",
        GroupHom::new(
            &g1,
            g,
            (0..n1)
                .map(|a| {
                    let (k, x) = decode(a);
                    g.mul(cm.boundary().apply(k), x)
                })
                .collect(),
        ),
    )?;
    let unit = structure(
        "unit",
        GroupHom::new(g, &g1, g.elements().map(|x| encode(h.identity(), x)).collect()),
    )?;

    let two_group = Internal2Group::from_composition(g.clone(), g1, s, t, unit, |sigma, gamma| {
        let (k2, _) = decode(sigma);
        let (k1, x) = decode(gamma);
        encode(h.mul(k2, k1), x)
    })?;

    for &(sigma, gamma) in two_group.composable_pairs() {
        let via_mul = compose_via_multiplication(&two_group, sigma, gamma)?;
        if two_group.compose(sigma, gamma) != Some(via_mul) {
            return Err(TwoGroupError::CategoryAxiom {
                law: "composition agrees with gamma . 1_{s(sigma)^-1} . sigma",
                witness: vec![sigma, gamma],
            });
        }
    }
    two_group.validate()?;
    Ok(two_group)
}

/// Computes `sigma * gamma` from the group structure alone as
/// `gamma . 1_{b^-1} . sigma` with `b = s(sigma) = t(gamma)`.
pub fn compose_via_multiplication(g: &Internal2Group, sigma: usize, gamma: usize) -> Result<usize, TwoGroupError> {
    let b = g.source(sigma);
    if b != g.target(gamma) {
        return Err(TwoGroupError::NotComposable { sigma, gamma });
    }
    let g1 = g.g1();
    let unit_b_inv = g.unit_of(g.g0().inv(b));
    Ok(g1.mul(g1.mul(gamma, unit_b_inv), sigma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

/// A quadruple where `(s2 * s1) . (g2 * g1) != (s2 . g2) * (s1 . g1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InterchangeViolation {
    pub sigma2: usize,
    pub sigma1: usize,
    pub gamma2: usize,
    pub gamma1: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterchangeReport {
    pub mode: CheckMode,
    pub composable_pairs: usize,
    pub pairs_checked: usize,
    pub violations: usize,
    /// At most the first 16 violations.
    pub witnesses: Vec<InterchangeViolation>,
}

impl InterchangeReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Checks the interchange law over all pairs of composable pairs, or over a
/// seeded sample when `|G1|` exceeds [`EXHAUSTIVE_ORDER_CAP`].
pub fn check_interchange(g: &Internal2Group) -> InterchangeReport {
    check_interchange_seeded(g, 0)
}

pub fn check_interchange_seeded(g: &Internal2Group, seed: u64) -> InterchangeReport {
    let pairs = g.composable_pairs();
    let mut report = InterchangeReport {
        mode: CheckMode::Exhaustive,
        composable_pairs: pairs.len(),
        pairs_checked: 0,
        violations: 0,
        witnesses: Vec::new(),
    };
    let mut check = |(sigma2, sigma1): (usize, usize), (gamma2, gamma1): (usize, usize)| {
        report.pairs_checked += 1;
        let g1 = g.g1();
        let lhs = match (g.compose(sigma2, sigma1), g.compose(gamma2, gamma1)) {
            (Some(a), Some(b)) => Some(g1.mul(a, b)),
            _ => None,
        };
        let rhs = g.compose(g1.mul(sigma2, gamma2), g1.mul(sigma1, gamma1));
        if lhs.is_none() || lhs != rhs {
            report.violations += 1;
            if report.witnesses.len() < 16 {
                report.witnesses.push(InterchangeViolation {
                    sigma2,
                    sigma1,
                    gamma2,
                    gamma1,
                });
            }
        }
    };
    if g.g1().order() <= EXHAUSTIVE_ORDER_CAP {
        for &p in pairs {
            for &q in pairs {
                check(p, q);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..SAMPLED_PAIRS {
            let p = pairs[rng.random_range(0..pairs.len())];
            let q = pairs[rng.random_range(0..pairs.len())];
            check(p, q);
        }
        report.mode = CheckMode::Sampled {
            seed,
            samples: SAMPLED_PAIRS,
        };
    }
    report
}

/// The isomorphism of a 2-group with the action groupoid of `K = ker(s)`
/// acting on `G0` by `k . x = t(k) x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionGroupoidIso {
    /// `ker(s)` with its own indexing; `kernel_elements[i]` is the arrow in
    /// `G1` corresponding to index `i`.
    pub kernel: FiniteGroup,
    pub kernel_elements: Vec<usize>,
    /// `arrow_map[gamma] = (k, x)` with `k` a kernel index and `x = s(gamma)`.
    pub arrow_map: Vec<(usize, usize)>,
    pub bijective: bool,
    pub functorial: bool,
    pub preserves_units: bool,
    pub preserves_source_target: bool,
    pub pairs_checked: usize,
}

impl ActionGroupoidIso {
    pub fn verified(&self) -> bool {
        self.bijective && self.functorial && self.preserves_units && self.preserves_source_target
    }

    /// The identity arrow `(e, x)` of the action groupoid.
    pub fn unit_arrow(&self, x: usize) -> (usize, usize) {
        (self.kernel.identity(), x)
    }

    /// Whether the induced action `k . x = t(k) x` fixes every object.
    pub fn action_is_trivial(&self, g: &Internal2Group) -> bool {
        self.kernel_elements
            .iter()
            .all(|&k| g.g0().elements().all(|x| g.g0().mul(g.target(k), x) == x))
    }
}

/// Builds `phi = (id, gamma -> (gamma . 1_{x^-1}, x))` for `gamma: x -> y`
/// and checks that it is a bijective functor onto `K x G0 => G0`.
pub fn action_groupoid_iso(g: &Internal2Group) -> ActionGroupoidIso {
    let (g0, g1) = (g.g0(), g.g1());
    let kernel_elements: Vec<usize> = g1.elements().filter(|&a| g.source(a) == g.e0()).collect();
    let kernel = g1
        .subgroup(&kernel_elements)
        .expect("kernel of a homomorphism is a subgroup");
    let mut kernel_index = vec![usize::MAX; g1.order()];
    for (i, &k) in kernel_elements.iter().enumerate() {
        kernel_index[k] = i;
    }

    let arrow_map: Vec<(usize, usize)> = g1
        .elements()
        .map(|gamma| {
            let x = g.source(gamma);
            let k = g1.mul(gamma, g.unit_of(g0.inv(x)));
            (kernel_index[k], x)
        })
        .collect();

    let in_kernel = arrow_map.iter().all(|&(k, _)| k != usize::MAX);
    let mut seen = vec![false; kernel.order() * g0.order()];
    let bijective = in_kernel
        && arrow_map.len() == seen.len()
        && arrow_map
            .iter()
            .all(|&(k, x)| !std::mem::replace(&mut seen[k * g0.order() + x], true));

    let act_target = |(k, x): (usize, usize)| g0.mul(g.target(kernel_elements[k]), x);
    let preserves_source_target = in_kernel
        && g1
            .elements()
            .all(|gamma| arrow_map[gamma].1 == g.source(gamma) && act_target(arrow_map[gamma]) == g.target(gamma));
    let preserves_units = in_kernel && g0.elements().all(|x| arrow_map[g.unit_of(x)] == (kernel.identity(), x));

    let mut pairs_checked = 0;
    let functorial = in_kernel
        && g.composable_pairs().iter().all(|&(sigma, gamma)| {
            pairs_checked += 1;
            let composite = g.compose(sigma, gamma).expect("composable");
            let (k2, _) = arrow_map[sigma];
            let (k1, x) = arrow_map[gamma];
            arrow_map[composite] == (kernel.mul(k2, k1), x)
        });

    ActionGroupoidIso {
        kernel,
        kernel_elements,
        arrow_map,
        bijective,
        functorial,
        preserves_units,
        preserves_source_target,
        pairs_checked,
    }
}

/// For a 2-group built by [`two_group_from_crossed_module`], checks that
/// `h -> (h, e)` is an isomorphism from `H` onto `ker(s)`.
pub fn source_kernel_matches(cm: &CrossedModule, g: &Internal2Group) -> bool {
    let ng = cm.g().order();
    let embed: Vec<usize> = cm.h().elements().map(|k| k * ng + cm.g().identity()).collect();
    let kernel: Vec<usize> = g.g1().elements().filter(|&a| g.source(a) == g.e0()).collect();
    let mut image = embed.clone();
    image.sort_unstable();
    image == kernel
        && cm.h().elements().all(|a| {
            cm.h()
                .elements()
                .all(|b| embed[cm.h().mul(a, b)] == g.g1().mul(embed[a], embed[b]))
        })
}
