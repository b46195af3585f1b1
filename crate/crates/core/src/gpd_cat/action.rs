use serde::Serialize;

use crate::finite_core::Internal2Group;

use super::{horizontal_compose, vertical_compose, FiniteGroupoid, GpdError, GpdFunctor, NatTransf};

/// A strict left action of a finite 2-group on a finite groupoid, given by a
/// functor `a: G x K -> K`.
#[derive(Debug, Clone)]
pub struct Action2 {
    group: Internal2Group,
    group_gpd: FiniteGroupoid,
    k: FiniteGroupoid,
    product: FiniteGroupoid,
    a: GpdFunctor,
}

impl Action2 {
    /// `obj(x, b)` and `arr(gamma, sigma)` give the action on objects and
    /// arrows. Checks functoriality, the unit law and associativity of the
    /// action on every object and arrow.
    pub fn new(
        group: Internal2Group,
        k: FiniteGroupoid,
        obj: impl Fn(usize, usize) -> usize,
        arr: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GpdError> {
        let group_gpd = FiniteGroupoid::from_internal(&group);
        let product = group_gpd.product(&k);
        let (nk0, nk1) = (k.n_objects(), k.n_arrows());
        let obj_map = (0..product.n_objects()).map(|q| obj(q / nk0, q % nk0)).collect();
        let arr_map = (0..product.n_arrows()).map(|p| arr(p / nk1, p % nk1)).collect();
        let a = GpdFunctor::new(&product, &k, obj_map, arr_map).map_err(|e| match e {
            GpdError::NotFunctor { law, witness } => GpdError::ActionAxiomViolation { law, witness },
            other => other,
        })?;
        let action = Self {
            group,
            group_gpd,
            k,
            product,
            a,
        };
        action.check_axioms()?;
        Ok(action)
    }

    fn check_axioms(&self) -> Result<(), GpdError> {
        let violation = |law: &'static str, witness: Vec<usize>| GpdError::ActionAxiomViolation { law, witness };
        let (g0, g1) = (self.group.g0(), self.group.g1());
        for b in 0..self.k.n_objects() {
            if self.act_obj(self.group.e0(), b) != b {
                return Err(violation("identity object acts trivially", vec![b]));
            }
            for x in g0.elements() {
                for y in g0.elements() {
                    if self.act_obj(g0.mul(x, y), b) != self.act_obj(x, self.act_obj(y, b)) {
                        return Err(violation("(x y) b = x (y b)", vec![x, y, b]));
                    }
                }
            }
        }
        for sigma in 0..self.k.n_arrows() {
            if self.act_arr(self.group.e1(), sigma) != sigma {
                return Err(violation("identity arrow acts trivially", vec![sigma]));
            }
            for gamma in g1.elements() {
                for delta in g1.elements() {
                    if self.act_arr(g1.mul(gamma, delta), sigma) != self.act_arr(gamma, self.act_arr(delta, sigma)) {
                        return Err(violation(
                            "(gamma delta) sigma = gamma (delta sigma)",
                            vec![gamma, delta, sigma],
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// The action by projection onto `K`.
    pub fn trivial(group: Internal2Group, k: FiniteGroupoid) -> Self {
        Self::new(group, k, |_, b| b, |_, sigma| sigma).expect("projection is an action")
    }

    #[inline]
    pub fn act_obj(&self, x: usize, b: usize) -> usize {
        self.a.obj(x * self.k.n_objects() + b)
    }

    #[inline]
    pub fn act_arr(&self, gamma: usize, sigma: usize) -> usize {
        self.a.arr(gamma * self.k.n_arrows() + sigma)
    }

    pub fn group(&self) -> &Internal2Group {
        &self.group
    }

    pub fn group_groupoid(&self) -> &FiniteGroupoid {
        &self.group_gpd
    }

    pub fn k(&self) -> &FiniteGroupoid {
        &self.k
    }

    pub fn product(&self) -> &FiniteGroupoid {
        &self.product
    }
}

/// Counts of the cases checked while building the induced homomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HomLawReport {
    pub naturality_squares: usize,
    pub horizontal_pairs: usize,
    pub object_pairs: usize,
    pub unit_laws: usize,
}

/// The homomorphism `G -> Aut(K)` induced by an action.
#[derive(Debug, Clone)]
pub struct Action2Hom {
    /// `objects[x]` is the functor by which `x` acts.
    pub objects: Vec<GpdFunctor>,
    /// `arrows[gamma]` is the transformation `objects[s gamma] => objects[t gamma]`.
    pub arrows: Vec<NatTransf>,
    pub report: HomLawReport,
}

/// Builds `x -> a(x, -)` on objects and `gamma -> (b -> a(gamma, 1_b))` on
/// arrows, then checks every homomorphism law exhaustively.
pub fn action_to_hom(action: &Action2) -> Result<Action2Hom, GpdError> {
    let (g, k) = (action.group(), action.k());
    let violation = |law: &'static str, witness: Vec<usize>| GpdError::ActionAxiomViolation { law, witness };

    let objects: Vec<GpdFunctor> = g
        .g0()
        .elements()
        .map(|x| {
            let unit = g.unit_of(x);
            GpdFunctor::new(
                k,
                k,
                (0..k.n_objects()).map(|b| action.act_obj(x, b)).collect(),
                (0..k.n_arrows()).map(|sigma| action.act_arr(unit, sigma)).collect(),
            )
        })
        .collect::<Result<_, _>>()?;

    let mut naturality_squares = 0;
    let mut arrows = Vec::with_capacity(g.g1().order());
    for gamma in g.g1().elements() {
        let component = (0..k.n_objects()).map(|b| action.act_arr(gamma, k.unit(b))).collect();
        let nat = NatTransf::new(
            k,
            k,
            objects[g.source(gamma)].clone(),
            objects[g.target(gamma)].clone(),
            component,
        )
        .map_err(|_| violation("action on an arrow is natural", vec![gamma]))?;
        naturality_squares += k.n_arrows();
        arrows.push(nat);
    }

    let identity = GpdFunctor::identity(k);
    if objects[g.e0()] != identity {
        return Err(violation("identity object acts as the identity functor", vec![]));
    }
    if arrows[g.e1()] != NatTransf::identity(&identity, k) {
        return Err(violation("identity arrow acts as the identity transformation", vec![]));
    }

    let mut object_pairs = 0;
    for x in g.g0().elements() {
        for y in g.g0().elements() {
            object_pairs += 1;
            if objects[g.g0().mul(x, y)] != objects[x].after(&objects[y]) {
                return Err(violation("acting by x y composes the functors", vec![x, y]));
            }
        }
    }
    let mut horizontal_pairs = 0;
    for g2 in g.g1().elements() {
        for g1 in g.g1().elements() {
            horizontal_pairs += 1;
            if horizontal_compose(k, &arrows[g2], &arrows[g1]).as_ref() != Ok(&arrows[g.g1().mul(g2, g1)]) {
                return Err(violation(
                    "acting by a product of arrows is horizontal composition",
                    vec![g2, g1],
                ));
            }
        }
    }
    Ok(Action2Hom {
        objects,
        arrows,
        report: HomLawReport {
            naturality_squares,
            horizontal_pairs,
            object_pairs,
            unit_laws: 2,
        },
    })
}

/// The action of a 2-group on its own groupoid by multiplication,
/// `L_x(sigma) = 1_x sigma` and `L_gamma(a) = gamma 1_a`.
pub fn left_regular(g: &Internal2Group) -> Action2Hom {
    let action = Action2::new(
        g.clone(),
        FiniteGroupoid::from_internal(g),
        |x, b| g.g0().mul(x, b),
        |gamma, sigma| g.g1().mul(gamma, sigma),
    )
    .expect("multiplication is an action");
    action_to_hom(&action).expect("left-regular action induces a homomorphism")
}

/// Checks `(b2 . b1) o (a2 . a1) = (b2 o a2) . (b1 o a1)` where `.` is
/// vertical and `o` horizontal composition, over all vertically composable
/// pairs `(b2, b1)` and `(a2, a1)` drawn from `transformations`.
/// Returns `(quadruples checked, failures)`.
pub fn check_middle_four(k: &FiniteGroupoid, transformations: &[NatTransf]) -> (usize, usize) {
    let pairs: Vec<(usize, usize)> = (0..transformations.len())
        .flat_map(|i| (0..transformations.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| transformations[i].src() == transformations[j].dst())
        .collect();
    let (mut checked, mut failures) = (0, 0);
    for &(b2, b1) in &pairs {
        let beta = vertical_compose(k, &transformations[b2], &transformations[b1]).unwrap();
        for &(a2, a1) in &pairs {
            checked += 1;
            let alpha = vertical_compose(k, &transformations[a2], &transformations[a1]).unwrap();
            let lhs = horizontal_compose(k, &beta, &alpha);
            let rhs = match (
                horizontal_compose(k, &transformations[b2], &transformations[a2]),
                horizontal_compose(k, &transformations[b1], &transformations[a1]),
            ) {
                (Ok(top), Ok(bottom)) => vertical_compose(k, &top, &bottom),
                (Err(e), _) | (_, Err(e)) => Err(e),
            };
            if lhs.is_err() || lhs != rhs {
                failures += 1;
            }
        }
    }
    (checked, failures)
}
