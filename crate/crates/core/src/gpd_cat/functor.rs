use super::{FiniteGroupoid, GpdError};

/// A functor between finite groupoids as a pair of index arrays.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GpdFunctor {
    obj_map: Vec<usize>,
    arr_map: Vec<usize>,
}

impl GpdFunctor {
    /// Checks that the maps preserve source, target, units and composition.
    pub fn new(
        dom: &FiniteGroupoid,
        cod: &FiniteGroupoid,
        obj_map: Vec<usize>,
        arr_map: Vec<usize>,
    ) -> Result<Self, GpdError> {
        let bad = |law: &'static str, witness: Vec<usize>| GpdError::NotFunctor { law, witness };
        if obj_map.len() != dom.n_objects() || arr_map.len() != dom.n_arrows() {
            return Err(bad("maps cover the domain", vec![obj_map.len(), arr_map.len()]));
        }
        if let Some(x) = (0..dom.n_objects()).find(|&x| obj_map[x] >= cod.n_objects()) {
            return Err(bad("object image lies in the codomain", vec![x]));
        }
        for a in 0..dom.n_arrows() {
            let fa = arr_map[a];
            if fa >= cod.n_arrows()
                || cod.source(fa) != obj_map[dom.source(a)]
                || cod.target(fa) != obj_map[dom.target(a)]
            {
                return Err(bad("preserves source and target", vec![a]));
            }
        }
        if let Some(x) = (0..dom.n_objects()).find(|&x| arr_map[dom.unit(x)] != cod.unit(obj_map[x])) {
            return Err(bad("preserves units", vec![x]));
        }
        for (b, a) in dom.composable_pairs() {
            if cod.compose(arr_map[b], arr_map[a]) != Some(arr_map[dom.compose(b, a).unwrap()]) {
                return Err(bad("preserves composition", vec![b, a]));
            }
        }
        Ok(Self { obj_map, arr_map })
    }

    pub fn identity(g: &FiniteGroupoid) -> Self {
        Self {
            obj_map: (0..g.n_objects()).collect(),
            arr_map: (0..g.n_arrows()).collect(),
        }
    }

    #[inline]
    pub fn obj(&self, x: usize) -> usize {
        self.obj_map[x]
    }

    #[inline]
    pub fn arr(&self, a: usize) -> usize {
        self.arr_map[a]
    }

    pub fn obj_map(&self) -> &[usize] {
        &self.obj_map
    }

    pub fn arr_map(&self) -> &[usize] {
        &self.arr_map
    }

    /// `self` after `first`.
    pub fn after(&self, first: &GpdFunctor) -> GpdFunctor {
        GpdFunctor {
            obj_map: first.obj_map.iter().map(|&x| self.obj_map[x]).collect(),
            arr_map: first.arr_map.iter().map(|&a| self.arr_map[a]).collect(),
        }
    }

    pub fn is_bijective(&self) -> bool {
        is_permutation(&self.obj_map) && is_permutation(&self.arr_map)
    }

    /// The inverse of a bijective endofunctor.
    pub fn inverse(&self) -> Option<GpdFunctor> {
        if !self.is_bijective() {
            return None;
        }
        let invert = |m: &[usize]| {
            let mut out = vec![0; m.len()];
            for (i, &v) in m.iter().enumerate() {
                out[v] = i;
            }
            out
        };
        Some(GpdFunctor {
            obj_map: invert(&self.obj_map),
            arr_map: invert(&self.arr_map),
        })
    }
}

fn is_permutation(m: &[usize]) -> bool {
    let mut seen = vec![false; m.len()];
    m.iter().all(|&v| v < m.len() && !std::mem::replace(&mut seen[v], true))
}

/// A natural transformation `src => dst` given by its components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NatTransf {
    src: GpdFunctor,
    dst: GpdFunctor,
    component: Vec<usize>,
}

impl NatTransf {
    /// Checks that `component[x]` runs `src(x) -> dst(x)` and that
    /// `component[y] * src(a) = dst(a) * component[x]` for every `a: x -> y`.
    pub fn new(
        dom: &FiniteGroupoid,
        cod: &FiniteGroupoid,
        src: GpdFunctor,
        dst: GpdFunctor,
        component: Vec<usize>,
    ) -> Result<Self, GpdError> {
        if component.len() != dom.n_objects() {
            return Err(GpdError::NotNatural {
                law: "one component per object",
                witness: component.len(),
            });
        }
        for (x, &c) in component.iter().enumerate() {
            if c >= cod.n_arrows() || cod.source(c) != src.obj(x) || cod.target(c) != dst.obj(x) {
                return Err(GpdError::NotNatural {
                    law: "component runs from src(x) to dst(x)",
                    witness: x,
                });
            }
        }
        let nat = Self { src, dst, component };
        if let Some(a) = nat.naturality_failure(dom, cod) {
            return Err(GpdError::NotNatural {
                law: "naturality square",
                witness: a,
            });
        }
        Ok(nat)
    }

    /// First arrow of `dom` whose naturality square fails.
    pub fn naturality_failure(&self, dom: &FiniteGroupoid, cod: &FiniteGroupoid) -> Option<usize> {
        (0..dom.n_arrows()).find(|&a| {
            let (x, y) = (dom.source(a), dom.target(a));
            cod.compose(self.component[y], self.src.arr(a)) != cod.compose(self.dst.arr(a), self.component[x])
        })
    }

    pub fn identity(f: &GpdFunctor, cod: &FiniteGroupoid) -> Self {
        Self {
            src: f.clone(),
            dst: f.clone(),
            component: f.obj_map.iter().map(|&x| cod.unit(x)).collect(),
        }
    }

    pub fn src(&self) -> &GpdFunctor {
        &self.src
    }

    pub fn dst(&self) -> &GpdFunctor {
        &self.dst
    }

    #[inline]
    pub fn at(&self, x: usize) -> usize {
        self.component[x]
    }

    pub fn components(&self) -> &[usize] {
        &self.component
    }
}

/// `beta . alpha` with components `beta(x) * alpha(x)`.
pub fn vertical_compose(cod: &FiniteGroupoid, beta: &NatTransf, alpha: &NatTransf) -> Result<NatTransf, GpdError> {
    if beta.src != alpha.dst {
        return Err(GpdError::NotComposable("source of beta differs from target of alpha"));
    }
    let component = (0..alpha.component.len())
        .map(|x| cod.compose(beta.at(x), alpha.at(x)).expect("components match"))
        .collect();
    Ok(NatTransf {
        src: alpha.src.clone(),
        dst: beta.dst.clone(),
        component,
    })
}

/// For `alpha: f => g` between functors `A -> B` and `beta: k => n` between
/// functors `B -> C`, the transformation `k f => n g` with component
/// `n(alpha_a) * beta_{f(a)}`, which equals `beta_{g(a)} * k(alpha_a)`.
/// Both forms are computed and compared.
pub fn horizontal_compose(c: &FiniteGroupoid, beta: &NatTransf, alpha: &NatTransf) -> Result<NatTransf, GpdError> {
    let b_objects = beta.component.len();
    if alpha
        .src
        .obj_map
        .iter()
        .chain(&alpha.dst.obj_map)
        .any(|&y| y >= b_objects)
    {
        return Err(GpdError::NotComposable("alpha lands outside the domain of beta"));
    }
    let mut component = Vec::with_capacity(alpha.component.len());
    for a in 0..alpha.component.len() {
        let alpha_a = alpha.at(a);
        let lower = c.compose(beta.dst.arr(alpha_a), beta.at(alpha.src.obj(a)));
        let upper = c.compose(beta.at(alpha.dst.obj(a)), beta.src.arr(alpha_a));
        match (lower, upper) {
            (Some(l), Some(u)) if l == u => component.push(l),
            _ => return Err(GpdError::NotComposable("beta is not natural on the image of alpha")),
        }
    }
    Ok(NatTransf {
        src: beta.src.after(&alpha.src),
        dst: beta.dst.after(&alpha.dst),
        component,
    })
}

/// `beta` whiskered by `f` on the right: component `beta(f(x))`.
pub fn whisker_right(beta: &NatTransf, f: &GpdFunctor) -> NatTransf {
    NatTransf {
        src: beta.src.after(f),
        dst: beta.dst.after(f),
        component: f.obj_map.iter().map(|&x| beta.at(x)).collect(),
    }
}

/// `alpha` whiskered by `k` on the left: component `k(alpha(x))`.
pub fn whisker_left(k: &GpdFunctor, alpha: &NatTransf) -> NatTransf {
    NatTransf {
        src: k.after(&alpha.src),
        dst: k.after(&alpha.dst),
        component: alpha.component.iter().map(|&a| k.arr(a)).collect(),
    }
}
