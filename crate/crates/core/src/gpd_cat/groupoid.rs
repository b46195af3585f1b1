use crate::finite_core::{FiniteGroup, Internal2Group};

use super::GpdError;

/// A finite groupoid with dense composition table.
///
/// `compose(b, a)` is "first `a`, then `b`" and is defined when
/// `source(b) == target(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    n_obj: usize,
    s: Vec<usize>,
    t: Vec<usize>,
    unit: Vec<usize>,
    comp: Vec<Option<usize>>,
    inv: Vec<usize>,
}

impl FiniteGroupoid {
    /// Builds and validates a groupoid. `comp` is only queried on pairs with
    /// `source(b) == target(a)`.
    pub fn new(
        n_obj: usize,
        s: Vec<usize>,
        t: Vec<usize>,
        unit: Vec<usize>,
        comp: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, GpdError> {
        let n_arr = s.len();
        let axiom = |law: &'static str, witness: Vec<usize>| GpdError::GroupoidAxiom { law, witness };
        if t.len() != n_arr || unit.len() != n_obj {
            return Err(axiom(
                "structure arrays have consistent lengths",
                vec![s.len(), t.len(), unit.len()],
            ));
        }
        if let Some(a) = (0..n_arr).find(|&a| s[a] >= n_obj || t[a] >= n_obj) {
            return Err(axiom("source and target are objects", vec![a]));
        }
        if let Some(x) = (0..n_obj).find(|&x| unit[x] >= n_arr || s[unit[x]] != x || t[unit[x]] != x) {
            return Err(axiom("unit arrow runs from x to x", vec![x]));
        }
        let mut table = vec![None; n_arr * n_arr];
        for b in 0..n_arr {
            for a in 0..n_arr {
                if s[b] == t[a] {
                    let c = comp(b, a);
                    if c >= n_arr || s[c] != s[a] || t[c] != t[b] {
                        return Err(axiom("composite runs from s(a) to t(b)", vec![b, a]));
                    }
                    table[b * n_arr + a] = Some(c);
                }
            }
        }
        let mut g = Self {
            n_obj,
            s,
            t,
            unit,
            comp: table,
            inv: Vec::new(),
        };
        for a in 0..n_arr {
            if g.compose(g.unit[g.t[a]], a) != Some(a) || g.compose(a, g.unit[g.s[a]]) != Some(a) {
                return Err(axiom("unit law", vec![a]));
            }
        }
        for c in 0..n_arr {
            for b in (0..n_arr).filter(|&b| g.s[c] == g.t[b]) {
                for a in (0..n_arr).filter(|&a| g.s[b] == g.t[a]) {
                    let lhs = g.compose(g.compose(c, b).unwrap(), a);
                    let rhs = g.compose(c, g.compose(b, a).unwrap());
                    if lhs != rhs {
                        return Err(axiom("associativity", vec![c, b, a]));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n_arr);
        for a in 0..n_arr {
            let bar = (0..n_arr)
                .find(|&b| g.compose(b, a) == Some(g.unit[g.s[a]]) && g.compose(a, b) == Some(g.unit[g.t[a]]))
                .ok_or_else(|| axiom("every arrow is invertible", vec![a]))?;
            inv.push(bar);
        }
        g.inv = inv;
        Ok(g)
    }

    /// The underlying groupoid of a finite 2-group.
    pub fn from_internal(g: &Internal2Group) -> Self {
        let n1 = g.g1().order();
        Self::new(
            g.g0().order(),
            (0..n1).map(|a| g.source(a)).collect(),
            (0..n1).map(|a| g.target(a)).collect(),
            g.g0().elements().map(|x| g.unit_of(x)).collect(),
            |b, a| g.compose(b, a).expect("composable"),
        )
        .expect("a valid 2-group is a groupoid")
    }

    /// Objects only, identity arrows only.
    pub fn discrete(n_obj: usize) -> Self {
        let ids: Vec<usize> = (0..n_obj).collect();
        Self::new(n_obj, ids.clone(), ids.clone(), ids, |b, _| b).expect("discrete groupoid")
    }

    /// The one-object groupoid with arrows the elements of `group`.
    pub fn one_object(group: &FiniteGroup) -> Self {
        let n = group.order();
        Self::new(1, vec![0; n], vec![0; n], vec![group.identity()], |b, a| {
            group.mul(b, a)
        })
        .expect("a group is a one-object groupoid")
    }

    /// `self x other` with object `(x, y)` at `x * |other objects| + y` and
    /// arrow `(a, b)` at `a * |other arrows| + b`.
    pub fn product(&self, other: &Self) -> Self {
        let (no, na) = (other.n_obj, other.n_arrows());
        let n = self.n_arrows() * na;
        let split = |p: usize| (p / na, p % na);
        Self::new(
            self.n_obj * no,
            (0..n).map(|p| self.s[split(p).0] * no + other.s[split(p).1]).collect(),
            (0..n).map(|p| self.t[split(p).0] * no + other.t[split(p).1]).collect(),
            (0..self.n_obj * no)
                .map(|q| self.unit[q / no] * na + other.unit[q % no])
                .collect(),
            |q, p| {
                let ((a2, b2), (a1, b1)) = (split(q), split(p));
                self.compose(a2, a1).unwrap() * na + other.compose(b2, b1).unwrap()
            },
        )
        .expect("product of groupoids")
    }

    pub fn n_objects(&self) -> usize {
        self.n_obj
    }

    pub fn n_arrows(&self) -> usize {
        self.s.len()
    }

    pub fn source(&self, a: usize) -> usize {
        self.s[a]
    }

    pub fn target(&self, a: usize) -> usize {
        self.t[a]
    }

    pub fn unit(&self, x: usize) -> usize {
        self.unit[x]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    #[inline]
    pub fn compose(&self, b: usize, a: usize) -> Option<usize> {
        self.comp[b * self.n_arrows() + a]
    }

    /// Arrows from `x` to `y`.
    pub fn hom(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_arrows()).filter(move |&a| self.s[a] == x && self.t[a] == y)
    }

    /// Composable pairs `(b, a)` with `source(b) == target(a)`.
    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n_arrows();
        (0..n * n)
            .filter(move |&i| self.comp[i].is_some())
            .map(move |i| (i / n, i % n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn discrete_and_one_object() {
        let d = FiniteGroupoid::discrete(3);
        assert_eq!(d.n_arrows(), 3);
        assert_eq!(d.compose(1, 0), None);
        let z3 = FiniteGroupoid::one_object(&FiniteGroup::cyclic(3));
        assert_eq!(z3.inverse(1), 2);
        assert_eq!(z3.hom(0, 0).count(), 3);
    }

    #[test]
    fn product_counts() {
        let p = FiniteGroupoid::discrete(2).product(&FiniteGroupoid::one_object(&FiniteGroup::cyclic(3)));
        assert_eq!(p.n_objects(), 2);
        assert_eq!(p.n_arrows(), 6);
        assert_eq!(p.composable_pairs().count(), 18);
    }

    #[test]
    fn missing_inverse_is_rejected() {
        // The "walking arrow" 0 -> 1 is a category but not a groupoid.
        let err = FiniteGroupoid::new(2, vec![0, 1, 0], vec![0, 1, 1], vec![0, 1], |b, a| {
            if b == 2 || a == 2 {
                2
            } else {
                b
            }
        })
        .unwrap_err();
        assert!(matches!(
            err,
            GpdError::GroupoidAxiom {
                law: "every arrow is invertible",
                ..
            }
        ));
    }
}
