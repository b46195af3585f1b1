//! Finite crossed modules `(H, G, boundary, action)`.

use std::fmt;

use super::group::{FiniteGroup, GroupError, GroupHom};
use super::TwoGroupError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossedModuleAxiom {
    /// `boundary(g . h) = g boundary(h) g^-1`
    Equivariance,
    /// `boundary(h) . h' = h h' h^-1`
    Peiffer,
}

impl fmt::Display for CrossedModuleAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Equivariance => f.write_str("equivariance"),
            Self::Peiffer => f.write_str("Peiffer identity"),
        }
    }
}

/// Crossed-module data. `action[g]` is the permutation of `H` by which `g`
/// acts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossedModule {
    h: FiniteGroup,
    g: FiniteGroup,
    boundary: GroupHom,
    action: Vec<Vec<usize>>,
}

impl CrossedModule {
    /// Builds and checks every crossed-module axiom.
    pub fn new(
        h: FiniteGroup,
        g: FiniteGroup,
        boundary: Vec<usize>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, TwoGroupError> {
        let cm = Self::from_parts(h, g, boundary, action)?;
        cm.check_axioms()?;
        Ok(cm)
    }

    /// Checks only that `boundary` is a homomorphism and that `action` is a
    /// homomorphism `G -> Aut(H)`; equivariance and Peiffer are left to
    /// [`CrossedModule::check_axioms`].
    pub fn from_parts(
        h: FiniteGroup,
        g: FiniteGroup,
        boundary: Vec<usize>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self, TwoGroupError> {
        let boundary = GroupHom::new(&h, &g, boundary).map_err(|source| TwoGroupError::StructureMap {
            map: "boundary",
            source,
        })?;
        if action.len() != g.order() {
            return Err(TwoGroupError::InvalidAction {
                element: action.len(),
                reason: format!("{} permutations given for a group of order {}", action.len(), g.order()),
            });
        }
        for (x, perm) in action.iter().enumerate() {
            GroupHom::new(&h, &h, perm.clone())
                .ok()
                .filter(GroupHom::is_bijective)
                .ok_or_else(|| TwoGroupError::InvalidAction {
                    element: x,
                    reason: "not an automorphism of H".into(),
                })?;
        }
        if action[g.identity()].iter().enumerate().any(|(i, &v)| i != v) {
            return Err(TwoGroupError::InvalidAction {
                element: g.identity(),
                reason: "identity does not act trivially".into(),
            });
        }
        for x in g.elements() {
            for y in g.elements() {
                let xy = g.mul(x, y);
                if h.elements().any(|k| action[xy][k] != action[x][action[y][k]]) {
                    return Err(TwoGroupError::InvalidAction {
                        element: xy,
                        reason: format!("action of {x}*{y} is not the composite of the actions"),
                    });
                }
            }
        }
        Ok(Self { h, g, boundary, action })
    }

    /// Equivariance and the Peiffer identity, checked on every pair.
    pub fn check_axioms(&self) -> Result<(), TwoGroupError> {
        let (h, g) = (&self.h, &self.g);
        for x in g.elements() {
            for k in h.elements() {
                let lhs = self.boundary.apply(self.act(x, k));
                let rhs = g.mul(g.mul(x, self.boundary.apply(k)), g.inv(x));
                if lhs != rhs {
                    return Err(TwoGroupError::CrossedModuleAxiomViolation {
                        axiom: CrossedModuleAxiom::Equivariance,
                        witness: (x, k),
                    });
                }
            }
        }
        for k in h.elements() {
            for k2 in h.elements() {
                let lhs = self.act(self.boundary.apply(k), k2);
                let rhs = h.mul(h.mul(k, k2), h.inv(k));
                if lhs != rhs {
                    return Err(TwoGroupError::CrossedModuleAxiomViolation {
                        axiom: CrossedModuleAxiom::Peiffer,
                        witness: (k, k2),
                    });
                }
            }
        }
        Ok(())
    }

    /// The action of `x` in `G` on `k` in `H`.
    #[inline]
    pub fn act(&self, x: usize, k: usize) -> usize {
        self.action[x][k]
    }

    pub fn h(&self) -> &FiniteGroup {
        &self.h
    }

    pub fn g(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn boundary(&self) -> &GroupHom {
        &self.boundary
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    /// Trivial action of `g` on `h`.
    pub fn trivial_action(h: &FiniteGroup, g: &FiniteGroup) -> Vec<Vec<usize>> {
        vec![h.elements().collect(); g.order()]
    }
}

impl From<GroupError> for TwoGroupError {
    fn from(source: GroupError) -> Self {
        TwoGroupError::Group(source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inversion_action_of_z2_on_z3() {
        let h = FiniteGroup::cyclic(3);
        let g = FiniteGroup::cyclic(2);
        let cm = CrossedModule::new(h.clone(), g.clone(), vec![0; 3], vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap();
        assert_eq!(cm.act(1, 1), 2);
    }

    #[test]
    fn non_automorphism_action_is_rejected() {
        let h = FiniteGroup::cyclic(3);
        let g = FiniteGroup::cyclic(2);
        let err = CrossedModule::new(h, g, vec![0; 3], vec![vec![0, 1, 2], vec![0, 1, 1]]).unwrap_err();
        assert!(matches!(err, TwoGroupError::InvalidAction { element: 1, .. }));
    }

    #[test]
    fn equivariance_violation_names_witness() {
        // Z/2 acting on Z/2 x Z/2 by swapping factors, with the boundary the
        // first projection: the swap does not commute with that projection.
        let v4 = crate::finite_core::tests_support::klein_four();
        let z2 = FiniteGroup::cyclic(2);
        let swap = vec![0, 2, 1, 3];
        let err = CrossedModule::new(v4, z2, vec![0, 1, 0, 1], vec![vec![0, 1, 2, 3], swap]).unwrap_err();
        assert!(matches!(
            err,
            TwoGroupError::CrossedModuleAxiomViolation {
                axiom: CrossedModuleAxiom::Equivariance,
                ..
            }
        ));
    }
}
