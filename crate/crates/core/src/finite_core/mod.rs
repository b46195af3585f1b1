//! Exact finite groups, crossed modules and the strict 2-groups they generate.

mod crossed;
mod group;
mod two_group;

use thiserror::Error;

pub use crossed::{CrossedModule, CrossedModuleAxiom};
pub use group::{build_group, FiniteGroup, GroupError, GroupHom, EXHAUSTIVE_ASSOCIATIVITY_LIMIT};
pub use two_group::{
    action_groupoid_iso, check_interchange, check_interchange_seeded, compose_via_multiplication,
    source_kernel_matches, two_group_from_crossed_module, ActionGroupoidIso, CheckMode, InterchangeReport,
    InterchangeViolation, Internal2Group, EXHAUSTIVE_ORDER_CAP, SAMPLED_PAIRS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwoGroupError {
    #[error("invalid group: {0}")]
    Group(GroupError),
    #[error("structure map `{map}` is not a homomorphism: {source}")]
    StructureMap {
        map: &'static str,
        #[source]
        source: GroupError,
    },
    #[error("invalid action of element {element}: {reason}")]
    InvalidAction { element: usize, reason: String },
    #[error("crossed-module axiom violated ({axiom}) at {witness:?}")]
    CrossedModuleAxiomViolation {
        axiom: CrossedModuleAxiom,
        witness: (usize, usize),
    },
    #[error("category axiom violated: {law} (witness {witness:?})")]
    CategoryAxiom { law: &'static str, witness: Vec<usize> },
    #[error("composition table has {len} entries, expected {expected}")]
    CompTableLength { len: usize, expected: usize },
    #[error("arrows {sigma} and {gamma} are not composable")]
    NotComposable { sigma: usize, gamma: usize },
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::{build_group, CrossedModule, FiniteGroup};

    /// Z/2 x Z/2 with bitwise xor on the indices.
    pub fn klein_four() -> FiniteGroup {
        let rows: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        build_group(&rows).unwrap()
    }

    /// Permutations of three points in lexicographic order, composed as
    /// `(p q)(i) = p(q(i))`.
    pub fn symmetric3() -> (FiniteGroup, Vec<[usize; 3]>) {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
        let rows = perms
            .iter()
            .map(|p| perms.iter().map(|q| index([p[q[0]], p[q[1]], p[q[2]]])).collect())
            .collect::<Vec<Vec<_>>>();
        (build_group(&rows).unwrap(), perms)
    }

    /// `(Z/2, Z/2, id, trivial)`.
    pub fn f1() -> CrossedModule {
        let z2 = FiniteGroup::cyclic(2);
        CrossedModule::new(
            z2.clone(),
            z2.clone(),
            vec![0, 1],
            CrossedModule::trivial_action(&z2, &z2),
        )
        .unwrap()
    }

    /// `(Z/3, Z/2, trivial, inversion)`.
    pub fn f2() -> CrossedModule {
        CrossedModule::new(
            FiniteGroup::cyclic(3),
            FiniteGroup::cyclic(2),
            vec![0, 0, 0],
            vec![vec![0, 1, 2], vec![0, 2, 1]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::*;
    use super::*;

    #[test]
    fn s3_from_permutations() {
        let (s3, perms) = symmetric3();
        assert_eq!(s3.order(), 6);
        assert_eq!(perms[s3.identity()], [0, 1, 2]);
        assert!(!s3.is_abelian());
    }

    #[test]
    fn f1_counts() {
        let g = two_group_from_crossed_module(&f1()).unwrap();
        assert_eq!(g.g1().order(), 4);
        assert_eq!(g.composable_pairs().len(), 8);
        let report = check_interchange(&g);
        assert_eq!(report.pairs_checked, 64);
        assert!(report.passed());
    }

    #[test]
    fn f2_is_s3_with_equal_source_and_target() {
        let g = two_group_from_crossed_module(&f2()).unwrap();
        assert_eq!(g.g1().order(), 6);
        assert!(!g.g1().is_abelian());
        assert!(g.g1().elements().all(|a| g.source(a) == g.target(a)));
        // Oracle: count the fiber product by brute force.
        let fiber = (0..6)
            .flat_map(|a| (0..6).map(move |b| (a, b)))
            .filter(|&(a, b)| g.source(a) == g.target(b))
            .count();
        assert_eq!(fiber, 18);
        assert_eq!(check_interchange(&g).pairs_checked, 324);
    }

    #[test]
    fn peiffer_failure_on_s3() {
        let (s3, _) = symmetric3();
        let one = FiniteGroup::trivial();
        let err = CrossedModule::new(
            s3.clone(),
            one.clone(),
            vec![0; 6],
            CrossedModule::trivial_action(&s3, &one),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            TwoGroupError::CrossedModuleAxiomViolation {
                axiom: CrossedModuleAxiom::Peiffer,
                ..
            }
        ));
    }

    #[test]
    fn lemma_composition_matches_table() {
        for cm in [f1(), f2()] {
            let g = two_group_from_crossed_module(&cm).unwrap();
            for &(sigma, gamma) in g.composable_pairs() {
                assert_eq!(
                    Some(compose_via_multiplication(&g, sigma, gamma).unwrap()),
                    g.compose(sigma, gamma)
                );
            }
        }
    }

    #[test]
    fn not_composable_is_reported() {
        let g = two_group_from_crossed_module(&f1()).unwrap();
        // (h, g) = (0, 1) has source 1; (0, 0) has target 0.
        assert_eq!(
            compose_via_multiplication(&g, 1, 0),
            Err(TwoGroupError::NotComposable { sigma: 1, gamma: 0 })
        );
        let x = g.unit_of(1);
        assert_eq!(compose_via_multiplication(&g, x, x), Ok(x));
    }

    #[test]
    fn corrupted_composition_shows_violation() {
        let g = two_group_from_crossed_module(&f2()).unwrap();
        let mut comp = g.comp_table().to_vec();
        comp[5] = (comp[5] + 1) % 6;
        let bad = Internal2Group::from_parts(
            g.g0().clone(),
            g.g1().clone(),
            g.source_hom().clone(),
            g.target_hom().clone(),
            g.unit_hom().clone(),
            comp,
        )
        .unwrap();
        let report = check_interchange(&bad);
        assert!(!report.passed());
        assert!(!report.witnesses.is_empty());
        assert!(bad.validate().is_err());
    }

    #[test]
    fn action_groupoid_on_fixtures() {
        let g1 = two_group_from_crossed_module(&f1()).unwrap();
        let iso = action_groupoid_iso(&g1);
        assert_eq!(iso.kernel.order(), 2);
        assert!(iso.verified());

        let cm = f2();
        let g2 = two_group_from_crossed_module(&cm).unwrap();
        let iso = action_groupoid_iso(&g2);
        assert_eq!(iso.kernel.order(), 3);
        assert_eq!(iso.pairs_checked, 18);
        assert!(iso.verified());
        assert!(iso.action_is_trivial(&g2));
        assert!(source_kernel_matches(&cm, &g2));
    }

    #[test]
    fn one_object_two_group() {
        let z4 = FiniteGroup::cyclic(4);
        let one = FiniteGroup::trivial();
        let cm = CrossedModule::new(
            z4.clone(),
            one.clone(),
            vec![0; 4],
            CrossedModule::trivial_action(&z4, &one),
        )
        .unwrap();
        let g = two_group_from_crossed_module(&cm).unwrap();
        let iso = action_groupoid_iso(&g);
        assert_eq!(iso.kernel.order(), 4);
        assert!(iso.action_is_trivial(&g));
        assert!(iso.verified());
    }
}
