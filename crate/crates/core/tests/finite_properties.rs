use proptest::prelude::*;
use twogroup::finite_core::{
    action_groupoid_iso, build_group, check_interchange, compose_via_multiplication, source_kernel_matches,
    two_group_from_crossed_module, CheckMode, CrossedModule, FiniteGroup, TwoGroupError,
};
use twogroup::gpd_cat::{
    aut_2group, check_middle_four, horizontal_compose, vertical_compose, whisker_left, whisker_right, FiniteGroupoid,
};

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Crossed modules on cyclic groups `Z/n -> Z/m`: either a boundary
/// `k -> c k` with trivial action, or the trivial boundary with `x` acting
/// by multiplication with `u^x` for a unit `u` of order dividing `m`.
fn cyclic_crossed_module(n: usize, m: usize, twisted: bool, choice: usize) -> CrossedModule {
    let (h, g) = (FiniteGroup::cyclic(n), FiniteGroup::cyclic(m));
    if twisted {
        let units: Vec<usize> = (1..=n)
            .map(|u| u % n.max(1))
            .filter(|&u| gcd(u, n) == 1 && (0..m).fold(1 % n, |acc, _| acc * u % n) == 1 % n)
            .collect();
        let u = units[choice % units.len()];
        let action = (0..m)
            .map(|x| {
                let ux = (0..x).fold(1 % n, |acc, _| acc * u % n);
                (0..n).map(|k| k * ux % n).collect()
            })
            .collect();
        CrossedModule::new(h, g, vec![0; n], action).unwrap()
    } else {
        let slopes: Vec<usize> = (0..m).filter(|c| (n * c).is_multiple_of(m)).collect();
        let c = slopes[choice % slopes.len()];
        let action = CrossedModule::trivial_action(&h, &g);
        CrossedModule::new(h, g, (0..n).map(|k| k * c % m).collect(), action).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn crossed_modules_give_2_groups(n in 1usize..=6, m in 1usize..=4, twisted: bool, choice in 0usize..8) {
        let cm = cyclic_crossed_module(n, m, twisted, choice);
        let g = two_group_from_crossed_module(&cm).unwrap();
        prop_assert_eq!(g.g1().order(), n * m);
        prop_assert_eq!(g.composable_pairs().len(), n * n * m);

        let r = check_interchange(&g);
        prop_assert_eq!(r.mode, CheckMode::Exhaustive);
        prop_assert_eq!(r.violations, 0);
        prop_assert_eq!(r.pairs_checked, (n * n * m).pow(2));

        for &(sigma, gamma) in g.composable_pairs() {
            prop_assert_eq!(Some(compose_via_multiplication(&g, sigma, gamma).unwrap()), g.compose(sigma, gamma));
        }
        prop_assert!(action_groupoid_iso(&g).verified());
        prop_assert!(source_kernel_matches(&cm, &g));
    }

    #[test]
    fn composition_inverses_cancel(n in 1usize..=5, m in 1usize..=4, twisted: bool, choice in 0usize..8) {
        let g = two_group_from_crossed_module(&cyclic_crossed_module(n, m, twisted, choice)).unwrap();
        for gamma in g.g1().elements() {
            let inv = g.comp_inverse(gamma).unwrap();
            prop_assert_eq!(g.compose(inv, gamma), Some(g.unit_of(g.source(gamma))));
            prop_assert_eq!(g.compose(gamma, inv), Some(g.unit_of(g.target(gamma))));
        }
    }

    #[test]
    fn aut_of_a_cyclic_group_is_a_2_group(n in 1usize..=6) {
        let k = FiniteGroupoid::one_object(&FiniteGroup::cyclic(n));
        let aut = aut_2group(&k, 64).unwrap();
        // Automorphisms of Z/n are the units; every pair of equal functors
        // is joined by one transformation per element.
        let units = (0..n.max(1)).filter(|&u| gcd(u, n) == 1).count().max(1);
        prop_assert_eq!(aut.functors.len(), units);
        prop_assert_eq!(aut.transformations.len(), units * n);
        prop_assert_eq!(check_interchange(&aut.two_group).violations, 0);
        let (_, failures) = check_middle_four(&k, &aut.transformations);
        prop_assert_eq!(failures, 0);
    }

    #[test]
    fn horizontal_composition_is_associative(n in 2usize..=5, i in 0usize..64, j in 0usize..64, l in 0usize..64) {
        let k = FiniteGroupoid::one_object(&FiniteGroup::cyclic(n));
        let aut = aut_2group(&k, 64).unwrap();
        let t = &aut.transformations;
        let (a, b, c) = (&t[i % t.len()], &t[j % t.len()], &t[l % t.len()]);
        let left = horizontal_compose(&k, &horizontal_compose(&k, c, b).unwrap(), a).unwrap();
        let right = horizontal_compose(&k, c, &horizontal_compose(&k, b, a).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn horizontal_composite_factors_through_whiskers(n in 2usize..=5, i in 0usize..64, j in 0usize..64) {
        let k = FiniteGroupoid::one_object(&FiniteGroup::cyclic(n));
        let aut = aut_2group(&k, 64).unwrap();
        let t = &aut.transformations;
        let (alpha, beta) = (&t[i % t.len()], &t[j % t.len()]);
        let direct = horizontal_compose(&k, beta, alpha).unwrap();
        // n alpha after beta f, for alpha: f => g and beta: k => n.
        let whiskered =
            vertical_compose(&k, &whisker_left(beta.dst(), alpha), &whisker_right(beta, alpha.src())).unwrap();
        prop_assert_eq!(direct, whiskered);
    }
}

#[test]
fn aut_of_a_discrete_groupoid_is_symmetric() {
    for n in 1..=4usize {
        let aut = aut_2group(&FiniteGroupoid::discrete(n), 64).unwrap();
        let factorial: usize = (1..=n).product();
        assert_eq!(aut.functors.len(), factorial);
        assert_eq!(aut.transformations.len(), factorial);
    }
    assert!(aut_2group(&FiniteGroupoid::discrete(5), 64).is_err());
}

#[test]
fn nonabelian_kernel_breaks_peiffer() {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let index = |p: [usize; 3]| perms.iter().position(|&q| q == p).unwrap();
    let rows: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| perms.iter().map(|q| index([p[q[0]], p[q[1]], p[q[2]]])).collect())
        .collect();
    let s3 = build_group(&rows).unwrap();
    let trivial = FiniteGroup::trivial();
    let action = CrossedModule::trivial_action(&s3, &trivial);
    let err = CrossedModule::new(s3, trivial, vec![0; 6], action).unwrap_err();
    assert!(
        matches!(err, TwoGroupError::CrossedModuleAxiomViolation { .. }),
        "{err:?}"
    );
}
