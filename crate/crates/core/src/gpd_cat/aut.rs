use std::collections::HashMap;

use crate::finite_core::{build_group, GroupHom, Internal2Group, TwoGroupError};

use super::{horizontal_compose, vertical_compose, FiniteGroupoid, GpdError, GpdFunctor, NatTransf};

/// `Aut(K)` as a finite 2-group, with the functors and transformations that
/// the indices of its groups stand for.
#[derive(Debug, Clone)]
pub struct AutTwoGroup {
    /// `functors[i]` is object `i` of the 2-group.
    pub functors: Vec<GpdFunctor>,
    /// `transformations[j]` is arrow `j` of the 2-group.
    pub transformations: Vec<NatTransf>,
    pub two_group: Internal2Group,
}

/// Enumerates the automorphisms of `k` and the natural isomorphisms between
/// them and assembles them into a 2-group.
///
/// Objects multiply by composition of functors and arrows by horizontal
/// composition; categorical composition of arrows is vertical composition.
/// Fails with [`GpdError::CapExceeded`] as soon as more than `cap`
/// automorphisms are found.
pub fn aut_2group(k: &FiniteGroupoid, cap: usize) -> Result<AutTwoGroup, GpdError> {
    let functors = automorphisms(k, cap)?;
    let f_index: HashMap<&GpdFunctor, usize> = functors.iter().enumerate().map(|(i, f)| (f, i)).collect();

    let mut transformations = Vec::new();
    for f in &functors {
        for g in &functors {
            transformations.extend(transformations_between(k, f, g));
        }
    }
    let t_index: HashMap<&NatTransf, usize> = transformations.iter().enumerate().map(|(i, a)| (a, i)).collect();

    let g0_rows: Vec<Vec<usize>> = functors
        .iter()
        .map(|f| functors.iter().map(|g| f_index[&f.after(g)]).collect())
        .collect();
    let g1_rows: Vec<Vec<usize>> = transformations
        .iter()
        .map(|b| {
            transformations
                .iter()
                .map(|a| t_index[&horizontal_compose(k, b, a).expect("endofunctors compose")])
                .collect()
        })
        .collect();
    let g0 = build_group(&g0_rows).map_err(TwoGroupError::from)?;
    let g1 = build_group(&g1_rows).map_err(TwoGroupError::from)?;
    let hom = |map: &'static str, dom, cod, values| {
        GroupHom::new(dom, cod, values).map_err(|source| TwoGroupError::StructureMap { map, source })
    };
    let s = hom(
        "source",
        &g1,
        &g0,
        transformations.iter().map(|a| f_index[a.src()]).collect(),
    )?;
    let t = hom(
        "target",
        &g1,
        &g0,
        transformations.iter().map(|a| f_index[a.dst()]).collect(),
    )?;
    let unit = hom(
        "unit",
        &g0,
        &g1,
        functors.iter().map(|f| t_index[&NatTransf::identity(f, k)]).collect(),
    )?;
    let two_group = Internal2Group::from_composition(g0, g1, s, t, unit, |sigma, gamma| {
        let v = vertical_compose(k, &transformations[sigma], &transformations[gamma]).expect("composable");
        t_index[&v]
    })?;
    two_group.validate()?;
    Ok(AutTwoGroup {
        functors,
        transformations,
        two_group,
    })
}

/// All bijective endofunctors of `k`, by backtracking over object
/// permutations and then arrow assignments.
pub fn automorphisms(k: &FiniteGroupoid, cap: usize) -> Result<Vec<GpdFunctor>, GpdError> {
    let mut found = Vec::new();
    let mut perm = Vec::with_capacity(k.n_objects());
    let mut used = vec![false; k.n_objects()];
    object_perms(k, cap, &mut perm, &mut used, &mut found)?;
    Ok(found)
}

fn object_perms(
    k: &FiniteGroupoid,
    cap: usize,
    perm: &mut Vec<usize>,
    used: &mut [bool],
    found: &mut Vec<GpdFunctor>,
) -> Result<(), GpdError> {
    if perm.len() == k.n_objects() {
        let mut arr = vec![usize::MAX; k.n_arrows()];
        let mut taken = vec![false; k.n_arrows()];
        return arrow_maps(k, cap, perm, 0, &mut arr, &mut taken, found);
    }
    for y in 0..k.n_objects() {
        if !used[y] {
            used[y] = true;
            perm.push(y);
            object_perms(k, cap, perm, used, found)?;
            perm.pop();
            used[y] = false;
        }
    }
    Ok(())
}

fn arrow_maps(
    k: &FiniteGroupoid,
    cap: usize,
    obj: &[usize],
    next: usize,
    arr: &mut [usize],
    taken: &mut [bool],
    found: &mut Vec<GpdFunctor>,
) -> Result<(), GpdError> {
    if next == k.n_arrows() {
        if let Ok(f) = GpdFunctor::new(k, k, obj.to_vec(), arr.to_vec()) {
            found.push(f);
            if found.len() > cap {
                return Err(GpdError::CapExceeded { cap });
            }
        }
        return Ok(());
    }
    let candidates: Vec<usize> = k.hom(obj[k.source(next)], obj[k.target(next)]).collect();
    for c in candidates {
        if taken[c] {
            continue;
        }
        arr[next] = c;
        let consistent = (0..=next).all(|b| {
            (0..=next).all(|a| match k.compose(b, a) {
                Some(ba) if ba <= next => k.compose(arr[b], arr[a]) == Some(arr[ba]),
                _ => true,
            })
        });
        if consistent {
            taken[c] = true;
            arrow_maps(k, cap, obj, next + 1, arr, taken, found)?;
            taken[c] = false;
        }
    }
    arr[next] = usize::MAX;
    Ok(())
}

/// Every natural transformation `f => g`.
pub fn transformations_between(k: &FiniteGroupoid, f: &GpdFunctor, g: &GpdFunctor) -> Vec<NatTransf> {
    let choices: Vec<Vec<usize>> = (0..k.n_objects())
        .map(|x| k.hom(f.obj(x), g.obj(x)).collect())
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut pick = vec![0; choices.len()];
    loop {
        let component = pick.iter().zip(&choices).map(|(&i, c)| c[i]).collect();
        if let Ok(n) = NatTransf::new(k, k, f.clone(), g.clone(), component) {
            out.push(n);
        }
        // Odometer increment over the component choices.
        let mut pos = 0;
        loop {
            if pos == pick.len() {
                return out;
            }
            pick[pos] += 1;
            if pick[pos] < choices[pos].len() {
                break;
            }
            pick[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_core::FiniteGroup;

    #[test]
    fn discrete_two_objects() {
        let aut = aut_2group(&FiniteGroupoid::discrete(2), 10).unwrap();
        assert_eq!(aut.functors.len(), 2);
        assert_eq!(aut.transformations.len(), 2);
        assert_eq!(aut.two_group.g0().order(), 2);
    }

    #[test]
    fn cyclic_three() {
        let aut = aut_2group(&FiniteGroupoid::one_object(&FiniteGroup::cyclic(3)), 10).unwrap();
        assert_eq!(aut.two_group.g0().order(), 2);
        // Three components at the single object for each automorphism.
        assert_eq!(aut.two_group.g1().order(), 6);
        assert!(!aut.two_group.g1().is_abelian());
    }

    #[test]
    fn cap_exceeded() {
        assert_eq!(
            aut_2group(&FiniteGroupoid::discrete(10), 100).unwrap_err(),
            GpdError::CapExceeded { cap: 100 }
        );
    }
}
