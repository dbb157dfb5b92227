mod common;

use std::collections::BTreeSet;

use hopf_galois::groups::*;
use hopf_galois::Error;

fn census_set(g: &FiniteGroup) -> BTreeSet<Vec<Vec<usize>>> {
    enumerate_regular_subgroups(g)
        .unwrap()
        .iter()
        .map(|n| {
            let mut v = n.image_vectors();
            v.sort();
            v
        })
        .collect()
}

#[test]
fn census_matches_transport_oracle_small_orders() {
    for n in 1..=6 {
        for g in common::groups_of_order(n) {
            assert_eq!(census_set(&g), common::brute_force_census(&g), "{g:?}");
        }
    }
}

#[test]
fn census_matches_transport_oracle_order_8() {
    for g in common::groups_of_order(8) {
        assert_eq!(census_set(&g), common::brute_force_census(&g), "{g:?}");
    }
}

#[test]
fn known_census_sizes() {
    assert_eq!(
        enumerate_regular_subgroups(&FiniteGroup::trivial())
            .unwrap()
            .len(),
        1
    );
    assert_eq!(
        enumerate_regular_subgroups(&FiniteGroup::symmetric3())
            .unwrap()
            .len(),
        5
    );
    assert_eq!(
        enumerate_regular_subgroups(&FiniteGroup::quaternion())
            .unwrap()
            .len(),
        22
    );
}

#[test]
fn census_contains_lambda_and_rho() {
    for g in [
        FiniteGroup::symmetric3(),
        FiniteGroup::dihedral(4),
        FiniteGroup::quaternion(),
    ] {
        let census = enumerate_regular_subgroups(&g).unwrap();
        let lam = left_regular(&g);
        let rho = right_regular(&g);
        assert!(!lam.same_set(&rho));
        assert!(census.iter().any(|n| n.same_set(&lam)));
        assert!(census.iter().any(|n| n.same_set(&rho)));
        for n in &census {
            assert!(normalizes(n, &g));
            let again =
                RegularSubgroup::from_permutations(n.elements().to_vec(), g.identity()).unwrap();
            assert_eq!(&again, n);
        }
    }
}

#[test]
fn lambda_and_rho_are_homomorphisms_and_commute() {
    for g in [
        FiniteGroup::symmetric3(),
        FiniteGroup::dihedral(4),
        FiniteGroup::quaternion(),
        FiniteGroup::dihedral(6),
        FiniteGroup::cyclic(12),
    ] {
        for a in g.elements() {
            for b in g.elements() {
                assert_eq!(
                    lambda(&g, a).compose(&lambda(&g, b)),
                    lambda(&g, g.mul(a, b))
                );
                assert_eq!(rho(&g, a).compose(&rho(&g, b)), rho(&g, g.mul(a, b)));
                assert_eq!(
                    lambda(&g, a).compose(&rho(&g, b)),
                    rho(&g, b).compose(&lambda(&g, a))
                );
                assert_eq!(conj_action(&g, a, &rho(&g, b)), rho(&g, b));
            }
        }
    }
}

#[test]
fn abelian_groups_have_lambda_equal_rho() {
    for g in [
        FiniteGroup::cyclic(6),
        common::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2)),
    ] {
        assert!(left_regular(&g).same_set(&right_regular(&g)));
    }
}

#[test]
fn census_respects_relabeling() {
    let g = FiniteGroup::dihedral(4);
    // a relabeling fixing the identity
    let p = Permutation::new(vec![0, 5, 3, 7, 1, 2, 6, 4]).unwrap();
    let h = g.relabeled(&p).unwrap();
    let moved: BTreeSet<Vec<Vec<usize>>> = enumerate_regular_subgroups(&g)
        .unwrap()
        .iter()
        .map(|n| {
            let mut v: Vec<Vec<usize>> = n
                .elements()
                .iter()
                .map(|eta| {
                    let mut img = vec![0; 8];
                    for x in 0..8 {
                        img[p.apply(x)] = p.apply(eta.apply(x));
                    }
                    img
                })
                .collect();
            v.sort();
            v
        })
        .collect();
    assert_eq!(moved, census_set(&h));
}

#[test]
fn conjugate_of_rho_by_non_normalizing_permutation_is_rejected() {
    let g = FiniteGroup::symmetric3();
    let p = Permutation::new(vec![0, 1, 3, 2, 4, 5]).unwrap();
    let conj: Vec<Permutation> = right_regular(&g)
        .elements()
        .iter()
        .map(|r| p.conjugate(r))
        .collect();
    let n = RegularSubgroup::from_permutations(conj, g.identity()).unwrap();
    assert!(!normalizes(&n, &g));
}

#[test]
fn budget_is_enforced() {
    let g = FiniteGroup::cyclic(13);
    assert_eq!(
        enumerate_regular_subgroups(&g),
        Err(Error::BudgetExceeded {
            order: 13,
            budget: ENUMERATION_BUDGET
        })
    );
}
