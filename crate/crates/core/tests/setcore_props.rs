use std::collections::BTreeSet;

use indepfam::setcore::{
    cell_witness, distinctness_witness, enumerate_ground, indep_member, BaseDomain, BaseSet,
    Builtin, CellSpec, FamilySpec, GroundPoint,
};
use proptest::prelude::*;

fn arb_point() -> impl Strategy<Value = GroundPoint> {
    prop::collection::btree_set(0u64..6, 0..4).prop_flat_map(|support| {
        let x: Vec<u64> = support.into_iter().collect();
        let k = x.len();
        prop::collection::btree_set(0u64..1 << k, 0..=(1usize << k)).prop_map(move |masks| {
            let trace = masks
                .iter()
                .map(|m| (0..k).filter(|i| m >> i & 1 == 1).map(|i| x[i]).collect())
                .collect();
            GroundPoint::new(x.clone(), trace).unwrap()
        })
    })
}

fn arb_set() -> impl Strategy<Value = BaseSet> {
    prop_oneof![
        prop::collection::vec(0u64..8, 0..5).prop_map(BaseSet::finite),
        prop::collection::vec(0u64..8, 0..5).prop_map(BaseSet::cofinite),
        Just(BaseSet::builtin(Builtin::Evens).unwrap()),
        (1u64..5).prop_map(|k| BaseSet::builtin(Builtin::Mult(k)).unwrap()),
        (0u64..6, 0u64..6).prop_map(|(a, b)| BaseSet::builtin(Builtin::Interval(
            a.min(b),
            a.max(b)
        ))
        .unwrap()),
    ]
}

/// `A ∩ X` as a plain set, then a linear scan of the trace.
fn oracle_member(p: &GroundPoint, a: &BaseSet) -> bool {
    let meet: BTreeSet<u64> = p
        .support()
        .iter()
        .copied()
        .filter(|&x| a.contains(x))
        .collect();
    p.trace()
        .iter()
        .any(|z| z.iter().copied().collect::<BTreeSet<u64>>() == meet)
}

fn arb_builtin_family() -> impl Strategy<Value = Vec<BaseSet>> {
    prop::collection::btree_set(2u64..12, 1..6).prop_map(|ks| {
        ks.into_iter()
            .map(|k| BaseSet::builtin(Builtin::Mult(k)).unwrap())
            .collect()
    })
}

proptest! {
    #[test]
    fn membership_matches_the_definition(p in arb_point(), a in arb_set()) {
        prop_assert_eq!(indep_member(&p, &a), oracle_member(&p, &a));
    }

    #[test]
    fn distinct_sets_are_told_apart(a in prop::collection::vec(0u64..8, 0..5), b in prop::collection::vec(0u64..8, 0..5)) {
        let (a, b) = (BaseSet::finite(a), BaseSet::finite(b));
        match distinctness_witness(&a, &b, 64) {
            Ok(w) => prop_assert_ne!(indep_member(&w, &a), indep_member(&w, &b)),
            Err(_) => prop_assert!((0..8).all(|x| a.contains(x) == b.contains(x))),
        }
    }

    #[test]
    fn omega_cells_have_as_many_witnesses_as_asked(gens in arb_builtin_family(), signs in any::<u8>(), k in 1usize..40) {
        let width = gens.len() + 1;
        let family = FamilySpec::new(BaseDomain::omega(width).unwrap(), gens, 64).unwrap();
        let cell = CellSpec::from_pairs((0..family.len()).map(|g| (g, signs >> g & 1 == 1)));
        let ws = cell_witness(&family, &cell, k, 64).unwrap();
        prop_assert_eq!(ws.len(), k);
        prop_assert_eq!(ws.iter().collect::<BTreeSet<_>>().len(), k);
        for w in &ws {
            prop_assert!(cell.contains(&family, w).unwrap());
            prop_assert!(w.validate(family.domain()).is_ok());
        }
        prop_assert_eq!(cell_witness(&family, &cell, k, 64).unwrap(), ws);
    }
}

#[test]
fn finite_cells_are_nonempty_and_witnessed_inside() {
    for (n, width) in [(2u64, 3usize), (3, 4)] {
        let gens: Vec<BaseSet> = (0u64..1 << n)
            .map(|m| BaseSet::finite((0..n).filter(|i| m >> i & 1 == 1)))
            .collect();
        let family = FamilySpec::new(BaseDomain::finite(n, width).unwrap(), gens, 64).unwrap();
        let ground = enumerate_ground(family.domain(), n).unwrap();
        for signs in 0u64..1 << (width - 1) {
            for first in 0..family.len() - (width - 2) {
                let cell =
                    CellSpec::from_pairs((0..width - 1).map(|i| (first + i, signs >> i & 1 == 1)));
                let inside: Vec<&GroundPoint> = ground
                    .iter()
                    .filter(|p| {
                        cell.signs()
                            .iter()
                            .all(|(&g, &v)| oracle_member(p, &family.generators()[g]) == v)
                    })
                    .collect();
                assert!(!inside.is_empty());
                for w in cell_witness(&family, &cell, 1, 64).unwrap() {
                    assert!(inside.contains(&&w), "{w} outside {cell:?}");
                }
            }
        }
    }
}

#[test]
fn enumeration_sizes() {
    assert_eq!(
        enumerate_ground(&BaseDomain::finite(2, 3).unwrap(), 2)
            .unwrap()
            .len(),
        26
    );
    assert_eq!(
        enumerate_ground(&BaseDomain::finite(1, 2).unwrap(), 1)
            .unwrap()
            .len(),
        6
    );
}
