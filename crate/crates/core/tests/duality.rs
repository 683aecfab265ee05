mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clint_core::duality::{self, Interior};
use clint_core::family::random_ideal;
use clint_core::lattice::Lattice;
use clint_core::linalg;
use clint_core::{Closure, Subspace, Vector};

use common::{brute_submodules, small_family};

#[test]
fn lattice_enumeration_matches_brute_force() {
    for member in small_family() {
        let reg = member.algebra.regular();
        for m in [reg.clone(), reg.dual()] {
            let lat = Lattice::enumerate(&m, 5000).unwrap();
            let got: BTreeSet<Vec<u32>> = lat.subs().iter().map(Subspace::key).collect();
            assert_eq!(got.len(), lat.len(), "{}", member.name);
            assert_eq!(
                got,
                brute_submodules(&m, &m.zero_space(), &m.full_space()).into_keys().collect(),
                "{}",
                member.name
            );
        }
    }
}

#[test]
fn lattice_intervals_match_brute_force() {
    for member in small_family() {
        let reg = member.algebra.regular();
        let lower = reg.m_times(&reg.m_times(&reg.full_space()));
        let upper = reg.m_times(&reg.full_space());
        let lat = Lattice::interval(&reg, &lower, &upper, 5000).unwrap();
        let got: BTreeSet<Vec<u32>> = lat.subs().iter().map(Subspace::key).collect();
        assert_eq!(got, brute_submodules(&reg, &lower, &upper).into_keys().collect::<BTreeSet<_>>(), "{}", member.name);
    }
}

#[test]
fn lattice_cap_is_a_resource_error() {
    let member = &small_family()[5];
    let reg = member.algebra.regular();
    assert!(matches!(Lattice::enumerate(&reg, 1), Err(clint_core::Error::Resource(_))));
}

#[test]
fn smile_of_a_closure_transports_back_to_the_closure() {
    for member in small_family() {
        let reg = member.algebra.regular();
        let mut pool = vec![Closure::Identity, member.integral().unwrap()];
        pool.extend(member.module_closures(2).unwrap());
        for m in [reg.clone(), reg.dual()] {
            let lat = Lattice::enumerate(&m, 5000).unwrap();
            for cl in &pool {
                let int = Interior::smile(cl.clone()).unwrap();
                for n in lat.subs() {
                    let back = duality::closure_from_interior(&int, &m, n).unwrap();
                    assert_eq!(back, cl.close(&m, n).unwrap(), "{} on {}", cl.name(), member.name);
                }
            }
        }
    }
}

#[test]
fn smile_needs_a_residual_closure() {
    assert!(Interior::smile(Closure::Frobenius).is_err());
    assert!(Interior::smile(Closure::Broken).is_err());
    assert!(Interior::smile(Closure::Collapse).is_ok());
}

#[test]
fn shrink_is_rejected_at_registration() {
    let lats: Vec<Lattice> =
        small_family().iter().take(4).map(|m| Lattice::enumerate(&m.algebra.regular(), 5000).unwrap()).collect();
    assert!(Interior::Shrink.register(&lats).is_err());
    assert!(Interior::Identity.register(&lats).is_ok());
    assert!(Interior::smile(Closure::ResidueField).unwrap().register(&lats).is_ok());
}

#[test]
fn finitistic_smile_equals_the_artinistic_interior() {
    for member in small_family() {
        let reg = member.algebra.regular();
        let mut pool = vec![Closure::ResidueField, member.integral().unwrap()];
        pool.extend(member.module_closures(4).unwrap().into_iter().take(2));
        for a in [reg.clone(), reg.dual()] {
            for cl in &pool {
                let left = duality::smile_of_finitistic(cl, &a, 5000).unwrap();
                let right = duality::artinistic_interior(cl, &a, 5000).unwrap();
                assert_eq!(left, right, "{} on {}", cl.name(), member.name);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn perp_is_an_inclusion_reversing_involution(which in 0usize..40, seed in any::<u64>()) {
        let fam = small_family();
        let a = &fam[which % fam.len()].algebra;
        let f = a.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = a.dim();
        let mut random_space = || {
            let k = rng.random_range(0..=n);
            let rows: Vec<Vector> = (0..k).map(|_| (0..n).map(|_| rng.random_range(0..f.order())).collect()).collect();
            Subspace::span(f, n, rows)
        };
        let (l1, l2) = (random_space(), random_space());
        prop_assert_eq!(l1.perp(f).perp(f), l1.clone());
        prop_assert_eq!(l1.perp(f).dim() + l1.dim(), n);
        prop_assert_eq!(l1.sum(f, &l2).perp(f), l1.perp(f).intersect(f, &l2.perp(f)));
        prop_assert_eq!(l1.intersect(f, &l2).perp(f), l1.perp(f).sum(f, &l2.perp(f)));
        // every element of the perp kills every element of the space
        for phi in l1.perp(f).elements(f).iter().take(64) {
            for x in l1.elements(f).iter().take(64) {
                prop_assert_eq!(linalg::dot(f, phi, x), 0);
            }
        }
    }

    /// `(I·L)^⊥` by testing every functional against every product.
    #[test]
    fn perp_of_a_product_is_a_colon(which in 0usize..40, seed in any::<u64>()) {
        let fam = small_family();
        let a = &fam[which % fam.len()].algebra;
        let f = a.field();
        let reg = a.regular();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = random_ideal(a, &mut rng, 2);
        let l = random_ideal(a, &mut rng, 2);
        let products: Vec<Vector> = i.elements(f).iter().flat_map(|x| l.rows().iter().map(|y| reg.act(x, y)).collect::<Vec<_>>()).collect();
        let oracle = Subspace::span(
            f,
            a.dim(),
            Subspace::full(a.dim()).elements(f).into_iter().filter(|phi| products.iter().all(|p| linalg::dot(f, phi, p) == 0)),
        );
        prop_assert_eq!(reg.dual().colon_ideal(&l.perp(f), &i), oracle);
        prop_assert!(duality::perp_of_product_holds(&reg, &i, &l));
    }
}
