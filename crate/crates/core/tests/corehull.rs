mod common;

use std::collections::BTreeSet;

use clint_core::corehull::{self, Mode, Spread};
use clint_core::duality::Interior;
use clint_core::linalg::Subspace;
use clint_core::poly::parse_poly;
use clint_core::{Closure, Field, Module, RingModel};

use common::{brute_submodules, small_family};

/// Reductions of `n` from the brute-force lattice.
fn brute_reductions(cl: &Closure, m: &Module, n: &Subspace) -> Vec<Subspace> {
    let f = m.field();
    brute_submodules(m, &m.zero_space(), n)
        .into_values()
        .filter(|l| n.is_subspace_of(f, &cl.close(m, l).unwrap()))
        .collect()
}

fn keys(v: &[Subspace]) -> BTreeSet<Vec<u32>> {
    v.iter().map(Subspace::key).collect()
}

fn pool(member: &clint_core::family::Member) -> Vec<Closure> {
    let mut out = vec![Closure::Identity, Closure::ResidueField, member.integral().unwrap()];
    out.extend(member.module_closures(9).unwrap().into_iter().take(2));
    out
}

#[test]
fn minimal_reductions_of_the_cusp_maximal_ideal_over_f2() {
    let model = RingModel::semigroup(Field::prime(2).unwrap(), &[2, 3]).unwrap();
    let t = model.truncation(&[10]).unwrap();
    let reg = t.algebra.regular();
    let elt = |s: &str| model.element_in(&t, &parse_poly(model.field(), model.vars(), s).unwrap()).unwrap();
    let mm = reg.span([elt("t^2"), elt("t^3")]);
    let cl = Closure::integral(&model, &[10]).unwrap();
    let got = corehull::minimal_reductions(&cl, &reg, &mm, Mode::Enumerate, 5000).unwrap();
    let want = [reg.span([elt("t^2")]), reg.span([elt("t^2 + t^3")])];
    assert_eq!(keys(&got), keys(&want));
    let core = corehull::core(&cl, &reg, &mm, 5000).unwrap();
    assert_eq!(core, want[0].intersect(model.field(), &want[1]));
}

#[test]
fn reductions_and_core_match_brute_force() {
    for member in small_family() {
        let reg = member.algebra.regular();
        let f = reg.field();
        let mm = reg.m_times(&reg.full_space());
        for cl in pool(&member) {
            for n in [mm.clone(), reg.full_space()] {
                let brute = brute_reductions(&cl, &reg, &n);
                let got = corehull::reductions(&cl, &reg, &n, 5000).unwrap();
                assert_eq!(keys(&got), keys(&brute), "{} on {}", cl.name(), member.name);
                let core = brute.iter().fold(n.clone(), |acc, l| acc.intersect(f, l));
                assert_eq!(corehull::core(&cl, &reg, &n, 5000).unwrap(), core);
                assert_eq!(
                    corehull::core_via_duality(&cl, &reg, &n, 5000).unwrap(),
                    core,
                    "{} on {}",
                    cl.name(),
                    member.name
                );
            }
        }
    }
}

#[test]
fn descent_lands_on_a_minimal_reduction() {
    for member in small_family() {
        let reg = member.algebra.regular();
        let mm = reg.m_times(&reg.full_space());
        for cl in pool(&member) {
            let all = keys(&corehull::minimal_reductions(&cl, &reg, &mm, Mode::Enumerate, 5000).unwrap());
            let one = corehull::minimal_reductions(&cl, &reg, &mm, Mode::Descent, 5000).unwrap();
            assert_eq!(one.len(), 1);
            assert!(all.contains(&one[0].key()), "{} on {}", cl.name(), member.name);
        }
    }
}

#[test]
fn expansions_and_reductions_correspond() {
    for member in small_family() {
        let reg = member.algebra.regular();
        let lat = clint_core::Lattice::enumerate(&reg, 5000).unwrap();
        for cl in pool(&member) {
            for a in lat.subs() {
                assert!(corehull::bijection_holds(&cl, &reg, a, 5000).unwrap(), "{} on {}", cl.name(), member.name);
            }
        }
    }
}

#[test]
fn spread_equals_cospread_of_the_dual() {
    for member in small_family() {
        let reg = member.algebra.regular();
        let f = reg.field();
        let d = reg.dual();
        let mm = reg.m_times(&reg.full_space());
        for cl in pool(&member) {
            let int = Interior::smile(cl.clone()).unwrap();
            let s = corehull::spread(&cl, &reg, &mm, 5000).unwrap();
            let c = corehull::cospread(&int, &d, &mm.perp(f), &d.full_space(), 5000).unwrap();
            assert_eq!(s, c, "{} on {}", cl.name(), member.name);
        }
    }
}

#[test]
fn identity_spread_is_the_generator_count() {
    for member in small_family() {
        let reg = member.algebra.regular();
        let mm = reg.m_times(&reg.full_space());
        let s = corehull::spread(&Closure::Identity, &reg, &mm, 5000).unwrap();
        assert_eq!(s, Spread::Exists(reg.min_generators(&mm)));
    }
}

#[test]
fn socle_functionals_cogenerate_minimally() {
    for member in small_family() {
        let reg = member.algebra.regular();
        for y in [reg.clone(), reg.dual()] {
            let gens = corehull::minimal_cogenerators(&y);
            assert_eq!(gens.len(), y.socle().dim());
            assert!(corehull::cogenerates(&y, &y.full_space(), &gens));
            for skip in 0..gens.len() {
                let fewer: Vec<_> =
                    gens.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, g)| g.clone()).collect();
                assert!(!corehull::cogenerates(&y, &y.full_space(), &fewer), "{}", member.name);
            }
        }
    }
}
