use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::algebra::{Algebra, RingModel};
use crate::family::{self, random_ideal};
use crate::field::Field;
use crate::lattice::Lattice;
use crate::poly::parse_poly;

fn small_family() -> Vec<family::Member> {
    let fields = [Field::prime(2).unwrap(), Field::prime(3).unwrap()];
    let mut out = family::semigroup_truncations(&fields, 4).unwrap();
    out.extend(family::random_quotients(&fields, 6, 4, 3).unwrap());
    out
}

fn cusp(p: u32) -> Arc<RingModel> {
    RingModel::semigroup(Field::prime(p).unwrap(), &[2, 3]).unwrap()
}

/// The ideal generated by `polys` in the truncation of `m` at `n`.
fn ideal_of(m: &RingModel, n: u32, polys: &[&str]) -> (Arc<Algebra>, Subspace) {
    let t = m.truncation(&[n]).unwrap();
    let reg = t.algebra.regular();
    let gens = polys.iter().map(|s| {
        let p = parse_poly(m.field(), m.vars(), s).unwrap();
        m.element_in(&t, &p).unwrap()
    });
    (t.algebra.clone(), reg.span(gens.collect::<Vec<_>>()))
}

/// Ideal generated by `gens`, from every product with every element.
fn brute_ideal(a: &Algebra, gens: &[Vector]) -> Subspace {
    let f = a.field();
    let mut out = Subspace::zero(a.dim());
    for g in gens {
        for r in Subspace::full(a.dim()).elements(f) {
            out.insert(f, a.mul(g, &r));
        }
    }
    out
}

#[test]
fn integral_closure_of_a_principal_ideal_in_the_cusp() {
    let m = cusp(5);
    let (a, i) = ideal_of(&m, 8, &["t^2"]);
    let (_, want) = ideal_of(&m, 8, &["t^2", "t^3"]);
    let cl = Closure::integral(&m, &[8]).unwrap();
    assert_eq!(cl.close(&a.regular(), &i).unwrap(), want);
}

#[test]
fn integral_closure_fixes_a_full_monomial_interval() {
    let m = cusp(7);
    let (a, i) = ideal_of(&m, 10, &["t^4", "t^5"]);
    let cl = Closure::integral(&m, &[10]).unwrap();
    assert_eq!(cl.close(&a.regular(), &i).unwrap(), i);
}

#[test]
fn frobenius_closure_matches_powers_of_elements() {
    for member in small_family() {
        let a = &member.algebra;
        let f = a.field();
        let reg = a.regular();
        let mut q = f.p() as u64;
        while (q as usize) < a.dim() {
            q *= f.p() as u64;
        }
        let lat = Lattice::enumerate(&reg, 2000).unwrap();
        for i in lat.subs() {
            let powers: Vec<Vector> = i.elements(f).iter().map(|x| a.pow(x, q)).collect();
            let bracket = brute_ideal(a, &powers);
            let oracle = Subspace::span(
                f,
                a.dim(),
                Subspace::full(a.dim()).elements(f).into_iter().filter(|x| bracket.contains(f, &a.pow(x, q))),
            );
            assert_eq!(Closure::Frobenius.close(&reg, i).unwrap(), oracle, "{}", member.name);
        }
    }
}

#[test]
fn tight_socle_is_the_colon_by_tau() {
    for member in small_family() {
        let a = &member.algebra;
        let f = a.field();
        let reg = a.regular();
        let tau = a.maximal_space();
        let cl = Closure::TightSocle { tau: tau.clone() };
        for n in Lattice::enumerate(&reg, 2000).unwrap().subs() {
            let oracle = Subspace::span(
                f,
                a.dim(),
                Subspace::full(a.dim())
                    .elements(f)
                    .into_iter()
                    .filter(|x| tau.rows().iter().all(|t| n.contains(f, &a.mul(t, x)))),
            );
            assert_eq!(cl.close(&reg, n).unwrap(), oracle, "{}", member.name);
        }
    }
}

#[test]
fn registered_closures_satisfy_the_axioms() {
    for member in small_family() {
        let reg = member.algebra.regular();
        let lat = Lattice::enumerate(&reg, 2000).unwrap();
        let mut pool = vec![Closure::Identity, Closure::ResidueField, Closure::Collapse, member.integral().unwrap()];
        pool.extend(member.module_closures(1).unwrap());
        for cl in pool {
            let report = check_axioms(&cl, &lat, cl.properties().residual.claimed()).unwrap();
            assert!(report.all_hold(), "{} on {}: {:?}", cl.name(), member.name, report.failures);
        }
    }
}

#[test]
fn broken_closure_yields_replayable_certificates() {
    let m = cusp(2);
    let a = m.truncation(&[6]).unwrap().algebra.clone();
    let reg = a.regular();
    let lat = Lattice::enumerate(&reg, 2000).unwrap();
    let report = check_axioms(&Closure::Broken, &lat, false).unwrap();
    assert!(!report.holds(Axiom::Extensive));
    for c in &report.failures {
        assert!(c.replay(&Closure::Broken, &reg).unwrap(), "{c}");
    }
}

#[test]
fn collapse_is_not_nakayama() {
    let m = cusp(3);
    let a = m.truncation(&[5]).unwrap().algebra.clone();
    let reg = a.regular();
    let lat = Lattice::enumerate(&reg, 2000).unwrap();
    let report = check_nakayama(&Closure::Collapse, &lat).unwrap();
    let cert = report.counterexample.expect("collapse has a counterexample");
    assert!(cert.replay(&Closure::Collapse, &reg).unwrap());
    assert!(check_nakayama(&Closure::ResidueField, &lat).unwrap().holds());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `(M/N) ⊗ A/J = M/(N + JM)`, so the module closure of `A/J` on `M`
    /// is `N + JM`.
    #[test]
    fn cyclic_module_closure_is_n_plus_j_m(which in 0usize..12, seed in any::<u64>(), dual in any::<bool>()) {
        let fam = small_family();
        let member = &fam[which % fam.len()];
        let a = &member.algebra;
        let f = a.field();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let j = random_ideal(a, &mut rng, 2);
        let reg = a.regular();
        let b = reg.quotient(&j).target;
        let m = if dual { reg.dual() } else { reg.clone() };
        let v: Vector = (0..m.dim()).map(|_| rng.random_range(0..f.order())).collect();
        let n = m.span([v]);
        let cl = Closure::module("A/J", b);
        prop_assert_eq!(cl.close(&m, &n).unwrap(), n.sum(f, &m.product(&j, &m.full_space())));
    }

    #[test]
    fn closures_are_extensive_and_idempotent_on_random_ideals(which in 0usize..12, seed in any::<u64>()) {
        let fam = small_family();
        let member = &fam[which % fam.len()];
        let a = &member.algebra;
        let f = a.field();
        let reg = a.regular();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = random_ideal(a, &mut rng, 3);
        for cl in [Closure::Frobenius, Closure::ResidueField, member.integral().unwrap()] {
            let c = cl.close(&reg, &n).unwrap();
            prop_assert!(n.is_subspace_of(f, &c));
            prop_assert_eq!(cl.close(&reg, &c).unwrap(), c);
        }
    }
}
