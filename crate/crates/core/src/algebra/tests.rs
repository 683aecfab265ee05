use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::field::Field;
use crate::linalg::Subspace;
use crate::poly::{parse_poly, Poly};

fn sg(p: u32, gens: &[u32]) -> Arc<RingModel> {
    RingModel::semigroup(Field::prime(p).unwrap(), gens).unwrap()
}

fn cubic(p: u32) -> Arc<RingModel> {
    let f = Field::prime(p).unwrap();
    let vars: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
    let tail = parse_poly(&f, &vars, "-(y^3+z^3)").unwrap();
    RingModel::hypersurface(f, vars, 0, 3, tail).unwrap()
}

fn elt(m: &RingModel, n: u32, s: &str) -> Vector {
    let p = parse_poly(m.field(), m.vars(), s).unwrap();
    m.element(&[n], &p).unwrap()
}

/// Every element of a small algebra, by brute force.
fn all_elements(a: &Algebra) -> Vec<Vector> {
    Subspace::full(a.dim()).elements(a.field())
}

/// `{a : a*x in I for every x in J}` by trying every element.
fn brute_colon(a: &Algebra, i: &Subspace, j: &Subspace) -> Subspace {
    let f = a.field();
    let good = all_elements(a).into_iter().filter(|x| j.rows().iter().all(|y| i.contains(f, &a.mul(x, y))));
    Subspace::span(f, a.dim(), good)
}

#[test]
fn semigroup_truncation_dimensions() {
    let m = sg(5, &[2, 3]);
    assert_eq!(m.truncation(&[6]).unwrap().dim(), 5);
    let one = RingModel::semigroup(Field::prime(2).unwrap(), &[1]).unwrap();
    assert_eq!(one.truncation(&[1]).unwrap().dim(), 1);
    for n in 1..20 {
        let count = (0..n).filter(|&s| s != 1).count();
        assert_eq!(m.truncation(&[n]).unwrap().dim(), count);
    }
}

#[test]
fn semigroup_products_match_exponent_addition() {
    let m = sg(7, &[3, 4, 5]);
    let t = m.truncation(&[14]).unwrap();
    let a = &t.algebra;
    for (i, mi) in a.monos().iter().enumerate() {
        for (j, mj) in a.monos().iter().enumerate() {
            let prod = a.mul(&crate::linalg::unit(a.dim(), i), &crate::linalg::unit(a.dim(), j));
            let e = mi[0] + mj[0];
            let expect = match t.index_of(&vec![e]) {
                Some(k) => crate::linalg::unit(a.dim(), k),
                None => crate::linalg::zero(a.dim()),
            };
            assert_eq!(prod, expect, "t^{} * t^{}", mi[0], mj[0]);
        }
    }
}

#[test]
fn cubic_truncation_has_dimension_27() {
    let m = cubic(7);
    let t = m.truncation(&[3, 3, 3]).unwrap();
    assert_eq!(t.dim(), 27);
    assert!(t.algebra.monos().iter().all(|mo| mo.iter().all(|&e| e <= 2)));
}

#[test]
fn non_commuting_rule_is_rejected() {
    let f = Field::prime(3).unwrap();
    // x shifts e0 -> e1 -> e2 while y sends e0, e1 to e2; yx and xy differ on e0
    let x = SparseMat { rows: 3, cols: vec![vec![(1, 1)], vec![(2, 1)], vec![]] };
    let y = SparseMat { rows: 3, cols: vec![vec![(2, 1)], vec![(2, 1)], vec![]] };
    let err = Algebra::new(AlgebraParts {
        field: f,
        vars: vec!["x".into(), "y".into()],
        monos: vec![vec![0, 0], vec![1, 0], vec![2, 0]],
        degrees: vec![0, 1, 2],
        gen_names: vec!["x".into(), "y".into()],
        gen_mats: vec![x, y],
        words: vec![vec![], vec![0], vec![0, 0]],
    })
    .unwrap_err();
    assert!(matches!(err, crate::Error::Construction(ref s) if s.contains("x") && s.contains("y")), "{err}");
}

#[test]
fn principal_binomial_ideal_spans_its_multiples() {
    let m = sg(5, &[2, 3]);
    let t = m.truncation(&[10]).unwrap();
    let reg = t.algebra.regular();
    let g = elt(&m, 10, "t^4 + 2*t^5");
    let ideal = reg.span([g.clone()]);
    // oracle: multiply by every basis element and row-reduce
    let f = m.field();
    let multiples: Vec<Vector> = (0..t.dim()).map(|i| t.algebra.mul(&crate::linalg::unit(t.dim(), i), &g)).collect();
    let oracle = Subspace::span(f, t.dim(), multiples);
    assert_eq!(ideal, oracle);
    assert_eq!(ideal.dim(), 5);
    for s in ["t^4 + 2*t^5", "t^6 + 2*t^7", "t^7 + 2*t^8", "t^8", "t^9"] {
        assert!(ideal.contains(f, &elt(&m, 10, s)), "{s}");
    }
    assert!(reg.span([t.algebra.one()]).is_full());
    assert!(reg.span([crate::linalg::zero(t.dim())]).is_zero());
}

#[test]
fn lattice_operations_on_small_ideals() {
    let m = sg(2, &[2, 3]);
    let t = m.truncation(&[8]).unwrap();
    let reg = t.algebra.regular();
    let a = reg.span([elt(&m, 8, "t^2 + t^3")]);
    let b = reg.span([elt(&m, 8, "t^2")]);
    let expect = reg.span([elt(&m, 8, "t^2"), elt(&m, 8, "t^3")]);
    assert_eq!(a.sum(m.field(), &b), expect);

    let m = sg(5, &[2, 3]);
    let t = m.truncation(&[10]).unwrap();
    let reg = t.algebra.regular();
    let mm = reg.span([elt(&m, 10, "t^2"), elt(&m, 10, "t^3")]);
    assert_eq!(reg.product(&mm, &mm), reg.span([elt(&m, 10, "t^4"), elt(&m, 10, "t^5")]));
}

#[test]
fn socle_and_annihilator_fixtures() {
    let m = sg(5, &[2, 3]);
    let t = m.truncation(&[6]).unwrap();
    let reg = t.algebra.regular();
    let soc = reg.socle();
    assert_eq!(soc, Subspace::span(m.field(), 5, [elt(&m, 6, "t^4"), elt(&m, 6, "t^5")]));
    let ann = reg.colon_to_ring(&reg.zero_space(), &soc);
    assert_eq!(ann, t.algebra.maximal_space());
    assert!(reg.annihilator().is_zero());
    let f = Field::prime(3).unwrap();
    let field_alg = RingModel::semigroup(f, &[1]).unwrap().truncation(&[1]).unwrap();
    assert!(field_alg.algebra.regular().socle().is_full());
}

#[test]
fn irreducibility_fixtures() {
    let m = sg(7, &[2, 3]);
    for n in 2..5u32 {
        for a in 0..7u32 {
            let j = RIdeal::parse(&m, &format!("t^{} + {}*t^{}", 2 * n, a, 2 * n + 1)).unwrap();
            let sub = Submodule::new(j.truncation().algebra.regular(), j.space().clone()).unwrap();
            assert!(sub.is_irreducible().unwrap(), "n={n} a={a}");
        }
    }
    let j = RIdeal::parse(&m, "(t^4, t^5)").unwrap();
    let sub = Submodule::new(j.truncation().algebra.regular(), j.space().clone()).unwrap();
    assert!(!sub.is_irreducible().unwrap());
    let unit = Submodule::whole(j.truncation().algebra.regular());
    assert!(unit.is_irreducible().is_err());
}

#[test]
fn ring_colon_matches_closed_form() {
    for p in [5u32, 7] {
        let m = sg(p, &[2, 3]);
        let target = RIdeal::parse(&m, "(t^4, t^5)").unwrap();
        let i = RIdeal::parse(&m, "(t^4, t^5)").unwrap();
        for a in 0..p {
            let j = RIdeal::parse(&m, &format!("t^6 + {a}*t^7")).unwrap();
            assert!(j.colon(&i).unwrap().same_as(&target).unwrap(), "a={a}");
        }
        let unit = RIdeal::unit(&m).unwrap();
        assert!(i.colon(&unit).unwrap().same_as(&i).unwrap());
        assert!(i.colon(&i).unwrap().is_unit());
    }
}

#[test]
fn colon_agrees_with_element_search() {
    let m = sg(2, &[3, 4, 5]);
    let t = m.truncation(&[9]).unwrap();
    let reg = t.algebra.regular();
    let i = reg.span([elt(&m, 9, "t^5"), elt(&m, 9, "t^7")]);
    let j = reg.span([elt(&m, 9, "t^3 + t^4")]);
    assert_eq!(reg.colon_ideal(&i, &j), brute_colon(&t.algebra, &i, &j));
}

#[test]
fn generators_are_canonical() {
    let m = sg(5, &[2, 3]);
    let i = RIdeal::parse(&m, "(t^4 + 2*t^5)").unwrap();
    assert_eq!(i.to_string(), "(t^4 + 2*t^5)");
    let j = RIdeal::parse(&m, "(t^6, t^7, t^9 + t^8)").unwrap();
    assert_eq!(j.to_string(), "(t^6, t^7)");
    let k = j.lift_to(&[30]).unwrap();
    assert_eq!(k.to_string(), "(t^6, t^7)");
    let c = cubic(5);
    let e = RIdeal::parse(&c, "(y*x, x*z, y^2, y*z, z^2)").unwrap();
    assert_eq!(e.to_string(), "(x*y, x*z, y^2, y*z, z^2)");
}

#[test]
fn non_primary_ideals_are_rejected() {
    let c = cubic(5);
    assert!(matches!(RIdeal::parse(&c, "(y)"), Err(crate::Error::Domain(_))));
    let xy = RingModel::presented(
        Field::prime(3).unwrap(),
        vec!["x".into(), "y".into()],
        vec![Poly::monomial(vec![1, 1], 1)],
        None,
    )
    .unwrap();
    assert!(RIdeal::parse(&xy, "(x^2)").is_err());
    assert!(RIdeal::parse(&xy, "(x^2, y)").is_ok());
}

#[test]
fn surjections_are_compatible() {
    let m = sg(3, &[3, 4, 5]);
    let i = RIdeal::parse(&m, "(t^5 + t^6, t^8)").unwrap();
    let j = RIdeal::parse(&m, "(t^3)").unwrap();
    let c1 = i.colon(&j).unwrap();
    let c2 = i.lift_to(&[25]).unwrap().colon(&j.lift_to(&[25]).unwrap()).unwrap();
    assert!(c1.same_as(&c2).unwrap());
}

#[test]
fn xy_normalization_is_a_module() {
    let xy = RingModel::presented(
        Field::prime(3).unwrap(),
        vec!["x".into(), "y".into()],
        vec![Poly::monomial(vec![1, 1], 1)],
        None,
    )
    .unwrap();
    assert_eq!(xy.meta().dimension, 1);
    assert!(xy.meta().gorenstein);
    let (b, unit) = xy.normalization(&[3, 4]).unwrap();
    assert_eq!(b.dim(), 7);
    assert_eq!(unit.iter().filter(|&&c| c == 1).count(), 2);
}

#[test]
fn artinian_presentation_reduces_relations() {
    let f = Field::prime(3).unwrap();
    let vars: Vec<String> = vec!["x".into(), "y".into()];
    let rel = parse_poly(&f, &vars, "x^2 - y^2").unwrap();
    let xyr = parse_poly(&f, &vars, "x*y").unwrap();
    let m = RingModel::presented(f, vars, vec![rel, xyr], Some(vec![3, 3])).unwrap();
    let t = m.truncation(&[3, 3]).unwrap();
    // k[x,y]/(x^2 - y^2, xy) has basis 1, x, y, x^2
    assert_eq!(t.dim(), 4);
    assert!(m.meta().gorenstein);
}

fn gorenstein_algebras() -> Vec<Arc<Algebra>> {
    let mut out = Vec::new();
    for p in [2u32, 3] {
        for gens in [[2u32, 3], [2, 5], [3, 4]] {
            let m = sg(p, &gens);
            for n in 2..9u32 {
                let j = RIdeal::parse(&m, &format!("t^{}", m.semigroup_of().unwrap().next_member(n))).unwrap();
                let t = j.truncation();
                let q = t.algebra.quotient(j.space(), false).unwrap();
                if q.dim() <= 6 && q.regular().socle().dim() == 1 {
                    out.push(q);
                }
            }
        }
    }
    out
}

#[test]
fn double_colon_in_gorenstein_algebras() {
    let algs = gorenstein_algebras();
    assert!(!algs.is_empty());
    for a in algs {
        let reg = a.regular();
        let f = a.field();
        // every principal ideal and every pair sum, against J = 0
        let elems = all_elements(&a);
        for x in elems.iter().take(40) {
            let i = reg.span([x.clone()]);
            let zero = reg.zero_space();
            let back = reg.colon_ideal(&zero, &reg.colon_ideal(&zero, &i));
            assert_eq!(back, i, "double annihilator");
            let _ = f;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn colon_adjunction(a in 0u32..3, b in 0u32..3, s in 3u32..6) {
        let m = sg(3, &[2, 3]);
        let t = m.truncation(&[9]).unwrap();
        let reg = t.algebra.regular();
        let i = reg.span([elt(&m, 9, &format!("t^{} + {a}*t^{}", s + 2, s + 3))]);
        let j = reg.span([elt(&m, 9, &format!("t^{s} + {b}*t^{}", s + 1)), elt(&m, 9, "t^8")]);
        let c = reg.colon_ideal(&i, &j);
        let f = m.field();
        for x in c.rows() {
            for y in j.rows() {
                prop_assert!(i.contains(f, &t.algebra.mul(x, y)));
            }
        }
        prop_assert_eq!(c, brute_colon(&t.algebra, &i, &j));
    }

    #[test]
    fn modular_law_on_ideals(a in 0u32..2, b in 0u32..2, c in 0u32..2, s in 2u32..6) {
        let m = sg(2, &[2, 3]);
        let t = m.truncation(&[12]).unwrap();
        let reg = t.algebra.regular();
        let f = m.field();
        let x = reg.span([elt(&m, 12, &format!("t^{s} + {a}*t^{}", s + 2))]);
        let y = reg.span([elt(&m, 12, &format!("t^{} + {b}*t^{}", s + 2, s + 3))]);
        let z0 = reg.span([elt(&m, 12, &format!("t^{} + {c}*t^{}", s + 1, s + 2))]);
        let z = z0.sum(f, &x);
        // x ⊆ z, so x + (y ∩ z) = (x + y) ∩ z
        prop_assert_eq!(x.sum(f, &y.intersect(f, &z)), x.sum(f, &y).intersect(f, &z));
    }
}
