#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use clint_core::family::{self, Member};
use clint_core::{Field, Module, Subspace};

/// Semigroup truncations of dimension at most 4 and a few random quotients,
/// over F2 and F3.
pub fn small_family() -> Vec<Member> {
    let fields = [Field::prime(2).unwrap(), Field::prime(3).unwrap()];
    let mut out = family::semigroup_truncations(&fields, 4).unwrap();
    out.extend(family::random_quotients(&fields, 6, 4, 3).unwrap());
    out
}

/// Every subspace between `lower` and `upper` closed under multiplication
/// by each basis element of the algebra, found by adding one vector at a
/// time.
pub fn brute_submodules(m: &Module, lower: &Subspace, upper: &Subspace) -> BTreeMap<Vec<u32>, Subspace> {
    let f = m.field();
    let vectors = upper.elements(f);
    let ad = m.algebra().dim();
    let closed = |s: &Subspace| s.rows().iter().all(|r| (0..ad).all(|i| s.contains(f, &m.act_basis(i, r))));
    let mut seen = BTreeSet::from([lower.key()]);
    let mut queue = VecDeque::from([lower.clone()]);
    let mut out = BTreeMap::new();
    while let Some(s) = queue.pop_front() {
        if closed(&s) {
            out.insert(s.key(), s.clone());
        }
        for v in &vectors {
            if s.contains(f, v) {
                continue;
            }
            let mut t = s.clone();
            t.insert(f, v.clone());
            if seen.insert(t.key()) {
                queue.push_back(t);
            }
        }
    }
    out
}
