//! Numerical semigroups and their monomial ideals.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An additive submonoid of the naturals with finite complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    generators: Vec<u32>,
    frobenius: i64,
    table: Vec<bool>,
}

impl NumericalSemigroup {
    /// Builds the semigroup generated by `gens`; the stored generators are
    /// the minimal generating set.
    pub fn new(gens: &[u32]) -> Result<Self> {
        let mut g: Vec<u32> = gens.iter().copied().filter(|&x| x > 0).collect();
        g.sort_unstable();
        g.dedup();
        if g.is_empty() {
            return Err(Error::Domain("a numerical semigroup needs a positive generator".into()));
        }
        if g.iter().fold(0, |a, &b| gcd(a, b)) != 1 {
            return Err(Error::Domain(format!("generators {g:?} have gcd greater than one")));
        }
        if g.len() > 1 && g[0] > 64 {
            return Err(Error::Domain("smallest generator exceeds 64".into()));
        }
        // membership by dynamic programming until g[0] consecutive members
        let run = g[0] as usize;
        let mut table = vec![true];
        let mut streak = 1usize;
        let mut n = 0usize;
        while streak < run {
            n += 1;
            let m = g.iter().any(|&x| (x as usize) <= n && table[n - x as usize]);
            table.push(m);
            streak = if m { streak + 1 } else { 0 };
        }
        let frobenius = table.iter().rposition(|&m| !m).map_or(-1, |i| i as i64);
        let maxg = *g.last().unwrap() as i64;
        let bound = (frobenius + maxg + 1).max(1) as usize;
        while table.len() <= bound {
            let n = table.len();
            table.push(n as i64 > frobenius);
        }
        let minimal: Vec<u32> = g
            .iter()
            .copied()
            .filter(|&x| {
                // x is redundant if x = a + b with a, b nonzero members
                !(1..x).any(|a| table[a as usize] && table[(x - a) as usize])
            })
            .collect();
        Ok(NumericalSemigroup { generators: minimal, frobenius, table })
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn frobenius_number(&self) -> i64 {
        self.frobenius
    }

    /// Smallest `c` with every integer `>= c` a member.
    pub fn conductor(&self) -> u32 {
        (self.frobenius + 1) as u32
    }

    pub fn multiplicity(&self) -> u32 {
        self.generators[0]
    }

    pub fn table_len(&self) -> usize {
        self.table.len()
    }

    pub fn contains(&self, n: i64) -> Result<bool> {
        if n < 0 {
            return Err(Error::Domain(format!("membership of negative integer {n}")));
        }
        Ok(self.contains_u(n as u32))
    }

    pub fn contains_u(&self, n: u32) -> bool {
        (n as usize) < self.table.len() && self.table[n as usize] || n as i64 > self.frobenius
    }

    pub fn gaps(&self) -> Vec<u32> {
        (0..self.conductor()).filter(|&n| !self.contains_u(n)).collect()
    }

    /// Members below `bound`, increasing.
    pub fn members_below(&self, bound: u32) -> Vec<u32> {
        (0..bound).filter(|&n| self.contains_u(n)).collect()
    }

    /// Smallest member at or above `n`.
    pub fn next_member(&self, n: u32) -> u32 {
        (n..).find(|&m| self.contains_u(m)).unwrap()
    }

    /// Gorenstein criterion for `k[[t^S]]`: `n` is a member iff `F - n` is not.
    pub fn is_symmetric(&self) -> bool {
        let f = self.frobenius;
        if f < 0 {
            return true;
        }
        (0..=f).all(|n| self.contains_u(n as u32) != self.contains_u((f - n) as u32))
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|x| x.to_string()).collect();
        write!(f, "S<{}>", g.join(","))
    }
}

/// A monomial ideal `G + S` of a numerical semigroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemigroupIdeal {
    semigroup: Arc<NumericalSemigroup>,
    generators: Vec<u32>,
}

impl SemigroupIdeal {
    pub fn new(semigroup: Arc<NumericalSemigroup>, exponents: &[u32]) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::Domain("a semigroup ideal needs at least one generator".into()));
        }
        for &e in exponents {
            if !semigroup.contains_u(e) {
                return Err(Error::Domain(format!("exponent {e} is not in {semigroup}")));
            }
        }
        let generators = normalize(&semigroup, exponents);
        Ok(SemigroupIdeal { semigroup, generators })
    }

    pub fn unit(semigroup: Arc<NumericalSemigroup>) -> Self {
        SemigroupIdeal { semigroup, generators: vec![0] }
    }

    pub fn semigroup(&self) -> &Arc<NumericalSemigroup> {
        &self.semigroup
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }

    pub fn is_unit(&self) -> bool {
        self.generators == [0]
    }

    pub fn min_element(&self) -> u32 {
        self.generators[0]
    }

    pub fn contains(&self, n: u32) -> bool {
        self.generators.iter().any(|&g| n >= g && self.semigroup.contains_u(n - g))
    }

    /// Every integer at or above this bound is an element.
    pub fn tail_bound(&self) -> u32 {
        self.min_element() + self.semigroup.conductor()
    }

    pub fn elements_below(&self, bound: u32) -> Vec<u32> {
        (0..bound).filter(|&n| self.contains(n)).collect()
    }

    fn check_same(&self, other: &SemigroupIdeal) -> Result<()> {
        if self.semigroup != other.semigroup {
            return Err(Error::Usage(format!(
                "ideals live in different semigroups {} and {}",
                self.semigroup, other.semigroup
            )));
        }
        Ok(())
    }

    /// `{s in S : s + J ⊆ I}`
    pub fn colon(&self, j: &SemigroupIdeal) -> Result<SemigroupIdeal> {
        self.check_same(j)?;
        let bound = self.tail_bound();
        let members: Vec<u32> = (0..=bound)
            .filter(|&s| self.semigroup.contains_u(s) && j.generators.iter().all(|&g| self.contains(s + g)))
            .collect();
        Ok(SemigroupIdeal { semigroup: self.semigroup.clone(), generators: normalize(&self.semigroup, &members) })
    }

    pub fn sum(&self, other: &SemigroupIdeal) -> Result<SemigroupIdeal> {
        self.check_same(other)?;
        let mut all = self.generators.clone();
        all.extend_from_slice(&other.generators);
        Ok(SemigroupIdeal { semigroup: self.semigroup.clone(), generators: normalize(&self.semigroup, &all) })
    }

    pub fn product(&self, other: &SemigroupIdeal) -> Result<SemigroupIdeal> {
        self.check_same(other)?;
        let all: Vec<u32> =
            self.generators.iter().flat_map(|&a| other.generators.iter().map(move |&b| a + b)).collect();
        Ok(SemigroupIdeal { semigroup: self.semigroup.clone(), generators: normalize(&self.semigroup, &all) })
    }

    pub fn is_subset_of(&self, other: &SemigroupIdeal) -> bool {
        self.generators.iter().all(|&g| other.contains(g))
    }

    /// `{s in S : s >= min(I)}`, the integral closure of a monomial ideal
    /// of a one-dimensional semigroup ring.
    pub fn integral_closure(&self) -> SemigroupIdeal {
        let m = self.min_element();
        let tail: Vec<u32> = (m..=m + self.semigroup.conductor() + self.semigroup.multiplicity())
            .filter(|&s| self.semigroup.contains_u(s))
            .collect();
        SemigroupIdeal { semigroup: self.semigroup.clone(), generators: normalize(&self.semigroup, &tail) }
    }
}

impl fmt::Display for SemigroupIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.generators.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", g.join(","))
    }
}

/// Sorted irredundant generators of the ideal generated by `exps`.
fn normalize(s: &NumericalSemigroup, exps: &[u32]) -> Vec<u32> {
    let mut e: Vec<u32> = exps.to_vec();
    e.sort_unstable();
    e.dedup();
    let mut out: Vec<u32> = Vec::new();
    for &x in &e {
        if !out.iter().any(|&g| x >= g && s.contains_u(x - g)) {
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_member(gens: &[u32], n: u32) -> bool {
        let mut reach = vec![false; n as usize + 1];
        reach[0] = true;
        for i in 1..=n as usize {
            reach[i] = gens.iter().any(|&g| g as usize <= i && reach[i - g as usize]);
        }
        reach[n as usize]
    }

    fn s(g: &[u32]) -> Arc<NumericalSemigroup> {
        Arc::new(NumericalSemigroup::new(g).unwrap())
    }

    #[test]
    fn membership_fixtures() {
        let s23 = s(&[2, 3]);
        assert!(s23.contains(0).unwrap());
        assert_eq!(s23.contains(1).unwrap(), brute_member(&[2, 3], 1));
        assert!(!s23.contains(1).unwrap());
        let s345 = s(&[3, 4, 5]);
        assert!(!s345.contains(2).unwrap());
        assert!(s345.contains(7).unwrap());
        assert!(s23.contains(-1).is_err());
    }

    #[test]
    fn frobenius_fixtures() {
        assert_eq!(s(&[1]).frobenius_number(), -1);
        let brute = |g: &[u32], lim: u32| (0..=lim).filter(|&n| !brute_member(g, n)).max().map_or(-1, |x| x as i64);
        assert_eq!(brute(&[2, 3], 6), 1);
        assert_eq!(s(&[2, 3]).frobenius_number(), 1);
        assert_eq!(brute(&[3, 4, 5], 20), 2);
        assert_eq!(s(&[3, 4, 5]).frobenius_number(), 2);
    }

    #[test]
    fn two_generator_formula() {
        for a in 2..=12u32 {
            for b in a + 1..=12 {
                if gcd(a, b) != 1 {
                    continue;
                }
                let lim = a * b;
                let brute = (0..=lim).filter(|&n| !brute_member(&[a, b], n)).max().unwrap() as i64;
                assert_eq!(brute, (a * b - a - b) as i64);
                assert_eq!(s(&[a, b]).frobenius_number(), brute);
            }
        }
    }

    #[test]
    fn rejects_non_coprime() {
        assert!(NumericalSemigroup::new(&[4, 6]).is_err());
    }

    #[test]
    fn minimal_generators_and_symmetry() {
        let g = s(&[2, 3, 4, 5]);
        assert_eq!(g.generators(), &[2, 3]);
        assert!(g.is_symmetric());
        assert!(!s(&[3, 4, 5]).is_symmetric());
        assert_eq!(g.to_string(), "S<2,3>");
    }

    /// Element-wise colon by exhaustive membership up to a generous bound.
    fn brute_colon(i: &SemigroupIdeal, j: &SemigroupIdeal, bound: u32) -> Vec<u32> {
        let sg = i.semigroup();
        (0..bound)
            .filter(|&x| sg.contains_u(x) && (0..bound).filter(|&y| j.contains(y)).all(|y| i.contains(x + y)))
            .collect()
    }

    #[test]
    fn colon_fixtures() {
        let sg = s(&[2, 3]);
        let i = SemigroupIdeal::new(sg.clone(), &[6, 7]).unwrap();
        let j = SemigroupIdeal::new(sg.clone(), &[4, 5]).unwrap();
        let c = i.colon(&j).unwrap();
        assert_eq!(c.generators(), &[2, 3]);
        assert_eq!(c.elements_below(30), brute_colon(&i, &j, 30));
        assert!(i.colon(&i).unwrap().is_unit());
        let m = SemigroupIdeal::new(sg.clone(), &[2, 3]).unwrap();
        assert_eq!(j.colon(&m).unwrap().generators(), &[2, 3]);
        let other = SemigroupIdeal::new(s(&[3, 4, 5]), &[3]).unwrap();
        assert!(matches!(i.colon(&other), Err(Error::Usage(_))));
    }

    #[test]
    fn integral_closure_fixtures() {
        let sg = s(&[2, 3]);
        assert_eq!(SemigroupIdeal::new(sg.clone(), &[4]).unwrap().integral_closure().generators(), &[4, 5]);
        let m = SemigroupIdeal::new(sg, &[2, 3]).unwrap();
        assert_eq!(m.integral_closure(), m);
        let s345 = s(&[3, 4, 5]);
        assert_eq!(SemigroupIdeal::new(s345, &[5]).unwrap().integral_closure().generators(), &[5, 6, 7]);
        assert!(SemigroupIdeal::new(s(&[2, 3]), &[]).is_err());
    }

    fn arb_ideal() -> impl Strategy<Value = (Vec<u32>, Vec<u32>, Vec<u32>)> {
        (
            prop::sample::select(vec![vec![2u32, 3], vec![3, 4, 5], vec![3, 5], vec![4, 5, 6, 7]]),
            prop::collection::vec(0u32..14, 1..4),
            prop::collection::vec(0u32..14, 1..4),
        )
    }

    proptest! {
        #[test]
        fn double_colon_contains(input in arb_ideal()) {
            let (g, a, b) = input;
            let sg = s(&g);
            let a: Vec<u32> = a.into_iter().map(|x| sg.next_member(x)).collect();
            let b: Vec<u32> = b.into_iter().map(|x| sg.next_member(x)).collect();
            let i = SemigroupIdeal::new(sg.clone(), &a).unwrap();
            let j = SemigroupIdeal::new(sg.clone(), &b).unwrap();
            let dc = j.colon(&j.colon(&i).unwrap()).unwrap();
            prop_assert!(i.is_subset_of(&dc));
        }

        #[test]
        fn integral_closure_is_a_closure(input in arb_ideal()) {
            let (g, a, b) = input;
            let sg = s(&g);
            let a: Vec<u32> = a.into_iter().map(|x| sg.next_member(x)).collect();
            let b: Vec<u32> = b.into_iter().map(|x| sg.next_member(x)).collect();
            let i = SemigroupIdeal::new(sg.clone(), &a).unwrap();
            let j = i.sum(&SemigroupIdeal::new(sg.clone(), &b).unwrap()).unwrap();
            let ib = i.integral_closure();
            prop_assert!(i.is_subset_of(&ib));
            prop_assert_eq!(ib.integral_closure(), ib.clone());
            prop_assert!(ib.is_subset_of(&j.integral_closure()));
        }
    }
}
