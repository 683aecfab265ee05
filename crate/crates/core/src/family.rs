//! Enumerated families of small algebras used by the exhaustive checks.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{direct_sum, Algebra, Module, RingModel};
use crate::closures::Closure;
use crate::error::Result;
use crate::field::Field;
use crate::linalg::{self, Subspace};

/// One algebra of a family, with the ring model it truncates when there is
/// one.
#[derive(Clone)]
pub struct Member {
    pub name: String,
    pub algebra: Arc<Algebra>,
    pub model: Option<(Arc<RingModel>, Vec<u32>)>,
}

impl Member {
    /// Integral closure: transported from the ring for truncations, and
    /// `I ↦ I + m` (the integral closure in an Artinian ring) otherwise.
    pub fn integral(&self) -> Result<Closure> {
        match &self.model {
            Some((m, p)) => Closure::integral(m, p),
            None => Ok(Closure::ResidueField),
        }
    }

    /// Five test modules: `A/I` for a seeded random ideal `I`, `k`, `A^∨`,
    /// `A/I ⊕ k` and `A`.
    pub fn b_modules(&self, seed: u64) -> Result<Vec<Arc<Module>>> {
        let reg = self.algebra.regular();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = random_ideal(&self.algebra, &mut rng, 2);
        let a_mod_i = reg.quotient(&i).target.with_name("A/I");
        let k = reg.quotient(&self.algebra.maximal_space()).target.with_name("k");
        let dual = reg.dual().with_name("A^v");
        let sum = direct_sum(&[a_mod_i.clone(), k.clone()], "A/I+k")?;
        Ok(vec![a_mod_i, k, dual, sum, reg.clone()])
    }

    pub fn module_closures(&self, seed: u64) -> Result<Vec<Closure>> {
        Ok(self.b_modules(seed)?.into_iter().map(|b| Closure::module(b.name().to_string(), b)).collect())
    }
}

/// Ideal generated by up to `count` random elements of `m`.
pub fn random_ideal(a: &Arc<Algebra>, rng: &mut impl Rng, count: usize) -> Subspace {
    let f = a.field();
    let n = a.dim();
    let reg = a.regular();
    let gens: Vec<Vec<u32>> = (0..rng.random_range(0..=count))
        .map(|_| {
            let mut v = linalg::zero(n);
            for x in v.iter_mut().skip(1) {
                *x = rng.random_range(0..f.order());
            }
            v
        })
        .collect();
    reg.span(gens)
}

/// Additively closed subsets of `{1, ..., n-1}` with at most `max_dim - 1`
/// elements, up to relabelings that preserve the order and every sum
/// below `n`. Returns `(n, elements)` with the smallest `n` for each
/// pattern.
pub fn semigroup_patterns(max_dim: usize, max_n: u32) -> Vec<(u32, Vec<u32>)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for n in 1..=max_n {
        for set in subsets(n, max_dim - 1) {
            if !set.iter().all(|&a| set.iter().all(|&b| a + b >= n || set.contains(&(a + b)))) {
                continue;
            }
            let mut el = vec![0];
            el.extend(&set);
            let mut key: Vec<(usize, usize, usize)> = Vec::new();
            for i in 0..el.len() {
                for j in 0..el.len() {
                    if el[i] + el[j] < n {
                        key.push((i, j, el.iter().position(|&x| x == el[i] + el[j]).unwrap()));
                    }
                }
            }
            if seen.insert((el.len(), key)) {
                out.push((n, set));
            }
        }
    }
    out
}

fn subsets(n: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for x in 1..n {
        let grown: Vec<Vec<u32>> = out
            .iter()
            .filter(|s| s.len() < max_len)
            .map(|s| {
                let mut t = s.clone();
                t.push(x);
                t
            })
            .collect();
        out.extend(grown);
    }
    out
}

/// Every semigroup-ring truncation of dimension at most `max_dim` up to
/// relabeling, over each field.
pub fn semigroup_truncations(fields: &[Arc<Field>], max_dim: usize) -> Result<Vec<Member>> {
    let mut out = Vec::new();
    for f in fields {
        for (n, set) in semigroup_patterns(max_dim, 4 * max_dim as u32) {
            // the members below n, completed to a numerical semigroup by n..2n
            let mut gens = set.clone();
            gens.extend(n..2 * n.max(1));
            let model = RingModel::semigroup(f.clone(), &gens)?;
            let t = model.truncation(&[n])?;
            let name = format!("<{}> mod t^{n} over {}", describe_set(&set), f.spec());
            out.push(Member { name, algebra: t.algebra.clone(), model: Some((model, vec![n])) });
        }
    }
    Ok(out)
}

fn describe_set(set: &[u32]) -> String {
    let v: Vec<String> = set.iter().map(|x| x.to_string()).collect();
    format!("0{}{}", if v.is_empty() { "" } else { "," }, v.join(","))
}

/// `count` quotients `A/I` of dimension 2 to `max_dim`, with `A` a
/// truncation of `k[[x,y]]` or `k[[x,y,z]]` and `I` generated by random
/// elements, alternating between the given fields.
pub fn random_quotients(fields: &[Arc<Field>], count: usize, max_dim: usize, seed: u64) -> Result<Vec<Member>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut bases = Vec::new();
    for f in fields {
        let xy = RingModel::presented(f.clone(), vec!["x".into(), "y".into()], vec![], None)?;
        let xyz = RingModel::presented(f.clone(), vec!["x".into(), "y".into(), "z".into()], vec![], None)?;
        bases.push(vec![xy.truncation(&[3, 3])?.algebra.clone(), xyz.truncation(&[2, 2, 2])?.algebra.clone()]);
    }
    let mut attempt = 0u32;
    while out.len() < count {
        attempt += 1;
        let fi = out.len() % fields.len();
        let base = &bases[fi][rng.random_range(0..2)];
        let i = random_ideal(base, &mut rng, 4);
        let dim = base.dim() - i.dim();
        if !(2..=max_dim).contains(&dim) {
            continue;
        }
        let q = base.quotient(&i, true)?;
        let name =
            format!("random quotient #{} (attempt {attempt}) of dim {dim} over {}", out.len(), fields[fi].spec());
        out.push(Member { name, algebra: q, model: None });
    }
    Ok(out)
}

/// The standard family: semigroup truncations of dimension at most 6 over
/// F2 and F3, and 50 random quotients of dimension at most 5.
pub fn standard(seed: u64) -> Result<Vec<Member>> {
    let fields = [Field::prime(2)?, Field::prime(3)?];
    let mut out = semigroup_truncations(&fields, 6)?;
    out.extend(random_quotients(&fields, 50, 5, seed)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_count_is_stable() {
        // patterns of dimension at most 6 all appear with n <= 15
        assert_eq!(semigroup_patterns(6, 15).len(), semigroup_patterns(6, 30).len());
        assert_eq!(semigroup_patterns(6, 24).len(), 34);
    }

    #[test]
    fn truncation_dimensions_are_bounded() {
        let fam = semigroup_truncations(&[Field::prime(2).unwrap()], 6).unwrap();
        assert!(fam.iter().all(|m| m.algebra.dim() <= 6));
        assert_eq!(fam.iter().filter(|m| m.algebra.dim() == 1).count(), 1);
    }

    #[test]
    fn random_quotients_are_deterministic() {
        let f = [Field::prime(3).unwrap()];
        let a = random_quotients(&f, 5, 5, 7).unwrap();
        let b = random_quotients(&f, 5, 5, 7).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.algebra.dim(), y.algebra.dim());
        }
    }
}
