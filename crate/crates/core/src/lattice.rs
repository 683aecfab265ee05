//! Enumeration of submodule lattices of finite modules.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::algebra::Module;
use crate::closures::Closure;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Subspace, Vector};

/// All submodules `X` of a module with `lower ⊆ X ⊆ upper`, sorted by
/// dimension and then by echelon key.
pub struct Lattice {
    module: Arc<Module>,
    subs: Vec<Subspace>,
    index: HashMap<Vec<u32>, usize>,
}

impl Lattice {
    pub fn enumerate(module: &Arc<Module>, cap: usize) -> Result<Lattice> {
        Lattice::interval(module, &module.zero_space(), &module.full_space(), cap)
    }

    /// The interval `[lower, upper]`; both ends must be submodules.
    pub fn interval(module: &Arc<Module>, lower: &Subspace, upper: &Subspace, cap: usize) -> Result<Lattice> {
        let f = module.field();
        if !lower.is_subspace_of(f, upper) {
            return Err(Error::Usage("lower end of the interval is not contained in the upper end".into()));
        }
        let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
        let mut found = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(lower.key(), ());
        queue.push_back(lower.clone());
        while let Some(x) = queue.pop_front() {
            let soc = module.colon_max(&x).intersect(f, upper);
            for v in projective_points(f, &soc, &x) {
                let mut y = x.clone();
                y.insert(f, v);
                let key = y.key();
                if seen.contains_key(&key) {
                    continue;
                }
                seen.insert(key, ());
                if seen.len() > cap {
                    return Err(Error::Resource(format!("submodule lattice exceeds the cap of {cap} elements")));
                }
                queue.push_back(y);
            }
            found.push(x);
        }
        found.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.key().cmp(&b.key())));
        let index = found.iter().enumerate().map(|(i, s)| (s.key(), i)).collect();
        Ok(Lattice { module: module.clone(), subs: found, index })
    }

    pub fn module(&self) -> &Arc<Module> {
        &self.module
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.subs[i]
    }

    pub fn subs(&self) -> &[Subspace] {
        &self.subs
    }

    pub fn index_of(&self, s: &Subspace) -> Option<usize> {
        self.index.get(&s.key()).copied()
    }

    /// Closure of every element, as indices into the lattice.
    pub fn close_all(&self, cl: &Closure) -> Result<Vec<usize>> {
        self.subs
            .iter()
            .map(|s| {
                let c = cl.close(&self.module, s)?;
                self.index_of(&c)
                    .ok_or_else(|| Error::Anomaly(format!("{} produced a subspace outside the lattice", cl.name())))
            })
            .collect()
    }

    /// Containment relation as bitsets: `below[j]` has bit `i` set when
    /// element `i` is contained in element `j`.
    pub fn containment(&self) -> Vec<Bits> {
        let f = self.module.field();
        let n = self.subs.len();
        let mut out = vec![Bits::new(n); n];
        for (bits, upper) in out.iter_mut().zip(&self.subs) {
            for (i, s) in self.subs.iter().enumerate() {
                if s.dim() <= upper.dim() && s.is_subspace_of(f, upper) {
                    bits.set(i);
                }
            }
        }
        out
    }
}

/// A fixed-size bitset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bits(Vec<u64>);

impl Bits {
    pub fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

/// One representative for each line of `s/x`, normalized so that the
/// first nonzero coordinate on the complement basis is one.
pub fn projective_points(f: &Field, s: &Subspace, x: &Subspace) -> Vec<Vector> {
    let mut comp = Subspace::zero(s.ambient_dim());
    let mut basis = Vec::new();
    for r in s.rows() {
        let v = x.reduced(f, r);
        if !linalg::is_zero(&v) && comp.insert(f, v.clone()) {
            basis.push(v);
        }
    }
    let k = basis.len();
    let mut out = Vec::new();
    let q = f.order() as usize;
    for lead in 0..k {
        let free = k - lead - 1;
        let total = q.pow(free as u32);
        for code in 0..total {
            let mut v = basis[lead].clone();
            let mut c = code;
            for b in &basis[lead + 1..] {
                let a = (c % q) as u32;
                c /= q;
                if a != 0 {
                    linalg::axpy(f, &mut v, a, b);
                }
            }
            out.push(v);
        }
    }
    out
}
