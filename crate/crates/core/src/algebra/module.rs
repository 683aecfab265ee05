use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use super::Algebra;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, SparseMat, Subspace, Vector};

/// A finite module over an [`Algebra`], given by the action of each
/// algebra generator.
pub struct Module {
    algebra: Arc<Algebra>,
    dim: usize,
    actions: Vec<SparseMat>,
    name: String,
    labels: Vec<String>,
    dual: OnceLock<Arc<Module>>,
}

impl std::fmt::Debug for Module {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Module({}, dim {})", self.name, self.dim)
    }
}

impl Module {
    pub(super) fn regular_of(algebra: Arc<Algebra>) -> Arc<Module> {
        let labels = algebra.labels();
        Arc::new(Module {
            dim: algebra.dim(),
            actions: algebra.gen_mats().to_vec(),
            name: "A".into(),
            labels,
            algebra,
            dual: OnceLock::new(),
        })
    }

    /// Builds a module and verifies that the generator actions commute and
    /// satisfy every relation of the algebra.
    pub fn new_checked(
        algebra: Arc<Algebra>,
        actions: Vec<SparseMat>,
        name: impl Into<String>,
        labels: Option<Vec<String>>,
    ) -> Result<Arc<Module>> {
        let dim = actions.first().map_or(0, |a| a.rows);
        let name = name.into();
        if actions.len() != algebra.num_gens() || actions.iter().any(|a| a.rows != dim || a.ncols() != dim) {
            return Err(Error::Construction(format!("module {name}: action matrices have the wrong shape")));
        }
        let m = Module {
            labels: labels.unwrap_or_else(|| (0..dim).map(|i| format!("e{i}")).collect()),
            algebra,
            dim,
            actions,
            name,
            dual: OnceLock::new(),
        };
        m.verify()?;
        Ok(Arc::new(m))
    }

    fn verify(&self) -> Result<()> {
        let f = self.field();
        let alg = &self.algebra;
        for a in 0..self.actions.len() {
            for b in a + 1..self.actions.len() {
                for j in 0..self.dim {
                    let e = linalg::unit(self.dim, j);
                    if self.actions[a].apply(f, &self.actions[b].apply(f, &e))
                        != self.actions[b].apply(f, &self.actions[a].apply(f, &e))
                    {
                        return Err(Error::Construction(format!(
                            "module {}: actions of {} and {} do not commute",
                            self.name,
                            alg.gen_names()[a],
                            alg.gen_names()[b]
                        )));
                    }
                }
            }
        }
        // g * e_i computed in the algebra must act as g composed with e_i
        for i in 0..alg.dim() {
            for g in 0..alg.num_gens() {
                let prod = alg.gen_mats()[g].column(i);
                for j in 0..self.dim {
                    let x = linalg::unit(self.dim, j);
                    let lhs = self.act(&prod, &x);
                    let rhs = self.actions[g].apply(f, &self.act_basis(i, &x));
                    if lhs != rhs {
                        return Err(Error::Construction(format!(
                            "module {}: action is not compatible with the product {}*{}",
                            self.name,
                            alg.gen_names()[g],
                            alg.label(i)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn actions(&self) -> &[SparseMat] {
        &self.actions
    }

    pub fn with_name(self: &Arc<Self>, name: impl Into<String>) -> Arc<Module> {
        Arc::new(Module {
            algebra: self.algebra.clone(),
            dim: self.dim,
            actions: self.actions.clone(),
            name: name.into(),
            labels: self.labels.clone(),
            dual: OnceLock::new(),
        })
    }

    /// Action of the algebra basis element `i`.
    pub fn act_basis(&self, i: usize, x: &[u32]) -> Vector {
        self.algebra.apply_word(&self.algebra.words()[i], x, &self.actions)
    }

    /// Action of an arbitrary algebra element.
    pub fn act(&self, a: &[u32], x: &[u32]) -> Vector {
        let f = self.field();
        let mut out = linalg::zero(self.dim);
        for (i, &c) in a.iter().enumerate() {
            if c != 0 {
                linalg::axpy(f, &mut out, c, &self.act_basis(i, x));
            }
        }
        out
    }

    /// The linear dual with the transposed action. Cached, so repeated
    /// calls return the same module; the dual of the dual is a distinct
    /// module identified with `self` through the identity matrix.
    pub fn dual(&self) -> Arc<Module> {
        self.dual
            .get_or_init(|| {
                Arc::new(Module {
                    algebra: self.algebra.clone(),
                    dim: self.dim,
                    actions: self.actions.iter().map(SparseMat::transpose).collect(),
                    name: dual_name(&self.name),
                    labels: self.labels.iter().map(|l| format!("{l}*")).collect(),
                    dual: OnceLock::new(),
                })
            })
            .clone()
    }

    /// Matrix identifying `self` with the dual of its dual.
    pub fn biduality(&self) -> SparseMat {
        SparseMat::identity(self.dim)
    }

    pub fn zero_space(&self) -> Subspace {
        Subspace::zero(self.dim)
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::full(self.dim)
    }

    /// Smallest submodule containing the given vectors.
    pub fn span(&self, vectors: impl IntoIterator<Item = Vector>) -> Subspace {
        let f = self.field();
        let mut s = Subspace::zero(self.dim);
        let mut queue: Vec<Vector> = vectors.into_iter().collect();
        while let Some(v) = queue.pop() {
            if s.insert(f, v.clone()) {
                for a in &self.actions {
                    let w = a.apply(f, &v);
                    if !linalg::is_zero(&w) {
                        queue.push(w);
                    }
                }
            }
        }
        s
    }

    pub fn is_submodule(&self, s: &Subspace) -> bool {
        let f = self.field();
        s.rows().iter().all(|r| self.actions.iter().all(|a| s.contains(f, &a.apply(f, r))))
    }

    /// `m * N`.
    pub fn m_times(&self, n: &Subspace) -> Subspace {
        let f = self.field();
        let mut out = Subspace::zero(self.dim);
        for r in n.rows() {
            for a in &self.actions {
                out.insert(f, a.apply(f, r));
            }
        }
        out
    }

    /// `I * N` for an ideal `I` of the algebra.
    pub fn product(&self, ideal: &Subspace, n: &Subspace) -> Subspace {
        let f = self.field();
        let mut out = Subspace::zero(self.dim);
        for a in ideal.rows() {
            for r in n.rows() {
                out.insert(f, self.act(a, r));
            }
        }
        out
    }

    /// `(N :_M J) = {x in M : J x ⊆ N}` for an ideal `J`.
    pub fn colon_ideal(&self, n: &Subspace, j: &Subspace) -> Subspace {
        let f = self.field();
        if j.is_zero() {
            return self.full_space();
        }
        let images: Vec<Vector> = (0..self.dim)
            .map(|b| {
                let x = linalg::unit(self.dim, b);
                let mut img = Vec::with_capacity(j.dim() * self.dim);
                for a in j.rows() {
                    img.extend(n.reduced(f, &self.act(a, &x)));
                }
                img
            })
            .collect();
        linalg::kernel(f, j.dim() * self.dim, &images)
    }

    /// `(N :_M m)`, the preimage of the socle of `M/N`.
    pub fn colon_max(&self, n: &Subspace) -> Subspace {
        let f = self.field();
        let images: Vec<Vector> = (0..self.dim)
            .map(|b| {
                let x = linalg::unit(self.dim, b);
                let mut img = Vec::with_capacity(self.actions.len() * self.dim);
                for a in &self.actions {
                    img.extend(n.reduced(f, &a.apply(f, &x)));
                }
                img
            })
            .collect();
        linalg::kernel(f, self.actions.len() * self.dim, &images)
    }

    /// `(N :_A L) = {a in A : a L ⊆ N}`, an ideal of the algebra.
    pub fn colon_to_ring(&self, n: &Subspace, l: &Subspace) -> Subspace {
        let f = self.field();
        let ad = self.algebra.dim();
        if l.is_zero() {
            return Subspace::full(ad);
        }
        let images: Vec<Vector> = (0..ad)
            .map(|i| {
                let mut img = Vec::with_capacity(l.dim() * self.dim);
                for r in l.rows() {
                    img.extend(n.reduced(f, &self.act_basis(i, r)));
                }
                img
            })
            .collect();
        linalg::kernel(f, l.dim() * self.dim, &images)
    }

    pub fn socle(&self) -> Subspace {
        self.colon_max(&self.zero_space())
    }

    /// Annihilator of the whole module.
    pub fn annihilator(&self) -> Subspace {
        self.colon_to_ring(&self.zero_space(), &self.full_space())
    }

    /// Minimal number of generators of `N`.
    pub fn min_generators(&self, n: &Subspace) -> usize {
        n.dim() - self.m_times(n).dim()
    }

    /// A minimal generating set of `N`, canonical for the submodule.
    pub fn minimal_generators(&self, n: &Subspace) -> Vec<Vector> {
        let f = self.field();
        let mn = self.m_times(n);
        let s = Subspace::span(f, self.dim, n.rows().iter().map(|r| mn.reduced(f, r)));
        s.rows().iter().map(|r| mn.reduced(f, r)).collect()
    }

    pub fn quotient(self: &Arc<Self>, n: &Subspace) -> QuotientMap {
        QuotientMap::new(self.clone(), n.clone())
    }

    /// The submodule `s` as a module in its own right, with basis the
    /// echelon rows of `s`. Row `i` of the returned list is the image of
    /// basis vector `i` under the inclusion.
    pub fn restrict(&self, s: &Subspace) -> (Arc<Module>, Vec<Vector>) {
        let f = self.field();
        let k = s.dim();
        let coords = |v: &[u32]| -> Vector { s.pivots().iter().map(|&p| v[p]).collect() };
        let actions = self
            .actions
            .iter()
            .map(|g| {
                let cols: Vec<Vector> = s.rows().iter().map(|r| coords(&g.apply(f, r))).collect();
                SparseMat::from_columns(f, k, &cols)
            })
            .collect();
        let sub = Arc::new(Module {
            algebra: self.algebra.clone(),
            dim: k,
            actions,
            name: format!("U<{}", self.name),
            labels: (0..k).map(|i| format!("u{i}")).collect(),
            dual: OnceLock::new(),
        });
        (sub, s.rows().to_vec())
    }
}

fn dual_name(name: &str) -> String {
    if name.contains(' ') || name.contains('/') {
        format!("({name})^v")
    } else {
        format!("{name}^v")
    }
}

/// The quotient `M/N` with its projection and section.
pub struct QuotientMap {
    pub source: Arc<Module>,
    pub sub: Subspace,
    pub target: Arc<Module>,
    keep: Vec<usize>,
}

impl QuotientMap {
    fn new(source: Arc<Module>, sub: Subspace) -> Self {
        let f = source.field();
        let keep = sub.non_pivots();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let m = keep.len();
        let actions = source
            .actions()
            .iter()
            .map(|g| {
                let cols: Vec<Vector> = keep
                    .iter()
                    .map(|&c| {
                        let img = sub.reduced(f, &g.column(c));
                        let mut out = linalg::zero(m);
                        for (i, &x) in img.iter().enumerate() {
                            if x != 0 {
                                out[pos[&i]] = x;
                            }
                        }
                        out
                    })
                    .collect();
                SparseMat::from_columns(f, m, &cols)
            })
            .collect();
        let target = Arc::new(Module {
            algebra: source.algebra().clone(),
            dim: m,
            actions,
            name: format!("{}/N", source.name()),
            labels: keep.iter().map(|&i| source.labels()[i].clone()).collect(),
            dual: OnceLock::new(),
        });
        QuotientMap { source, sub, target, keep }
    }

    pub fn project(&self, v: &[u32]) -> Vector {
        let r = self.sub.reduced(self.source.field(), v);
        self.keep.iter().map(|&i| r[i]).collect()
    }

    pub fn project_space(&self, s: &Subspace) -> Subspace {
        Subspace::span(self.source.field(), self.target.dim(), s.rows().iter().map(|r| self.project(r)))
    }

    pub fn lift(&self, v: &[u32]) -> Vector {
        let mut out = linalg::zero(self.source.dim());
        for (&i, &c) in self.keep.iter().zip(v) {
            out[i] = c;
        }
        out
    }

    /// Preimage of a subspace of the quotient.
    pub fn preimage(&self, s: &Subspace) -> Subspace {
        let f = self.source.field();
        let mut out = self.sub.clone();
        for r in s.rows() {
            out.insert(f, self.lift(r));
        }
        out
    }
}

/// Block-diagonal direct sum of modules over the same algebra.
pub fn direct_sum(parts: &[Arc<Module>], name: impl Into<String>) -> Result<Arc<Module>> {
    let Some(first) = parts.first() else {
        return Err(Error::Usage("direct sum of no modules".into()));
    };
    let alg = first.algebra().clone();
    if parts.iter().any(|p| !Arc::ptr_eq(p.algebra(), &alg)) {
        return Err(Error::Usage("direct sum of modules over different algebras".into()));
    }
    let dim: usize = parts.iter().map(|p| p.dim()).sum();
    let mut actions = Vec::new();
    for g in 0..alg.num_gens() {
        let mut cols = Vec::with_capacity(dim);
        let mut off = 0u32;
        for p in parts {
            for col in &p.actions()[g].cols {
                cols.push(col.iter().map(|&(r, c)| (r + off, c)).collect());
            }
            off += p.dim() as u32;
        }
        actions.push(SparseMat { rows: dim, cols });
    }
    let mut labels = Vec::with_capacity(dim);
    for (k, p) in parts.iter().enumerate() {
        labels.extend(p.labels().iter().map(|l| format!("{l}[{k}]")));
    }
    Ok(Arc::new(Module { algebra: alg, dim, actions, name: name.into(), labels, dual: OnceLock::new() }))
}

/// A submodule of a specific module.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub module: Arc<Module>,
    pub space: Subspace,
}

impl PartialEq for Submodule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.module, &other.module) && self.space == other.space
    }
}

impl Eq for Submodule {}

impl Submodule {
    pub fn new(module: Arc<Module>, space: Subspace) -> Result<Submodule> {
        if space.ambient_dim() != module.dim() {
            return Err(Error::Usage("subspace lives in a different ambient module".into()));
        }
        if !module.is_submodule(&space) {
            return Err(Error::Usage("subspace is not closed under the action".into()));
        }
        Ok(Submodule { module, space })
    }

    pub fn generated(module: Arc<Module>, vectors: impl IntoIterator<Item = Vector>) -> Submodule {
        let space = module.span(vectors);
        Submodule { module, space }
    }

    pub fn zero(module: Arc<Module>) -> Submodule {
        let space = module.zero_space();
        Submodule { module, space }
    }

    pub fn whole(module: Arc<Module>) -> Submodule {
        let space = module.full_space();
        Submodule { module, space }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    fn same(&self, other: &Submodule) -> Result<()> {
        if Arc::ptr_eq(&self.module, &other.module) {
            Ok(())
        } else {
            Err(Error::Usage("submodules of different ambient modules".into()))
        }
    }

    pub fn sum(&self, other: &Submodule) -> Result<Submodule> {
        self.same(other)?;
        Ok(Submodule { module: self.module.clone(), space: self.space.sum(self.module.field(), &other.space) })
    }

    pub fn intersect(&self, other: &Submodule) -> Result<Submodule> {
        self.same(other)?;
        Ok(Submodule { module: self.module.clone(), space: self.space.intersect(self.module.field(), &other.space) })
    }

    pub fn is_subset_of(&self, other: &Submodule) -> Result<bool> {
        self.same(other)?;
        Ok(self.space.is_subspace_of(self.module.field(), &other.space))
    }

    /// `(self :_M J)` for an ideal `J` of the algebra, given as an ideal
    /// of the regular module.
    pub fn colon(&self, j: &Submodule) -> Result<Submodule> {
        if !Arc::ptr_eq(j.module.algebra(), self.module.algebra()) || j.module.dim() != j.module.algebra().dim() {
            return Err(Error::Usage("colon by an ideal of a different algebra".into()));
        }
        Ok(Submodule { module: self.module.clone(), space: self.module.colon_ideal(&self.space, &j.space) })
    }

    /// `(self :_A L)` for a submodule `L` of the same module.
    pub fn colon_ring(&self, l: &Submodule) -> Result<Submodule> {
        self.same(l)?;
        let reg = self.module.algebra().regular();
        Ok(Submodule { module: reg, space: self.module.colon_to_ring(&self.space, &l.space) })
    }

    /// Product with an ideal of the algebra.
    pub fn times(&self, ideal: &Submodule) -> Result<Submodule> {
        if !Arc::ptr_eq(ideal.module.algebra(), self.module.algebra()) {
            return Err(Error::Usage("product with an ideal of a different algebra".into()));
        }
        Ok(Submodule { module: self.module.clone(), space: self.module.product(&ideal.space, &self.space) })
    }

    /// Annihilator of this submodule, as an ideal.
    pub fn annihilator(&self) -> Submodule {
        let reg = self.module.algebra().regular();
        Submodule { module: reg, space: self.module.colon_to_ring(&self.module.zero_space(), &self.space) }
    }

    /// Whether the quotient of the ambient module by `self` has a
    /// one-dimensional socle.
    pub fn is_irreducible(&self) -> Result<bool> {
        if self.space.is_full() {
            return Err(Error::Domain("the unit ideal is not irreducible".into()));
        }
        Ok(self.module.colon_max(&self.space).dim() - self.space.dim() == 1)
    }
}
