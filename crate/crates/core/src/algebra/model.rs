use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::{Algebra, AlgebraParts, Module};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, SparseMat, Subspace, Vector};
use crate::poly::{self, Mono, Poly};
use crate::semigroups::NumericalSemigroup;

/// Per-variable truncation exponents; semigroup models use one entry.
pub type Precision = Vec<u32>;

/// Resource caps shared by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of submodules produced by one lattice enumeration.
    pub lattice: usize,
    /// Maximum dimension of a materialized tensor product.
    pub tensor: usize,
    /// Maximum truncation dimension used by Frobenius powers.
    pub frobenius_dim: usize,
    /// Maximum dimension of any truncation.
    pub truncation_dim: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { lattice: 20_000, tensor: 4096, frobenius_dim: 4096, truncation_dim: 6000 }
    }
}

impl Caps {
    /// Reads overrides from `CLINT_CAPS`, a comma-separated list such as
    /// `lattice=20000,tensor=4096`.
    pub fn from_env() -> Result<Caps> {
        match std::env::var("CLINT_CAPS") {
            Ok(s) => Caps::parse(&s),
            Err(_) => Ok(Caps::default()),
        }
    }

    pub fn parse(s: &str) -> Result<Caps> {
        let mut caps = Caps::default();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("malformed cap '{item}', expected key=value")))?;
            let v: usize = v.trim().parse().map_err(|_| Error::Usage(format!("cap '{k}' needs an integer value")))?;
            match k.trim() {
                "lattice" => caps.lattice = v,
                "tensor" => caps.tensor = v,
                "frobenius_dim" => caps.frobenius_dim = v,
                "truncation_dim" => caps.truncation_dim = v,
                other => return Err(Error::Usage(format!("unknown cap '{other}'"))),
            }
        }
        Ok(caps)
    }
}

#[derive(Clone, Debug)]
pub enum ModelKind {
    /// `k[[t^S]]`, truncated at `t^N`.
    Semigroup(Arc<NumericalSemigroup>),
    /// `k[[vars]]/(x^d - tail)` with `tail` free of `x`, truncated by pure
    /// powers of the other variables.
    Hypersurface { var: usize, degree: u32, tail: Poly },
    /// `k[[vars]]/(relations)`. Monomial relations are handled by dropping
    /// monomials; any other relation makes the model Artinian at its
    /// declared precision.
    Presented { monomials: Vec<Mono>, general: Vec<Poly>, fixed: Option<Precision> },
}

/// Descriptive data attached to a model.
#[derive(Clone, Debug)]
pub struct ModelMeta {
    pub name: String,
    pub gorenstein: bool,
    pub dimension: u32,
    /// Citation for treating the interior as its Artinistic version, when
    /// the operator vouches for it.
    pub interior_equals_artinistic: Option<String>,
    /// A system of parameters, used by irreducible sequence recipes.
    pub parameters: Vec<Poly>,
}

/// One truncation `A_P` together with its monomial index.
pub struct Truncation {
    pub precision: Precision,
    pub algebra: Arc<Algebra>,
    /// Monomials of the truncation basis before any general relations.
    free_index: HashMap<Mono, usize>,
    free_dim: usize,
    reducer: Option<Reducer>,
}

/// Passage from the monomial basis to a quotient by general relations.
struct Reducer {
    reversed: Subspace,
    keep: Vec<usize>,
}

impl Truncation {
    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    fn reduce_free(&self, f: &Field, v: &[u32]) -> Vector {
        match &self.reducer {
            None => v.to_vec(),
            Some(r) => {
                let rev: Vector = v.iter().rev().copied().collect();
                let red = r.reversed.reduced(f, &rev);
                let n = v.len();
                r.keep.iter().map(|&i| red[n - 1 - i]).collect()
            }
        }
    }

    pub fn index_of(&self, m: &Mono) -> Option<usize> {
        if self.reducer.is_some() {
            return None;
        }
        self.free_index.get(m).copied()
    }
}

pub struct RingModel {
    kind: ModelKind,
    field: Arc<Field>,
    vars: Vec<String>,
    meta: ModelMeta,
    caps: Caps,
    cache: Mutex<HashMap<Precision, Arc<Truncation>>>,
}

impl std::fmt::Debug for RingModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "RingModel({} over {})", self.meta.name, self.field.spec())
    }
}

impl RingModel {
    pub fn semigroup(field: Arc<Field>, gens: &[u32]) -> Result<Arc<RingModel>> {
        let s = Arc::new(NumericalSemigroup::new(gens)?);
        let meta = ModelMeta {
            name: format!("k[[t^{}]]", s.to_string().trim_start_matches('S')),
            gorenstein: s.is_symmetric(),
            dimension: 1,
            interior_equals_artinistic: Some("complete one-dimensional domain with an isolated singularity".into()),
            parameters: vec![Poly::monomial(vec![s.multiplicity()], 1)],
        };
        Ok(Arc::new(RingModel {
            kind: ModelKind::Semigroup(s),
            field,
            vars: vec!["t".into()],
            meta,
            caps: Caps::default(),
            cache: Mutex::new(HashMap::new()),
        }))
    }

    /// `k[[vars]]/(vars[var]^degree - tail)`.
    pub fn hypersurface(
        field: Arc<Field>,
        vars: Vec<String>,
        var: usize,
        degree: u32,
        tail: Poly,
    ) -> Result<Arc<RingModel>> {
        if var >= vars.len() || degree < 2 {
            return Err(Error::Construction("rewriting rule needs a variable and an exponent of at least 2".into()));
        }
        if tail.terms.keys().any(|m| m[var] > 0) {
            return Err(Error::Construction(format!(
                "the right-hand side of the rule for {} must not involve {}",
                vars[var], vars[var]
            )));
        }
        if tail.terms.keys().any(|m| m.iter().sum::<u32>() == 0) {
            return Err(Error::Construction("the rewriting rule has a constant term, so the ring is not local".into()));
        }
        let mut params = Vec::new();
        for i in 0..vars.len() {
            if i != var {
                params.push(Poly::var(vars.len(), i));
            }
        }
        let dimension = vars.len() as u32 - 1;
        let name = format!(
            "k[[{}]]/({}^{} - ({}))",
            vars.join(","),
            vars[var],
            degree,
            poly::format_terms(&field, &vars, &tail.terms.iter().map(|(m, c)| (m.clone(), *c)).collect::<Vec<_>>())
        );
        Ok(Arc::new(RingModel {
            kind: ModelKind::Hypersurface { var, degree, tail },
            field,
            vars,
            meta: ModelMeta { name, gorenstein: true, dimension, interior_equals_artinistic: None, parameters: params },
            caps: Caps::default(),
            cache: Mutex::new(HashMap::new()),
        }))
    }

    /// `k[[vars]]/(relations)`. A model with non-monomial relations needs a
    /// fixed precision at which it is Artinian.
    pub fn presented(
        field: Arc<Field>,
        vars: Vec<String>,
        relations: Vec<Poly>,
        fixed: Option<Precision>,
    ) -> Result<Arc<RingModel>> {
        let n = vars.len();
        let mut monomials = Vec::new();
        let mut general = Vec::new();
        for r in relations {
            if r.is_zero() {
                continue;
            }
            if r.terms.keys().any(|m| m.iter().sum::<u32>() == 0) {
                return Err(Error::Construction("a relation has a constant term, so the ring is not local".into()));
            }
            if r.terms.len() == 1 {
                monomials.push(r.terms.keys().next().unwrap().clone());
            } else {
                general.push(r);
            }
        }
        if let Some(p) = &fixed {
            if p.len() != n || p.contains(&0) {
                return Err(Error::Construction("precision needs one positive exponent per variable".into()));
            }
        }
        if !general.is_empty() && fixed.is_none() {
            return Err(Error::Capability(
                "non-monomial relations are supported only for Artinian quotients with a fixed precision".into(),
            ));
        }
        let dimension = if fixed.is_some() && !general.is_empty() { 0 } else { independent_set_size(n, &monomials) };
        let fixed = if general.is_empty() { None } else { fixed };
        let mut params = Vec::new();
        if dimension == 1 && n > 1 {
            let mut s = Poly::zero();
            for i in 0..n {
                s = s.add(&field, &Poly::var(n, i));
            }
            params.push(s);
        } else if dimension > 0 {
            params.extend((0..n).map(|i| Poly::var(n, i)).take(dimension as usize));
        }
        let name = {
            let rels: Vec<String> = monomials
                .iter()
                .map(|m| poly::format_mono(&vars, m))
                .chain(general.iter().map(|g| {
                    poly::format_terms(&field, &vars, &g.terms.iter().map(|(m, c)| (m.clone(), *c)).collect::<Vec<_>>())
                }))
                .collect();
            format!("k[[{}]]/({})", vars.join(","), rels.join(", "))
        };
        let model = RingModel {
            kind: ModelKind::Presented { monomials, general, fixed },
            field,
            vars,
            meta: ModelMeta {
                name,
                gorenstein: false,
                dimension,
                interior_equals_artinistic: None,
                parameters: params,
            },
            caps: Caps::default(),
            cache: Mutex::new(HashMap::new()),
        };
        let mut model = model;
        model.meta.gorenstein = model.compute_gorenstein()?;
        if model.meta.dimension == 1 && model.is_graded() {
            model.meta.interior_equals_artinistic =
                Some("completion of a positively graded ring at its homogeneous maximal ideal".into());
        }
        Ok(Arc::new(model))
    }

    fn compute_gorenstein(&self) -> Result<bool> {
        match &self.kind {
            ModelKind::Presented { monomials, general, fixed } => {
                if let Some(p) = fixed {
                    let t = self.truncation(p)?;
                    return Ok(t.algebra.regular().socle().dim() == 1);
                }
                if general.is_empty() && self.meta.dimension == 0 {
                    // Artinian monomial quotient: socle of the full quotient
                    let p: Precision =
                        (0..self.vars.len()).map(|i| pure_power_bound(monomials, i).unwrap_or(1)).collect();
                    let t = self.truncation(&p)?;
                    return Ok(t.algebra.regular().socle().dim() == 1);
                }
                Ok(monomials.len() + general.len() <= 1)
            }
            _ => Ok(true),
        }
    }

    pub fn with_caps(self: &Arc<Self>, caps: Caps) -> Arc<RingModel> {
        Arc::new(RingModel {
            kind: self.kind.clone(),
            field: self.field.clone(),
            vars: self.vars.clone(),
            meta: self.meta.clone(),
            caps,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn with_meta(self: &Arc<Self>, meta: ModelMeta) -> Arc<RingModel> {
        Arc::new(RingModel {
            kind: self.kind.clone(),
            field: self.field.clone(),
            vars: self.vars.clone(),
            meta,
            caps: self.caps,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn characteristic(&self) -> u32 {
        self.field.p()
    }

    pub fn semigroup_of(&self) -> Option<&Arc<NumericalSemigroup>> {
        match &self.kind {
            ModelKind::Semigroup(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_artinian(&self) -> bool {
        matches!(&self.kind, ModelKind::Presented { fixed: Some(_), .. }) || self.meta.dimension == 0
    }

    /// Whether every relation is homogeneous for the standard grading.
    pub fn is_graded(&self) -> bool {
        let w = self.weights();
        match &self.kind {
            ModelKind::Semigroup(_) => true,
            ModelKind::Hypersurface { var, degree, tail } => tail.terms.keys().all(|m| {
                let mut x = vec![0; self.vars.len()];
                x[*var] = *degree;
                poly::weighted_degree(m, &w) == poly::weighted_degree(&x, &w)
            }),
            ModelKind::Presented { general, .. } => general.iter().all(|g| g.is_homogeneous(&w)),
        }
    }

    pub fn weights(&self) -> Vec<u32> {
        vec![1; self.vars.len()]
    }

    // ---- precision bookkeeping ----

    fn canonical(&self, p: &[u32]) -> Precision {
        match &self.kind {
            ModelKind::Semigroup(_) => vec![p[0].max(1)],
            ModelKind::Hypersurface { var, degree, .. } => {
                let mut q: Vec<u32> = p.iter().map(|&x| x.max(1)).collect();
                q[*var] = *degree;
                q
            }
            ModelKind::Presented { fixed: Some(fp), .. } => fp.clone(),
            ModelKind::Presented { monomials, .. } => p
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let x = x.max(1);
                    pure_power_bound(monomials, i).map_or(x, |b| x.min(b))
                })
                .collect(),
        }
    }

    pub fn join(&self, a: &[u32], b: &[u32]) -> Precision {
        self.canonical(&a.iter().zip(b).map(|(x, y)| *x.max(y)).collect::<Vec<_>>())
    }

    pub fn precision_le(&self, a: &[u32], b: &[u32]) -> bool {
        a.iter().zip(b).all(|(x, y)| x <= y)
    }

    pub fn unit_precision(&self) -> Precision {
        self.canonical(&vec![1; self.vars.len()])
    }

    /// Smallest precision at which the given generators are visible.
    pub fn initial_precision(&self, polys: &[Poly]) -> Precision {
        match &self.kind {
            ModelKind::Semigroup(_) => {
                let top = polys.iter().flat_map(|p| p.terms.keys().map(|m| m[0])).max().unwrap_or(0);
                vec![top + 1]
            }
            _ => {
                let d = polys.iter().filter_map(|p| p.total_degree()).max().unwrap_or(0).max(1);
                self.canonical(&vec![d + 1; self.vars.len()])
            }
        }
    }

    /// A precision `P'` with `Q_{P'} ⊆ m Q_P`.
    pub fn witness_precision(&self, p: &[u32]) -> Precision {
        match &self.kind {
            ModelKind::Semigroup(s) => vec![p[0].max(s.conductor()) + s.multiplicity()],
            ModelKind::Presented { fixed: Some(fp), .. } => fp.clone(),
            _ => self.canonical(&p.iter().map(|x| x + 1).collect::<Vec<_>>()),
        }
    }

    pub fn double(&self, p: &[u32]) -> Precision {
        self.canonical(&p.iter().map(|x| x * 2).collect::<Vec<_>>())
    }

    /// Precision at which `I^{[q]}` contains the truncation ideal, for an
    /// ideal represented at `p`.
    pub fn frobenius_precision(&self, p: &[u32], q: u64) -> Precision {
        match &self.kind {
            ModelKind::Semigroup(s) => {
                let t = s.next_member(p[0]) as u64;
                vec![(q * t + s.conductor() as u64) as u32]
            }
            _ => self.canonical(&p.iter().map(|&x| (x as u64 * q) as u32).collect::<Vec<_>>()),
        }
    }

    /// Generators of `Q_P` modulo `Q_{P'}` for `P' = witness_precision(P)`.
    pub fn truncation_generators(&self, p: &[u32]) -> Vec<Poly> {
        let n = self.vars.len();
        match &self.kind {
            ModelKind::Semigroup(s) => {
                let w = self.witness_precision(p)[0];
                (p[0]..w).filter(|&e| s.contains_u(e)).map(|e| Poly::monomial(vec![e], 1)).collect()
            }
            ModelKind::Hypersurface { var, .. } => (0..n)
                .filter(|i| i != var)
                .map(|i| {
                    let mut m = vec![0; n];
                    m[i] = p[i];
                    Poly::monomial(m, 1)
                })
                .collect(),
            ModelKind::Presented { fixed: Some(_), .. } => Vec::new(),
            ModelKind::Presented { monomials, .. } => (0..n)
                .filter(|&i| pure_power_bound(monomials, i).map_or(true, |b| p[i] < b))
                .map(|i| {
                    let mut m = vec![0; n];
                    m[i] = p[i];
                    Poly::monomial(m, 1)
                })
                .collect(),
        }
    }

    /// Number of basis monomials at precision `p`, without building it.
    pub fn dim_of(&self, p: &[u32]) -> usize {
        let p = self.canonical(p);
        match &self.kind {
            ModelKind::Semigroup(s) => s.members_below(p[0]).len(),
            _ => self.free_monos(&p).len(),
        }
    }

    // ---- truncations ----

    fn free_monos(&self, p: &[u32]) -> Vec<Mono> {
        let n = self.vars.len();
        let monomials: &[Mono] = match &self.kind {
            ModelKind::Presented { monomials, .. } => monomials,
            _ => &[],
        };
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, p: &[u32], cur: &mut Vec<u32>, rel: &[Mono], out: &mut Vec<Mono>) {
            if i == p.len() {
                if !rel.iter().any(|r| divides(r, cur)) {
                    out.push(cur.clone());
                }
                return;
            }
            for e in 0..p[i] {
                cur[i] = e;
                rec(i + 1, p, cur, rel, out);
            }
            cur[i] = 0;
        }
        rec(0, p, &mut cur, monomials, &mut out);
        out.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        out
    }

    pub fn truncation(&self, p: &[u32]) -> Result<Arc<Truncation>> {
        let p = self.canonical(p);
        if let Some(t) = self.cache.lock().unwrap().get(&p) {
            return Ok(t.clone());
        }
        let d = self.dim_of(&p);
        if d > self.caps.truncation_dim {
            return Err(Error::Resource(format!(
                "truncation at precision {p:?} has dimension {d}, above the cap {}",
                self.caps.truncation_dim
            )));
        }
        let t = Arc::new(self.build(&p)?);
        self.cache.lock().unwrap().entry(p).or_insert(t.clone());
        Ok(t)
    }

    fn build(&self, p: &[u32]) -> Result<Truncation> {
        let f = &*self.field;
        match &self.kind {
            ModelKind::Semigroup(s) => {
                let members = s.members_below(p[0]);
                let index: HashMap<Mono, usize> = members.iter().enumerate().map(|(i, &e)| (vec![e], i)).collect();
                let n = members.len();
                let gens = s.generators();
                let gen_mats = gens
                    .iter()
                    .map(|&g| {
                        let cols: Vec<Vec<(u32, u32)>> = members
                            .iter()
                            .map(|&e| match index.get(&vec![e + g]) {
                                Some(&j) => vec![(j as u32, 1)],
                                None => vec![],
                            })
                            .collect();
                        SparseMat { rows: n, cols }
                    })
                    .collect();
                let mut words: Vec<Vec<u16>> = Vec::with_capacity(n);
                for &e in &members {
                    if e == 0 {
                        words.push(vec![]);
                        continue;
                    }
                    let (gi, &g) = gens.iter().enumerate().find(|(_, &g)| g <= e && s.contains_u(e - g)).unwrap();
                    let mut w = words[index[&vec![e - g]]].clone();
                    w.push(gi as u16);
                    words.push(w);
                }
                let algebra = Algebra::new(AlgebraParts {
                    field: self.field.clone(),
                    vars: self.vars.clone(),
                    monos: members.iter().map(|&e| vec![e]).collect(),
                    degrees: members.clone(),
                    gen_names: gens.iter().map(|g| format!("t^{g}")).collect(),
                    gen_mats,
                    words,
                })?;
                Ok(Truncation { precision: p.to_vec(), algebra, free_index: index, free_dim: n, reducer: None })
            }
            _ => {
                let monos = self.free_monos(p);
                let index: HashMap<Mono, usize> = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
                let n = monos.len();
                let nv = self.vars.len();
                let gen_mats: Vec<SparseMat> = (0..nv)
                    .map(|v| {
                        let cols: Vec<Vector> = monos
                            .iter()
                            .map(|m| {
                                let mut mm = m.clone();
                                mm[v] += 1;
                                let poly = self.nf(&Poly::monomial(mm, 1), p);
                                let mut col = linalg::zero(n);
                                for (k, &c) in &poly.terms {
                                    col[index[k]] = c;
                                }
                                col
                            })
                            .collect();
                        SparseMat::from_columns(f, n, &cols)
                    })
                    .collect();
                let words: Vec<Vec<u16>> = monos
                    .iter()
                    .map(|m| {
                        m.iter().enumerate().flat_map(|(v, &e)| std::iter::repeat(v as u16).take(e as usize)).collect()
                    })
                    .collect();
                let free = Algebra::new(AlgebraParts {
                    field: self.field.clone(),
                    vars: self.vars.clone(),
                    monos: monos.clone(),
                    degrees: monos.iter().map(|m| m.iter().sum()).collect(),
                    gen_names: self.vars.clone(),
                    gen_mats,
                    words,
                })?;
                let general: &[Poly] = match &self.kind {
                    ModelKind::Presented { general, .. } => general,
                    _ => &[],
                };
                if general.is_empty() {
                    return Ok(Truncation {
                        precision: p.to_vec(),
                        algebra: free,
                        free_index: index,
                        free_dim: n,
                        reducer: None,
                    });
                }
                let reg = free.regular();
                let gens: Vec<Vector> = general
                    .iter()
                    .map(|g| {
                        let poly = self.nf(g, p);
                        let mut v = linalg::zero(n);
                        for (k, &c) in &poly.terms {
                            v[index[k]] = c;
                        }
                        v
                    })
                    .collect();
                let ideal = reg.span(gens);
                let algebra = free.quotient(&ideal, true)?;
                let reversed =
                    Subspace::span(f, n, ideal.rows().iter().map(|r| r.iter().rev().copied().collect::<Vector>()));
                let keep: Vec<usize> = reversed.non_pivots().into_iter().map(|i| n - 1 - i).rev().collect();
                Ok(Truncation {
                    precision: p.to_vec(),
                    algebra,
                    free_index: index,
                    free_dim: n,
                    reducer: Some(Reducer { reversed, keep }),
                })
            }
        }
    }

    /// Normal form of a polynomial at precision `p`: rewriting applied and
    /// monomials outside the truncation dropped. Semigroup exponents are
    /// not checked here.
    pub fn nf(&self, poly: &Poly, p: &[u32]) -> Poly {
        let f = &*self.field;
        match &self.kind {
            ModelKind::Semigroup(_) => {
                Poly { terms: poly.terms.iter().filter(|(m, _)| m[0] < p[0]).map(|(m, c)| (m.clone(), *c)).collect() }
            }
            ModelKind::Presented { monomials, .. } => Poly {
                terms: poly
                    .terms
                    .iter()
                    .filter(|(m, _)| m.iter().zip(p).all(|(e, b)| e < b) && !monomials.iter().any(|r| divides(r, m)))
                    .map(|(m, c)| (m.clone(), *c))
                    .collect(),
            },
            ModelKind::Hypersurface { var, degree, tail } => {
                let keep =
                    |m: &Mono| m.iter().enumerate().all(|(i, &e)| if i == *var { e < *degree } else { e < p[i] });
                let trunc = |q: Poly| Poly {
                    terms: q
                        .terms
                        .into_iter()
                        .filter(|(m, _)| m.iter().enumerate().all(|(i, &e)| i == *var || e < p[i]))
                        .collect(),
                };
                let mut out = Poly::zero();
                let mut tail_pows: Vec<Poly> = vec![Poly::constant(self.vars.len(), 1)];
                for (m, &c) in &poly.terms {
                    if m.iter().enumerate().any(|(i, &e)| i != *var && e >= p[i]) {
                        continue;
                    }
                    let k = (m[*var] / degree) as usize;
                    while tail_pows.len() <= k {
                        let next = trunc(tail_pows.last().unwrap().mul(f, tail));
                        tail_pows.push(next);
                    }
                    let mut rest = m.clone();
                    rest[*var] %= degree;
                    let term = trunc(tail_pows[k].mul(f, &Poly::monomial(rest, c)));
                    out = out.add(f, &term);
                }
                debug_assert!(out.terms.keys().all(keep));
                out
            }
        }
    }

    /// Normal form without truncation, for graded computations.
    pub fn nf_graded(&self, poly: &Poly) -> Poly {
        let big: Vec<u32> = vec![u32::MAX / 4; self.vars.len()];
        match &self.kind {
            ModelKind::Hypersurface { var, degree, .. } => {
                let mut p = big;
                p[*var] = *degree;
                self.nf(poly, &p)
            }
            _ => self.nf(poly, &big),
        }
    }

    /// Standard monomials of a given total degree, in basis order.
    pub fn standard_monos_of_degree(&self, d: u32) -> Vec<Mono> {
        let n = self.vars.len();
        match &self.kind {
            ModelKind::Semigroup(s) => {
                if s.contains_u(d) {
                    vec![vec![d]]
                } else {
                    vec![]
                }
            }
            _ => {
                let mut out = Vec::new();
                let mut cur = vec![0u32; n];
                self.compositions(0, d, &mut cur, &mut out);
                out.sort_by(|a, b| b.cmp(a));
                out
            }
        }
    }

    fn compositions(&self, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        let n = self.vars.len();
        let cap = match &self.kind {
            ModelKind::Hypersurface { var, degree, .. } if *var == i => degree - 1,
            ModelKind::Presented { monomials, .. } => pure_power_bound(monomials, i).map_or(u32::MAX, |b| b - 1),
            _ => u32::MAX,
        };
        if i == n - 1 {
            if left <= cap {
                cur[i] = left;
                let ok = match &self.kind {
                    ModelKind::Presented { monomials, .. } => !monomials.iter().any(|r| divides(r, cur)),
                    _ => true,
                };
                if ok {
                    out.push(cur.clone());
                }
                cur[i] = 0;
            }
            return;
        }
        for e in 0..=left.min(cap) {
            cur[i] = e;
            self.compositions(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }

    /// Coordinates of a polynomial in the truncation at `p`.
    pub fn element(&self, p: &[u32], poly: &Poly) -> Result<Vector> {
        let t = self.truncation(p)?;
        self.element_in(&t, poly)
    }

    pub fn element_in(&self, t: &Truncation, poly: &Poly) -> Result<Vector> {
        let f = &*self.field;
        if let ModelKind::Semigroup(s) = &self.kind {
            for m in poly.terms.keys() {
                if !s.contains_u(m[0]) {
                    return Err(Error::Domain(format!("t^{} is not in the ring {}", m[0], self.meta.name)));
                }
            }
        }
        let red = self.nf(poly, &t.precision);
        let mut v = linalg::zero(t.free_dim);
        for (m, &c) in &red.terms {
            let i = t.free_index[m];
            v[i] = f.add(v[i], c);
        }
        Ok(t.reduce_free(f, &v))
    }

    /// The polynomial whose monomials are the basis labels.
    pub fn poly_of(&self, t: &Truncation, v: &[u32]) -> Poly {
        let mut out = Poly::zero();
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                out.terms.insert(t.algebra.monos()[i].clone(), c);
            }
        }
        out
    }

    /// Image of a vector under `A_from -> A_to`, for `to <= from`.
    pub fn project(&self, from: &Truncation, to: &Truncation, v: &[u32]) -> Vector {
        if from.precision == to.precision {
            return v.to_vec();
        }
        let mut out = linalg::zero(to.dim());
        for (i, &c) in v.iter().enumerate() {
            if c != 0 {
                if let Some(&j) = to.free_index.get(&from.algebra.monos()[i]) {
                    out[j] = c;
                }
            }
        }
        out
    }

    pub fn project_space(&self, from: &Truncation, to: &Truncation, s: &Subspace) -> Subspace {
        if from.precision == to.precision {
            return s.clone();
        }
        Subspace::span(&self.field, to.dim(), s.rows().iter().map(|r| self.project(from, to, r)))
    }

    /// Preimage of a subspace of `A_small` in `A_big`.
    pub fn lift_space(&self, small: &Truncation, big: &Truncation, s: &Subspace) -> Subspace {
        if small.precision == big.precision {
            return s.clone();
        }
        let f = &*self.field;
        let mut out = Subspace::zero(big.dim());
        for r in s.rows() {
            let mut v = linalg::zero(big.dim());
            for (i, &c) in r.iter().enumerate() {
                if c != 0 {
                    v[big.free_index[&small.algebra.monos()[i]]] = c;
                }
            }
            out.insert(f, v);
        }
        for (j, m) in big.algebra.monos().iter().enumerate() {
            if !small.free_index.contains_key(m) {
                out.insert(f, linalg::unit(big.dim(), j));
            }
        }
        out
    }

    /// The normalization of the model, truncated compatibly with `p`, as a
    /// module over the truncation at `p`.
    /// Returns the module and its unit element.
    pub fn normalization(&self, p: &[u32]) -> Result<(Arc<Module>, Vector)> {
        let t = self.truncation(p)?;
        let alg = t.algebra.clone();
        let f = &*self.field;
        match &self.kind {
            ModelKind::Semigroup(s) => {
                let n0 = s.next_member(t.precision[0]) as usize;
                let actions = s
                    .generators()
                    .iter()
                    .map(|&g| {
                        let cols = (0..n0)
                            .map(|j| if j + (g as usize) < n0 { vec![((j + g as usize) as u32, 1)] } else { vec![] })
                            .collect();
                        SparseMat { rows: n0, cols }
                    })
                    .collect();
                let labels = (0..n0).map(|j| if j == 0 { "1".to_string() } else { format!("t^{j}") }).collect();
                Ok((Module::new_checked(alg, actions, "k[[t]]", Some(labels))?, linalg::unit(n0, 0)))
            }
            _ if self.is_artinian() => {
                let actions = (0..alg.num_gens()).map(|_| SparseMat::zero(1, 1)).collect();
                Ok((Module::new_checked(alg, actions, "k", Some(vec!["1".into()]))?, vec![1]))
            }
            ModelKind::Presented { monomials, general, .. } if general.is_empty() && self.meta.dimension == 1 => {
                let n = self.vars.len();
                let pairwise = (0..n).all(|i| {
                    (i + 1..n).all(|j| {
                        let mut m = vec![0; n];
                        m[i] = 1;
                        m[j] = 1;
                        monomials.iter().any(|r| divides(r, &m))
                    })
                });
                let reduced = monomials.iter().all(|r| r.iter().all(|&e| e <= 1));
                if !(pairwise && reduced) {
                    return Err(Error::Capability(
                        "integral closure needs a one-dimensional model whose branches are coordinate lines".into(),
                    ));
                }
                // branch v: k[v]/v^{N_v}; the unit is the sum of the branch units
                let offs: Vec<usize> = (0..n)
                    .scan(0usize, |acc, v| {
                        let o = *acc;
                        *acc += t.precision[v] as usize;
                        Some(o)
                    })
                    .collect();
                let total: usize = t.precision.iter().map(|&x| x as usize).sum();
                let actions = (0..n)
                    .map(|u| {
                        let mut cols = vec![Vec::new(); total];
                        let nu = t.precision[u] as usize;
                        for j in 0..nu {
                            if j + 1 < nu {
                                cols[offs[u] + j] = vec![((offs[u] + j + 1) as u32, 1)];
                            }
                        }
                        SparseMat { rows: total, cols }
                    })
                    .collect::<Vec<_>>();
                let mut labels = Vec::with_capacity(total);
                for v in 0..n {
                    for j in 0..t.precision[v] {
                        labels.push(if j == 0 {
                            format!("1_{}", self.vars[v])
                        } else {
                            format!("{}^{}", self.vars[v], j)
                        });
                    }
                }
                let _ = f;
                let mut unit = linalg::zero(total);
                for &o in &offs {
                    unit[o] = 1;
                }
                Ok((Module::new_checked(alg, actions, "normalization", Some(labels))?, unit))
            }
            _ => Err(Error::Capability(format!("no normalization is available for {}", self.meta.name))),
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Exponent `b` such that `x_i^b` is a relation, if any.
fn pure_power_bound(monomials: &[Mono], i: usize) -> Option<u32> {
    monomials.iter().filter(|m| m.iter().enumerate().all(|(j, &e)| j == i || e == 0)).map(|m| m[i]).min()
}

/// Size of a largest set of variables supporting no relation.
fn independent_set_size(n: usize, monomials: &[Mono]) -> u32 {
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let ok = monomials.iter().all(|m| m.iter().enumerate().any(|(i, &e)| e > 0 && mask & (1 << i) == 0));
        if ok {
            best = best.max(mask.count_ones());
        }
    }
    best
}
