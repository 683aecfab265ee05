//! Closure operations on submodules of finite modules, and their
//! ring-level counterparts on ideals of a [`RingModel`](crate::RingModel).

mod checks;
mod ring;

use std::fmt;
use std::sync::Arc;

pub use checks::{
    check_axioms, check_nakayama, Axiom, AxiomCertificate, AxiomReport, NakayamaCertificate, NakayamaReport,
};
pub(crate) use ring::frob_poly;
pub use ring::{FrobeniusReport, RingClosure};

use crate::algebra::{Module, RingModel};
use crate::error::{Error, Result};
use crate::linalg::{self, Subspace, Vector};

/// Where a claimed property comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    AssertedByTheory(&'static str),
    VerifiedBySampling,
    NotClaimed,
}

impl Provenance {
    pub fn claimed(&self) -> bool {
        !matches!(self, Provenance::NotClaimed)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::AssertedByTheory(why) => write!(f, "asserted by theory ({why})"),
            Provenance::VerifiedBySampling => write!(f, "verified by sampling"),
            Provenance::NotClaimed => write!(f, "not claimed"),
        }
    }
}

/// Property flags of a closure.
#[derive(Clone, Debug)]
pub struct Properties {
    pub extensive: Provenance,
    pub idempotent: Provenance,
    pub order_preserving: Provenance,
    pub residual: Provenance,
    pub nakayama: Provenance,
}

/// A closure operation on submodules of finite modules over a finite local
/// algebra.
#[derive(Clone)]
pub enum Closure {
    Identity,
    /// `N ↦ {x : x ⊗ b = 0 in (M/N) ⊗ B for all b}`. When `unit` is set,
    /// `B` is a cyclic algebra and only `b = unit` is tested.
    ModuleB {
        name: String,
        b: Arc<Module>,
        unit: Option<Vector>,
    },
    /// `N + mM`.
    ResidueField,
    /// `M` when `mM ⊆ N`, otherwise `N`. Residual but not Nakayama.
    Collapse,
    /// `N ∩ mM`; not a closure at all.
    Broken,
    /// Frobenius closure of ideals in the algebra itself.
    Frobenius,
    /// `N :_M τ` for a fixed ideal `τ`.
    TightSocle {
        tau: Subspace,
    },
}

impl fmt::Debug for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Closure {
    /// Integral closure of ideals, realized as the module closure of the
    /// normalization.
    pub fn integral(model: &RingModel, p: &[u32]) -> Result<Closure> {
        let (b, unit) = model.normalization(p)?;
        Ok(Closure::ModuleB { name: "integral".into(), b, unit: Some(unit) })
    }

    pub fn module(name: impl Into<String>, b: Arc<Module>) -> Closure {
        Closure::ModuleB { name: name.into(), b, unit: None }
    }

    pub fn name(&self) -> String {
        match self {
            Closure::Identity => "identity".into(),
            Closure::ModuleB { name, .. } => {
                if name == "integral" {
                    name.clone()
                } else {
                    format!("module[B={name}]")
                }
            }
            Closure::ResidueField => "module[B=k]".into(),
            Closure::Collapse => "collapse".into(),
            Closure::Broken => "broken".into(),
            Closure::Frobenius => "frobenius".into(),
            Closure::TightSocle { .. } => "tight[socle]".into(),
        }
    }

    pub fn properties(&self) -> Properties {
        use Provenance::*;
        let all = |res: Provenance, nak: Provenance| Properties {
            extensive: AssertedByTheory("closure axiom"),
            idempotent: AssertedByTheory("closure axiom"),
            order_preserving: AssertedByTheory("closure axiom"),
            residual: res,
            nakayama: nak,
        };
        match self {
            Closure::Identity => all(AssertedByTheory("trivially residual"), AssertedByTheory("Nakayama's lemma")),
            Closure::ModuleB { .. } | Closure::ResidueField => all(
                AssertedByTheory("defined through the quotient M/N"),
                AssertedByTheory("module closures of finite modules over a local ring"),
            ),
            Closure::Collapse => all(AssertedByTheory("depends only on m(M/N)"), NotClaimed),
            Closure::Broken => Properties {
                extensive: NotClaimed,
                idempotent: NotClaimed,
                order_preserving: NotClaimed,
                residual: NotClaimed,
                nakayama: NotClaimed,
            },
            Closure::Frobenius => Properties {
                extensive: AssertedByTheory("closure axiom"),
                idempotent: AssertedByTheory("closure axiom"),
                order_preserving: AssertedByTheory("closure axiom"),
                residual: NotClaimed,
                nakayama: NotClaimed,
            },
            Closure::TightSocle { .. } => Properties {
                extensive: AssertedByTheory("tau is contained in the unit ideal"),
                idempotent: NotClaimed,
                order_preserving: AssertedByTheory("colon is monotone"),
                residual: AssertedByTheory("colon depends only on M/N"),
                nakayama: NotClaimed,
            },
        }
    }

    /// Whether the closure can be evaluated on submodules of `m`.
    pub fn supports(&self, m: &Module) -> bool {
        match self {
            Closure::ModuleB { b, .. } => Arc::ptr_eq(b.algebra(), m.algebra()),
            Closure::Frobenius => is_regular(m),
            Closure::TightSocle { tau } => tau.ambient_dim() == m.algebra().dim(),
            _ => true,
        }
    }

    /// `N^cl_M`.
    pub fn close(&self, m: &Module, n: &Subspace) -> Result<Subspace> {
        let f = m.field();
        if n.ambient_dim() != m.dim() {
            return Err(Error::Usage("submodule does not live in the given module".into()));
        }
        match self {
            Closure::Identity => Ok(n.clone()),
            Closure::ResidueField => Ok(n.sum(f, &m.m_times(&m.full_space()))),
            Closure::Collapse => {
                if m.m_times(&m.full_space()).is_subspace_of(f, n) {
                    Ok(m.full_space())
                } else {
                    Ok(n.clone())
                }
            }
            Closure::Broken => Ok(n.intersect(f, &m.m_times(&m.full_space()))),
            Closure::TightSocle { tau } => {
                if !self.supports(m) {
                    return Err(Error::Usage("tau is not an ideal of the module's algebra".into()));
                }
                Ok(m.colon_ideal(n, tau))
            }
            Closure::Frobenius => {
                if !self.supports(m) {
                    return Err(Error::Capability("Frobenius closure is implemented for ideals only".into()));
                }
                Ok(frobenius_in_algebra(m, n))
            }
            Closure::ModuleB { b, unit, .. } => {
                if !self.supports(m) {
                    return Err(Error::Usage("B is a module over a different algebra".into()));
                }
                module_closure(m, n, b, unit.as_deref())
            }
        }
    }
}

fn is_regular(m: &Module) -> bool {
    std::ptr::eq(m, &*m.algebra().regular())
}

/// Frobenius closure of an ideal in a finite local algebra, at an exponent
/// where every element of the maximal ideal has vanishing `q`-th power, so
/// that the union over all exponents has been reached.
fn frobenius_in_algebra(m: &Module, n: &Subspace) -> Subspace {
    let alg = m.algebra();
    let f = alg.field();
    let dim = alg.dim();
    let p = f.p() as u64;
    let mut q = p;
    let mut e = 1u32;
    while (q as usize) < dim {
        q *= p;
        e += 1;
    }
    let reg = alg.regular();
    let bracket = reg.span(n.rows().iter().map(|r| alg.pow(r, q)));
    let images: Vec<Vector> = (0..dim).map(|i| bracket.reduced(f, &alg.pow(&linalg::unit(dim, i), q))).collect();
    let twisted = linalg::kernel(f, dim, &images);
    let back = twisted.map_entries(f, |c| f.frobenius_inv(c, e));
    back.sum(f, n)
}

/// Shared by the module closures: the kernel of `M → (M/N) ⊗ B`, tested
/// against every basis element of `B`, or only `unit` for cyclic algebras.
fn module_closure(m: &Module, n: &Subspace, b: &Module, unit: Option<&[u32]>) -> Result<Subspace> {
    let f = m.field();
    let alg = m.algebra();
    // regular module with a cyclic algebra B: x ∈ cl(I) iff x·1_B ∈ IB
    if let Some(u) = unit {
        if is_regular(m) {
            let bd = b.dim();
            let ib = b.span(n.rows().iter().flat_map(|r| (0..bd).map(move |j| b.act(r, &linalg::unit(bd, j)))));
            let images: Vec<Vector> = (0..alg.dim()).map(|i| ib.reduced(f, &b.act_basis(i, u))).collect();
            return Ok(linalg::kernel(f, b.dim(), &images));
        }
    }
    let keep = n.non_pivots();
    let q = keep.len();
    let d = b.dim();
    if q == 0 {
        return Ok(m.full_space());
    }
    let caps = crate::algebra::Caps::default();
    if q * d > caps.tensor {
        return Err(Error::Resource(format!("tensor product of dimension {} exceeds the cap {}", q * d, caps.tensor)));
    }
    let project = |v: &[u32]| -> Vector {
        let r = n.reduced(f, v);
        keep.iter().map(|&i| r[i]).collect()
    };
    let bcols: Vec<Vec<Vector>> = b.actions().iter().map(|a| a.to_dense_columns()).collect();
    let mut rel = Subspace::zero(q * d);
    for (g, act) in m.actions().iter().enumerate() {
        for (i, &ci) in keep.iter().enumerate() {
            let ge = project(&act.column(ci));
            for j in 0..d {
                let mut v = linalg::zero(q * d);
                for (k, &c) in ge.iter().enumerate() {
                    if c != 0 {
                        v[k * d + j] = f.add(v[k * d + j], c);
                    }
                }
                for (l, &c) in bcols[g][j].iter().enumerate() {
                    if c != 0 {
                        v[i * d + l] = f.sub(v[i * d + l], c);
                    }
                }
                rel.insert(f, v);
            }
        }
    }
    let tests: Vec<Vector> = match unit {
        Some(u) => vec![u.to_vec()],
        None => (0..d).map(|j| linalg::unit(d, j)).collect(),
    };
    let images: Vec<Vector> = (0..m.dim())
        .map(|x| {
            let px = project(&linalg::unit(m.dim(), x));
            let mut out = Vec::with_capacity(tests.len() * q * d);
            for t in &tests {
                let mut v = linalg::zero(q * d);
                for (i, &a) in px.iter().enumerate() {
                    if a != 0 {
                        for (j, &c) in t.iter().enumerate() {
                            if c != 0 {
                                v[i * d + j] = f.mul_add(a, c, v[i * d + j]);
                            }
                        }
                    }
                }
                out.extend(rel.reduced(f, &v));
            }
            out
        })
        .collect();
    Ok(linalg::kernel(f, tests.len() * q * d, &images))
}

#[cfg(test)]
mod tests;
