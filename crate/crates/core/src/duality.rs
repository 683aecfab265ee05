//! Matlis duality at finite length and the interior operations dual to
//! closures.
//!
//! Every module here is finite dimensional, so its Matlis dual is the
//! linear dual with the transposed action, paired with it by the dot
//! product. A submodule `L ⊆ M` corresponds to `L^⊥ = (M/L)^∨ ⊆ M^∨`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::Module;
use crate::closures::Closure;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::linalg::{SparseMat, Subspace};

/// A module, its dual and the identification of the module with its
/// double dual.
pub struct DualPair {
    pub module: Arc<Module>,
    pub dual: Arc<Module>,
    pub biduality: SparseMat,
}

pub fn matlis_dual(m: &Arc<Module>) -> DualPair {
    DualPair { module: m.clone(), dual: m.dual(), biduality: m.biduality() }
}

/// `L^⊥ = {φ ∈ M^∨ : φ(L) = 0}`.
pub fn dual_submodule(m: &Module, l: &Subspace) -> Subspace {
    l.perp(m.field())
}

/// Checks `(I·L)^⊥ = (L^⊥ :_{M^∨} I)` for an ideal `I` of the algebra.
pub fn perp_of_product_holds(m: &Arc<Module>, ideal: &Subspace, l: &Subspace) -> bool {
    let f = m.field();
    let left = m.product(ideal, l).perp(f);
    let right = m.dual().colon_ideal(&l.perp(f), ideal);
    left == right
}

/// An interior operation on submodules of finite modules.
#[derive(Clone, Debug)]
pub enum Interior {
    Identity,
    /// `int(A ⊆ X) = (cl(A^⊥ ⊆ X^∨))^⊥`.
    Smile(Closure),
    /// `A ↦ mA`; not idempotent, kept as a negative control.
    Shrink,
}

impl fmt::Display for Interior {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interior::Identity => f.write_str("identity"),
            Interior::Smile(cl) => write!(f, "smile({})", cl.name()),
            Interior::Shrink => f.write_str("shrink"),
        }
    }
}

impl Interior {
    /// The interior dual to `cl`. Requires `cl` to be residual.
    pub fn smile(cl: Closure) -> Result<Interior> {
        if !cl.properties().residual.claimed() {
            return Err(Error::Usage(format!("{} is not residual, so it has no dual interior", cl.name())));
        }
        Ok(Interior::Smile(cl))
    }

    pub fn interior(&self, x: &Module, a: &Subspace) -> Result<Subspace> {
        let f = x.field();
        match self {
            Interior::Identity => Ok(a.clone()),
            Interior::Shrink => Ok(x.m_times(a)),
            Interior::Smile(cl) => {
                let d = x.dual();
                Ok(cl.close(&d, &a.perp(f))?.perp(f))
            }
        }
    }

    /// Interior of the whole module.
    pub fn of_module(&self, x: &Module) -> Result<Subspace> {
        self.interior(x, &x.full_space())
    }

    /// Checks `int(A) ⊆ A`, idempotence and order preservation on every
    /// element of each lattice; returns the interior when all hold.
    pub fn register(self, sample: &[Lattice]) -> Result<Interior> {
        for lat in sample {
            let x = lat.module();
            let f = x.field();
            let ints = lat.subs().iter().map(|a| self.interior(x, a)).collect::<Result<Vec<_>>>()?;
            for (a, i) in lat.subs().iter().zip(&ints) {
                if !i.is_subspace_of(f, a) {
                    return Err(Error::Usage(format!("{self} is not contained in its argument on {}", x.name())));
                }
                if self.interior(x, i)? != *i {
                    return Err(Error::Usage(format!("{self} is not idempotent on {}", x.name())));
                }
            }
            let below = lat.containment();
            for j in 0..lat.len() {
                for i in below[j].ones() {
                    if !ints[i].is_subspace_of(f, &ints[j]) {
                        return Err(Error::Usage(format!("{self} does not preserve order on {}", x.name())));
                    }
                }
            }
        }
        Ok(self)
    }
}

/// `cl(N ⊆ M) = (int(N^⊥ ⊆ M^∨))^⊥`; with `int` a smile this evaluates the
/// closure on `M^∨∨`.
pub fn closure_from_interior(int: &Interior, m: &Module, n: &Subspace) -> Result<Subspace> {
    let f = m.field();
    let d = m.dual();
    Ok(int.interior(&d, &n.perp(f))?.perp(f))
}

/// A pair `A ⊆ B` with `int(A :_B m) ⊆ A` but `int(A) ≠ int(B)`.
#[derive(Clone, Debug)]
pub struct InteriorCertificate {
    pub a: Subspace,
    pub b: Subspace,
}

impl InteriorCertificate {
    pub fn replay(&self, int: &Interior, x: &Module) -> Result<bool> {
        let f = x.field();
        let c = x.colon_max(&self.a).intersect(f, &self.b);
        Ok(self.a.is_subspace_of(f, &self.b)
            && int.interior(x, &c)?.is_subspace_of(f, &self.a)
            && int.interior(x, &self.a)? != int.interior(x, &self.b)?)
    }
}

#[derive(Clone, Debug)]
pub struct InteriorNakayamaReport {
    pub pairs_tested: usize,
    pub hypothesis_met: usize,
    pub counterexample: Option<InteriorCertificate>,
}

impl InteriorNakayamaReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Tests the Nakayama property of an interior on every nested pair of the
/// lattice.
pub fn check_nakayama_interior(int: &Interior, lattice: &Lattice) -> Result<InteriorNakayamaReport> {
    let x = lattice.module();
    let f = x.field();
    let ints = lattice.subs().iter().map(|a| int.interior(x, a)).collect::<Result<Vec<_>>>()?;
    let below = lattice.containment();
    let mut report = InteriorNakayamaReport { pairs_tested: 0, hypothesis_met: 0, counterexample: None };
    for j in 0..lattice.len() {
        let b = lattice.get(j);
        for i in below[j].ones() {
            report.pairs_tested += 1;
            let a = lattice.get(i);
            let c = x.colon_max(a).intersect(f, b);
            if !int.interior(x, &c)?.is_subspace_of(f, a) {
                continue;
            }
            report.hypothesis_met += 1;
            if ints[i] != ints[j] && report.counterexample.is_none() {
                report.counterexample = Some(InteriorCertificate { a: a.clone(), b: b.clone() });
            }
        }
    }
    Ok(report)
}

/// `Σ_U 0^cl_U` over all submodules `U` of `x`, each closure taken in `U`
/// itself.
pub fn finitistic_zero_closure(cl: &Closure, x: &Arc<Module>, cap: usize) -> Result<Subspace> {
    let f = x.field();
    let lat = Lattice::enumerate(x, cap)?;
    let mut out = x.zero_space();
    for u in lat.subs() {
        let (um, incl) = x.restrict(u);
        let c = cl.close(&um, &um.zero_space())?;
        for r in c.rows() {
            let mut w = vec![0u32; x.dim()];
            for (k, &a) in r.iter().enumerate() {
                if a != 0 {
                    crate::linalg::axpy(f, &mut w, a, &incl[k]);
                }
            }
            out.insert(f, w);
        }
    }
    Ok(out)
}

/// `∩_B π_B^{-1}(int(A/B))` over all submodules `B` of `a`, with `int`
/// dual to `cl` and evaluated on each quotient as a module in its own
/// right.
pub fn artinistic_interior(cl: &Closure, a: &Arc<Module>, cap: usize) -> Result<Subspace> {
    let f = a.field();
    let int = Interior::Smile(cl.clone());
    let lat = Lattice::enumerate(a, cap)?;
    let mut out = a.full_space();
    for b in lat.subs() {
        let q = a.quotient(b);
        let i = int.of_module(&q.target)?;
        out = out.intersect(f, &q.preimage(&i));
    }
    Ok(out)
}

/// `(cl_f)^⌣(A) = (0^{cl_f}_{A^∨})^⊥`.
pub fn smile_of_finitistic(cl: &Closure, a: &Arc<Module>, cap: usize) -> Result<Subspace> {
    let d = a.dual();
    Ok(finitistic_zero_closure(cl, &d, cap)?.perp(a.field()))
}
