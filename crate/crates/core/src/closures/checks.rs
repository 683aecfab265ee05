use std::fmt;
use std::sync::Arc;

use super::Closure;
use crate::algebra::Module;
use crate::error::Result;
use crate::lattice::Lattice;
use crate::linalg::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    Extensive,
    Idempotent,
    OrderPreserving,
    Residual,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Extensive => "extensive",
            Axiom::Idempotent => "idempotent",
            Axiom::OrderPreserving => "order-preserving",
            Axiom::Residual => "residual",
        })
    }
}

/// A violation of one axiom, with the submodules needed to reproduce it.
#[derive(Clone, Debug)]
pub struct AxiomCertificate {
    pub axiom: Axiom,
    pub closure: String,
    pub module: String,
    pub witnesses: Vec<Subspace>,
}

impl AxiomCertificate {
    /// Re-evaluates the violation from scratch; `true` when it still holds.
    pub fn replay(&self, cl: &Closure, m: &Arc<Module>) -> Result<bool> {
        let f = m.field();
        let w = &self.witnesses;
        Ok(match self.axiom {
            Axiom::Extensive => !w[0].is_subspace_of(f, &cl.close(m, &w[0])?),
            Axiom::Idempotent => {
                let c = cl.close(m, &w[0])?;
                cl.close(m, &c)? != c
            }
            Axiom::OrderPreserving => {
                w[0].is_subspace_of(f, &w[1]) && !cl.close(m, &w[0])?.is_subspace_of(f, &cl.close(m, &w[1])?)
            }
            Axiom::Residual => cl.close(m, &w[0])? != residual_side(cl, m, &w[0])?,
        })
    }
}

impl fmt::Display for AxiomCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails {} on {}", self.closure, self.axiom, self.module)?;
        for (i, w) in self.witnesses.iter().enumerate() {
            write!(f, "; N{} has dim {} key {:?}", i, w.dim(), w.key())?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub tested: Vec<(Axiom, usize)>,
    pub failures: Vec<AxiomCertificate>,
}

impl AxiomReport {
    pub fn holds(&self, axiom: Axiom) -> bool {
        !self.failures.iter().any(|c| c.axiom == axiom)
    }

    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `π⁻¹(cl(0 ⊆ M/N))`.
fn residual_side(cl: &Closure, m: &Arc<Module>, n: &Subspace) -> Result<Subspace> {
    let q = m.quotient(n);
    let c = cl.close(&q.target, &q.target.zero_space())?;
    Ok(q.preimage(&c))
}

/// Tests extensivity, idempotence, order preservation and residuality on
/// every element of the lattice (every pair for order preservation).
/// Records at most one certificate per axiom.
pub fn check_axioms(cl: &Closure, lattice: &Lattice, residual: bool) -> Result<AxiomReport> {
    let m = lattice.module();
    let f = m.field();
    let n = lattice.len();
    let mut report = AxiomReport::default();
    let mut closed = Vec::with_capacity(n);
    for s in lattice.subs() {
        closed.push(cl.close(m, s)?);
    }
    let fail =
        |axiom, witnesses| AxiomCertificate { axiom, closure: cl.name(), module: m.name().to_string(), witnesses };
    let record = |report: &mut AxiomReport, c: AxiomCertificate| {
        if report.holds(c.axiom) {
            report.failures.push(c);
        }
    };
    for (s, c) in lattice.subs().iter().zip(&closed) {
        if !s.is_subspace_of(f, c) {
            record(&mut report, fail(Axiom::Extensive, vec![s.clone()]));
        }
        if cl.close(m, c)? != *c {
            record(&mut report, fail(Axiom::Idempotent, vec![s.clone()]));
        }
    }
    report.tested.push((Axiom::Extensive, n));
    report.tested.push((Axiom::Idempotent, n));
    let below = lattice.containment();
    let mut pairs = 0;
    for j in 0..n {
        for i in below[j].ones() {
            pairs += 1;
            if !closed[i].is_subspace_of(f, &closed[j]) {
                record(&mut report, fail(Axiom::OrderPreserving, vec![lattice.get(i).clone(), lattice.get(j).clone()]));
            }
        }
    }
    report.tested.push((Axiom::OrderPreserving, pairs));
    if residual {
        for (s, c) in lattice.subs().iter().zip(&closed) {
            if residual_side(cl, m, s)? != *c {
                record(&mut report, fail(Axiom::Residual, vec![s.clone()]));
            }
        }
        report.tested.push((Axiom::Residual, n));
    }
    Ok(report)
}

/// A pair `L ⊆ N` with `N ⊆ cl(L + mN)` but `cl(L) ≠ cl(N)`.
#[derive(Clone, Debug)]
pub struct NakayamaCertificate {
    pub l: Subspace,
    pub n: Subspace,
}

impl NakayamaCertificate {
    pub fn replay(&self, cl: &Closure, m: &Arc<Module>) -> Result<bool> {
        let f = m.field();
        let lmn = self.l.sum(f, &m.m_times(&self.n));
        Ok(self.l.is_subspace_of(f, &self.n)
            && self.n.is_subspace_of(f, &cl.close(m, &lmn)?)
            && cl.close(m, &self.l)? != cl.close(m, &self.n)?)
    }
}

#[derive(Clone, Debug)]
pub struct NakayamaReport {
    pub pairs_tested: usize,
    pub hypothesis_met: usize,
    pub counterexample: Option<NakayamaCertificate>,
}

impl NakayamaReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Tests the Nakayama property on every nested pair of the lattice.
pub fn check_nakayama(cl: &Closure, lattice: &Lattice) -> Result<NakayamaReport> {
    let m = lattice.module();
    let f = m.field();
    let closed = lattice.close_all(cl)?;
    let below = lattice.containment();
    let mut report = NakayamaReport { pairs_tested: 0, hypothesis_met: 0, counterexample: None };
    for j in 0..lattice.len() {
        let n = lattice.get(j);
        let mn = m.m_times(n);
        for i in below[j].ones() {
            report.pairs_tested += 1;
            let l = lattice.get(i);
            let c = cl.close(m, &l.sum(f, &mn))?;
            if !n.is_subspace_of(f, &c) {
                continue;
            }
            report.hypothesis_met += 1;
            if closed[i] != closed[j] && report.counterexample.is_none() {
                report.counterexample = Some(NakayamaCertificate { l: l.clone(), n: n.clone() });
            }
        }
    }
    Ok(report)
}
