//! Reductions, cores, expansions, hulls, co-generation, spread and
//! co-spread for submodules of finite modules.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::Module;
use crate::closures::Closure;
use crate::duality::Interior;
use crate::error::{Error, Result};
use crate::lattice::{projective_points, Lattice};
use crate::linalg::{self, Subspace, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Every submodule of the relevant interval is tested.
    Enumerate,
    /// One minimal reduction, reached by dropping to hyperplanes.
    Descent,
}

/// A verified reduction `L ⊆ N ⊆ cl(L)`.
#[derive(Clone, Debug)]
pub struct ReductionCertificate {
    pub l: Subspace,
    pub n: Subspace,
    pub minimal: Option<Mode>,
}

impl ReductionCertificate {
    pub fn replay(&self, cl: &Closure, m: &Module) -> Result<bool> {
        let f = m.field();
        Ok(self.l.is_subspace_of(f, &self.n) && self.n.is_subspace_of(f, &cl.close(m, &self.l)?))
    }
}

/// A verified expansion `A ⊆ C ⊆ B` with `int(C) ⊆ A`.
#[derive(Clone, Debug)]
pub struct ExpansionCertificate {
    pub a: Subspace,
    pub c: Subspace,
    pub b: Subspace,
    pub maximal: bool,
}

impl ExpansionCertificate {
    pub fn replay(&self, int: &Interior, x: &Module) -> Result<bool> {
        let f = x.field();
        Ok(self.a.is_subspace_of(f, &self.c)
            && self.c.is_subspace_of(f, &self.b)
            && int.interior(x, &self.c)?.is_subspace_of(f, &self.a))
    }
}

pub fn is_reduction(cl: &Closure, m: &Module, l: &Subspace, n: &Subspace) -> Result<bool> {
    let f = m.field();
    if !l.is_subspace_of(f, n) {
        return Err(Error::Usage("a reduction must be contained in the submodule it reduces".into()));
    }
    Ok(n.is_subspace_of(f, &cl.close(m, l)?))
}

/// All reductions of `N` in `M`.
pub fn reductions(cl: &Closure, m: &Arc<Module>, n: &Subspace, cap: usize) -> Result<Vec<Subspace>> {
    let f = m.field();
    let lat = Lattice::interval(m, &m.zero_space(), n, cap)?;
    let mut out = Vec::new();
    for l in lat.subs() {
        if n.is_subspace_of(f, &cl.close(m, l)?) {
            out.push(l.clone());
        }
    }
    Ok(out)
}

fn minimal_elements(f: &crate::field::Field, subs: &[Subspace]) -> Vec<Subspace> {
    subs.iter().filter(|s| !subs.iter().any(|t| t.dim() < s.dim() && t.is_subspace_of(f, s))).cloned().collect()
}

fn maximal_elements(f: &crate::field::Field, subs: &[Subspace]) -> Vec<Subspace> {
    subs.iter().filter(|s| !subs.iter().any(|t| t.dim() > s.dim() && s.is_subspace_of(f, t))).cloned().collect()
}

/// Maximal submodules of `L`: the hyperplanes containing `mL`, in key
/// order.
pub fn maximal_submodules(m: &Module, l: &Subspace) -> Vec<Subspace> {
    let f = m.field();
    let ml = m.m_times(l);
    let mut out: Vec<Subspace> = Vec::new();
    let mut comp = Vec::new();
    let mut acc = ml.clone();
    for r in l.rows() {
        if acc.insert(f, r.clone()) {
            comp.push(r.clone());
        }
    }
    let mu = comp.len();
    // a hyperplane is the kernel of a functional on L/mL
    for lambda in projective_points(f, &Subspace::full(mu), &Subspace::zero(mu)) {
        let images: Vec<Vector> = lambda.iter().map(|&c| vec![c]).collect();
        let ker = linalg::kernel(f, 1, &images);
        let mut h = ml.clone();
        for r in ker.rows() {
            let mut v = linalg::zero(m.dim());
            for (i, &c) in r.iter().enumerate() {
                if c != 0 {
                    linalg::axpy(f, &mut v, c, &comp[i]);
                }
            }
            h.insert(f, v);
        }
        out.push(h);
    }
    out.sort_by_key(|h| h.key());
    out
}

pub fn minimal_reductions(
    cl: &Closure,
    m: &Arc<Module>,
    n: &Subspace,
    mode: Mode,
    cap: usize,
) -> Result<Vec<Subspace>> {
    let f = m.field();
    match mode {
        Mode::Enumerate => Ok(minimal_elements(f, &reductions(cl, m, n, cap)?)),
        Mode::Descent => {
            let mut l = n.clone();
            'down: loop {
                for h in maximal_submodules(m, &l) {
                    if n.is_subspace_of(f, &cl.close(m, &h)?) {
                        l = h;
                        continue 'down;
                    }
                }
                return Ok(vec![l]);
            }
        }
    }
}

/// Intersection of all reductions of `N` in `M`.
pub fn core(cl: &Closure, m: &Arc<Module>, n: &Subspace, cap: usize) -> Result<Subspace> {
    let f = m.field();
    let mut out = n.clone();
    for l in reductions(cl, m, n, cap)? {
        out = out.intersect(f, &l);
    }
    Ok(out)
}

/// All expansions `C` of `A` in `B`, for submodules `A ⊆ B` of `x`.
pub fn expansions(int: &Interior, x: &Arc<Module>, a: &Subspace, b: &Subspace, cap: usize) -> Result<Vec<Subspace>> {
    let f = x.field();
    let lat = Lattice::interval(x, a, b, cap)?;
    let mut out = Vec::new();
    for c in lat.subs() {
        if int.interior(x, c)?.is_subspace_of(f, a) {
            out.push(c.clone());
        }
    }
    Ok(out)
}

pub fn maximal_expansions(
    int: &Interior,
    x: &Arc<Module>,
    a: &Subspace,
    b: &Subspace,
    cap: usize,
) -> Result<Vec<Subspace>> {
    Ok(maximal_elements(x.field(), &expansions(int, x, a, b, cap)?))
}

/// Sum of all expansions of `A` in `B`.
pub fn hull(int: &Interior, x: &Arc<Module>, a: &Subspace, b: &Subspace, cap: usize) -> Result<Subspace> {
    let f = x.field();
    let mut out = a.clone();
    for c in expansions(int, x, a, b, cap)? {
        out = out.sum(f, &c);
    }
    Ok(out)
}

/// `core(N ⊆ M)` as the annihilator of the hull of `N^⊥` in `M^∨` under
/// the dual interior.
pub fn core_via_duality(cl: &Closure, m: &Arc<Module>, n: &Subspace, cap: usize) -> Result<Subspace> {
    let f = m.field();
    let d = m.dual();
    let int = Interior::Smile(cl.clone());
    Ok(hull(&int, &d, &n.perp(f), &d.full_space(), cap)?.perp(f))
}

/// Whether `C ↦ C^⊥` maps the expansions of `A` in `X` onto the
/// reductions of `A^⊥` in `X^∨`, with the interior dual to `cl`.
pub fn bijection_holds(cl: &Closure, x: &Arc<Module>, a: &Subspace, cap: usize) -> Result<bool> {
    let f = x.field();
    let int = Interior::Smile(cl.clone());
    let exp: BTreeSet<Vec<u32>> =
        expansions(&int, x, a, &x.full_space(), cap)?.iter().map(|c| c.perp(f).key()).collect();
    let d = x.dual();
    let red: BTreeSet<Vec<u32>> = reductions(cl, &d, &a.perp(f), cap)?.iter().map(|l| l.key()).collect();
    Ok(exp == red)
}

/// Functionals on `y` whose restrictions to the socle form a basis of its
/// dual; they generate `y^∨`.
pub fn minimal_cogenerators(y: &Module) -> Vec<Vector> {
    let soc = y.socle();
    soc.pivots().iter().map(|&p| linalg::unit(y.dim(), p)).collect()
}

/// Whether the functionals, elements of `y^∨`, co-generate `a ⊆ y`: no
/// nonzero element of `a` is killed by every functional of the submodule
/// of `y^∨` they generate.
pub fn cogenerates(y: &Module, a: &Subspace, functionals: &[Vector]) -> bool {
    let f = y.field();
    let generated = y.dual().span(functionals.iter().cloned());
    a.intersect(f, &generated.perp(f)).is_zero()
}

/// Outcome of a spread or co-spread computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Spread {
    Exists(usize),
    /// The distinct counts found over the minimal reductions or maximal
    /// expansions.
    DoesNotExist(Vec<usize>),
}

impl fmt::Display for Spread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spread::Exists(n) => write!(f, "{n}"),
            Spread::DoesNotExist(c) => write!(f, "does not exist (counts {c:?})"),
        }
    }
}

fn spread_of(counts: impl IntoIterator<Item = usize>) -> Spread {
    let set: BTreeSet<usize> = counts.into_iter().collect();
    if set.len() == 1 {
        Spread::Exists(*set.iter().next().unwrap())
    } else {
        Spread::DoesNotExist(set.into_iter().collect())
    }
}

/// Minimal generator counts over the minimal reductions of `N`.
pub fn spread(cl: &Closure, m: &Arc<Module>, n: &Subspace, cap: usize) -> Result<Spread> {
    let mins = minimal_reductions(cl, m, n, Mode::Enumerate, cap)?;
    Ok(spread_of(mins.iter().map(|l| m.min_generators(l))))
}

/// Socle dimensions of `B/C` over the maximal expansions `C` of `A`.
pub fn cospread(int: &Interior, x: &Arc<Module>, a: &Subspace, b: &Subspace, cap: usize) -> Result<Spread> {
    let f = x.field();
    let maxs = maximal_expansions(int, x, a, b, cap)?;
    Ok(spread_of(maxs.iter().map(|c| x.colon_max(c).intersect(f, b).dim() - c.dim())))
}
