//! Interiors of ideals computed from closures and colons along a
//! decreasing cofinal sequence of irreducible ideals, test ideals, and the
//! Hom-based membership test.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{RIdeal, RingModel};
use crate::closures::{frob_poly, RingClosure};
use crate::error::{Error, Result};
use crate::lattice::projective_points;
use crate::linalg::{self, SparseEchelon, Subspace, Vector};
use crate::poly::Poly;

/// How the `t`-th ideal of a sequence is built.
#[derive(Clone, Debug)]
pub enum Recipe {
    /// `J_t = (g_1^t, ..., g_d^t)`.
    Powers(Vec<Poly>),
    /// `J_t = (s^{kt} + a s^{kt+1})` in a semigroup ring with variable `s`.
    ShiftedPrincipal { step: u32, a: u32 },
    /// `J_t = (s^{kt} + a s^{kt+1} + b s^{kt+2}, s^{kt+1} + a s^{kt+2} + b s^{kt+3})`.
    ShiftedPair { step: u32, a: u32, b: u32 },
}

impl Recipe {
    pub fn generators(&self, model: &RingModel, t: u32) -> Vec<Poly> {
        let f = model.field();
        let mono = |e: u32, c: u32| Poly::monomial(vec![e], c);
        match self {
            Recipe::Powers(gens) => gens.iter().map(|g| g.pow_with(f, model.vars().len(), t as u64, &|p| p)).collect(),
            Recipe::ShiftedPrincipal { step, a } => {
                let n = step * t;
                vec![mono(n, 1).add(f, &mono(n + 1, *a))]
            }
            Recipe::ShiftedPair { step, a, b } => {
                let n = step * t;
                let g = |s: u32| mono(s, 1).add(f, &mono(s + 1, *a)).add(f, &mono(s + 2, *b));
                vec![g(n), g(n + 1)]
            }
        }
    }

    pub fn describe(&self, model: &RingModel) -> String {
        let show =
            |gens: Vec<Poly>| gens.iter().map(|g| crate::algebra::render_poly(model, g)).collect::<Vec<_>>().join(", ");
        match self {
            Recipe::Powers(gens) => {
                let parts: Vec<String> = gens.iter().map(|g| format!("({})^t", show(vec![g.clone()]))).collect();
                format!("J_t = ({})", parts.join(", "))
            }
            Recipe::ShiftedPrincipal { step, a: 0 } => format!("J_t = (t^{{{step}t}})"),
            Recipe::ShiftedPrincipal { step, a } => {
                format!("J_t = (t^{{{step}t}} + {}*t^{{{step}t+1}})", model.field().format(*a))
            }
            Recipe::ShiftedPair { step, a, b } => format!(
                "J_t = (t^{{{step}t}} + a t^{{{step}t+1}} + b t^{{{step}t+2}}, ...) with a={}, b={}",
                model.field().format(*a),
                model.field().format(*b)
            ),
        }
    }
}

/// A decreasing sequence of irreducible `m`-primary ideals, checked on
/// `1..=verified`.
#[derive(Clone)]
pub struct IrreducibleSequence {
    model: Arc<RingModel>,
    recipe: Recipe,
    verified: u32,
    ideals: Vec<RIdeal>,
}

impl fmt::Debug for IrreducibleSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IrreducibleSequence({}, verified to {})", self.recipe.describe(&self.model), self.verified)
    }
}

/// Dimension of the socle of `R/J`.
pub fn socle_dim(j: &RIdeal) -> usize {
    let reg = j.truncation().algebra.regular();
    reg.colon_max(j.space()).dim() - j.space().dim()
}

impl IrreducibleSequence {
    /// Builds `J_1, ..., J_{t_max}` and checks irreducibility, nesting and
    /// `J_t ⊆ m^t`.
    pub fn new(model: &Arc<RingModel>, recipe: Recipe, t_max: u32) -> Result<IrreducibleSequence> {
        let mut ideals: Vec<RIdeal> = Vec::with_capacity(t_max as usize);
        let m = RIdeal::maximal(model)?;
        let mut mt = m.clone();
        for t in 1..=t_max {
            let j = RIdeal::from_gens(model, &recipe.generators(model, t))?;
            let s = socle_dim(&j);
            if s != 1 {
                return Err(Error::Construction(format!(
                    "J_{t} = {j} is not irreducible: the socle of R/J_{t} has dimension {s}"
                )));
            }
            if let Some(prev) = ideals.last() {
                if !j.is_subset_of(prev)? {
                    return Err(Error::Construction(format!("J_{t} = {j} is not contained in J_{} = {prev}", t - 1)));
                }
            }
            if !model.is_artinian() {
                if t > 1 {
                    mt = mt.product(&m)?;
                }
                if !j.is_subset_of(&mt)? {
                    return Err(Error::Construction(format!("J_{t} = {j} is not contained in m^{t}")));
                }
            }
            ideals.push(j);
        }
        Ok(IrreducibleSequence { model: model.clone(), recipe, verified: t_max, ideals })
    }

    /// The standard sequence for a model: the recipes for `⟨2,3⟩` and
    /// `⟨3,4,5⟩`, powers of `t^{m0}` in other Gorenstein semigroup rings,
    /// and powers of the declared parameters elsewhere.
    pub fn standard(model: &Arc<RingModel>, t_max: u32) -> Result<IrreducibleSequence> {
        let recipe = match model.semigroup_of() {
            Some(s) if s.generators() == [2, 3] => Recipe::ShiftedPrincipal { step: 2, a: 0 },
            Some(s) if s.generators() == [3, 4, 5] => Recipe::ShiftedPair { step: 3, a: 0, b: 0 },
            Some(s) => Recipe::Powers(vec![Poly::monomial(vec![s.multiplicity()], 1)]),
            None => Recipe::Powers(model.meta().parameters.clone()),
        };
        IrreducibleSequence::new(model, recipe, t_max)
    }

    pub fn model(&self) -> &Arc<RingModel> {
        &self.model
    }

    pub fn recipe(&self) -> &Recipe {
        &self.recipe
    }

    pub fn verified(&self) -> u32 {
        self.verified
    }

    pub fn ideal(&self, t: u32) -> Result<&RIdeal> {
        if t == 0 || t > self.verified {
            return Err(Error::Usage(format!("J_{t} is outside the verified range 1..={}", self.verified)));
        }
        Ok(&self.ideals[t as usize - 1])
    }
}

/// Stopping rule for the partial intersections.
#[derive(Clone, Copy, Debug)]
pub struct Window {
    /// Number of consecutive equal partial intersections required.
    pub length: u32,
    pub t_max: u32,
}

impl Default for Window {
    fn default() -> Self {
        Window { length: 3, t_max: 12 }
    }
}

#[derive(Clone, Debug)]
pub struct InteriorReport {
    /// The stable value, when the window closed.
    pub result: Option<RIdeal>,
    pub stabilized_at: Option<u32>,
    /// First `t` with `J_t ⊆ I`; equal partials only count from here on.
    pub window_start: Option<u32>,
    /// `P_t = ∩_{s ≤ t} (J_s : (J_s : I)^cl)` for `t = 1, 2, ...`.
    pub partials: Vec<RIdeal>,
}

impl InteriorReport {
    /// The stable ideal, or an inconclusive error listing every partial.
    pub fn into_result(self) -> Result<RIdeal> {
        match self.result {
            Some(r) => Ok(r),
            None => {
                let shown: Vec<String> =
                    self.partials.iter().enumerate().map(|(i, p)| format!("P_{}={p}", i + 1)).collect();
                Err(Error::Inconclusive(format!("no stabilization; partials {}", shown.join(" "))))
            }
        }
    }
}

/// `∩_t (J_t : (J_t : I)^cl)`, stopped once `window.length` consecutive
/// partial intersections agree from the first `t` with `J_t ⊆ I` on.
pub fn artinistic_interior(
    i: &RIdeal,
    cl: &RingClosure,
    seq: &IrreducibleSequence,
    window: Window,
) -> Result<InteriorReport> {
    let t_max = window.t_max.min(seq.verified());
    let mut report = InteriorReport { result: None, stabilized_at: None, window_start: None, partials: Vec::new() };
    let mut run = 0u32;
    for t in 1..=t_max {
        let j = seq.ideal(t)?;
        let inner = cl.close(&j.colon(i)?)?;
        let term = j.colon(&inner)?;
        let p = match report.partials.last() {
            Some(prev) => prev.intersect(&term)?,
            None => term,
        };
        if let Some(prev) = report.partials.last() {
            if !p.is_subset_of(prev)? {
                return Err(Error::Anomaly(format!("partial intersection P_{t} = {p} is not below P_{}", t - 1)));
            }
        }
        if report.window_start.is_none() && j.is_subset_of(i)? {
            report.window_start = Some(t);
        }
        if report.window_start.is_some() {
            let same = report
                .partials
                .last()
                .is_some_and(|prev| report.window_start.unwrap() < t && prev.same_as(&p).unwrap_or(false));
            run = if same { run + 1 } else { 1 };
        }
        report.partials.push(p.clone());
        if run >= window.length {
            if !p.is_subset_of(i)? {
                return Err(Error::Anomaly(format!("computed interior {p} is not contained in {i}")));
            }
            report.stabilized_at = Some(t + 1 - window.length);
            report.result = Some(p);
            return Ok(report);
        }
    }
    Ok(report)
}

/// The interior of the unit ideal.
pub fn test_ideal(
    model: &Arc<RingModel>,
    cl: &RingClosure,
    seq: &IrreducibleSequence,
    window: Window,
) -> Result<InteriorReport> {
    artinistic_interior(&RIdeal::unit(model)?, cl, seq, window)
}

/// Sum of all ideals `C ⊇ I` with `int(C) ⊆ I`, searched upward through
/// covers: expansions are closed under passing to smaller ideals above
/// `I`, so only expansions need to be extended.
pub fn ideal_hull(i: &RIdeal, cl: &RingClosure, seq: &IrreducibleSequence, window: Window) -> Result<HullReport> {
    let model = i.model();
    let f = model.field();
    let reg = i.truncation().algebra.regular();
    let mut seen = std::collections::HashSet::new();
    let mut queue = std::collections::VecDeque::new();
    let mut expansions = Vec::new();
    seen.insert(i.space().key());
    queue.push_back(i.space().clone());
    while let Some(c) = queue.pop_front() {
        let ci = RIdeal::from_space(model.clone(), i.precision(), c.clone())?;
        let int = artinistic_interior(&ci, cl, seq, window)?.into_result()?;
        if !int.is_subset_of(i)? {
            continue;
        }
        let soc = reg.colon_max(&c);
        for v in projective_points(f, &soc, &c) {
            let mut d = c.clone();
            d.insert(f, v);
            if seen.insert(d.key()) {
                queue.push_back(d);
            }
        }
        expansions.push(ci);
    }
    let mut hull = i.clone();
    for c in &expansions {
        hull = hull.sum(c)?;
    }
    Ok(HullReport { hull, expansions })
}

#[derive(Clone, Debug)]
pub struct HullReport {
    pub hull: RIdeal,
    /// Every expansion of `I`, in search order.
    pub expansions: Vec<RIdeal>,
}

impl HullReport {
    /// The expansions not strictly contained in another one.
    pub fn maximal_expansions(&self) -> Result<Vec<RIdeal>> {
        let mut out = Vec::new();
        for c in &self.expansions {
            let mut maximal = true;
            for d in &self.expansions {
                if c.is_subset_of(d)? && !d.is_subset_of(c)? {
                    maximal = false;
                    break;
                }
            }
            if maximal {
                out.push(c.clone());
            }
        }
        Ok(out)
    }
}

/// Outcome of checking `J_t^cl = J_t` along a sequence.
#[derive(Clone, Debug)]
pub struct TrivialityReport {
    /// `(t, closed, witness)`; the witness lies in `J_t^cl` but not `J_t`.
    pub sequence: Vec<(u32, bool, Option<String>)>,
    /// Sampled ideals with whether each is closed.
    pub spot_checks: Vec<(String, bool)>,
    /// Set when every `J_t` in range is closed: on a Gorenstein ring this
    /// forces every ideal to be closed.
    pub trivial: bool,
}

pub fn triviality_check(
    seq: &IrreducibleSequence,
    cl: &RingClosure,
    t_range: std::ops::RangeInclusive<u32>,
    samples: &[RIdeal],
) -> Result<TrivialityReport> {
    let model = seq.model();
    if !model.meta().gorenstein {
        return Err(Error::Usage("the triviality criterion needs a Gorenstein model".into()));
    }
    let mut out = TrivialityReport { sequence: Vec::new(), spot_checks: Vec::new(), trivial: true };
    for t in t_range {
        let j = seq.ideal(t)?;
        let c = cl.close(j)?;
        let closed = c.same_as(j)?;
        let witness = if closed {
            None
        } else {
            let mut w = None;
            for g in c.generators()? {
                if !j.contains_poly(&g)? {
                    w = Some(crate::algebra::render_poly(model, &g));
                    break;
                }
            }
            w
        };
        out.trivial &= closed;
        out.sequence.push((t, closed, witness));
    }
    for s in samples {
        let closed = cl.close(s)?.same_as(s)?;
        out.spot_checks.push((s.to_string(), closed));
    }
    Ok(out)
}

/// Coordinates of `g` in `R/J`, where `J` is given at its own precision.
fn coords_mod(model: &RingModel, j: &RIdeal, g: &Poly) -> Result<(Vector, Vec<usize>)> {
    let v = model.element_in(j.truncation(), g)?;
    let r = j.space().reduced(model.field(), &v);
    let keep = j.space().non_pivots();
    Ok((keep.iter().map(|&i| r[i]).collect(), keep))
}

fn bracket(j: &RIdeal, e: u32) -> Result<RIdeal> {
    let model = j.model();
    let f = model.field();
    if j.is_unit() || e == 0 {
        return Ok(j.clone());
    }
    let q = (f.p() as u64).pow(e);
    let gens: Vec<Poly> = j.generators()?.iter().map(|g| frob_poly(model, g, e, q)).collect();
    RIdeal::from_gens(model, &gens)
}

/// Whether some `R`-linear `g: R^{1/q} → R/J` with `q = p^e` sends
/// `c^{1/q}` to `a + J`, decided by solving for `g` on a basis of
/// `R/J^{[q]}`.
pub fn hom_test_membership(a: &Poly, j: &RIdeal, e: u32, c: &Poly) -> Result<bool> {
    let model = j.model();
    let f = model.field();
    let q = (f.p() as u64).pow(e);
    let jq = bracket(j, e)?;
    let small = j.truncation().algebra.regular().quotient(j.space());
    let big = jq.truncation().algebra.regular().quotient(jq.space());
    let (n1, n2) = (small.target.dim(), big.target.dim());
    let cap = model.caps().frobenius_dim;
    if n2 > cap {
        return Err(Error::Resource(format!("R/J^[q] has dimension {n2}, above the cap {cap}")));
    }
    let g_var = |i: usize, k: usize| i * n1 + k;
    let v_var = |k: usize| n2 * n1 + k;
    let mut ech = SparseEchelon::new();
    let small_cols: Vec<Vec<Vector>> = small.target.actions().iter().map(|a| a.to_dense_columns()).collect();
    for (l, act) in big.target.actions().iter().enumerate() {
        for jb in 0..n2 {
            let mut col = linalg::unit(n2, jb);
            for _ in 0..q {
                col = act.apply(f, &col);
            }
            for k in 0..n1 {
                let mut row = Vec::new();
                for (i, &mij) in col.iter().enumerate() {
                    if mij != 0 {
                        row.push((g_var(i, k), f.frobenius_inv(mij, e)));
                    }
                }
                for (kp, col_kp) in small_cols[l].iter().enumerate() {
                    let akk = col_kp[k];
                    if akk != 0 {
                        row.push((g_var(jb, kp), f.neg(akk)));
                    }
                }
                ech.insert(f, row);
            }
        }
    }
    let (cc, _) = coords_mod(model, &jq, c)?;
    for k in 0..n1 {
        let mut row = vec![(v_var(k), 1)];
        for (jb, &cj) in cc.iter().enumerate() {
            if cj != 0 {
                row.push((g_var(jb, k), f.neg(f.frobenius_inv(cj, e))));
            }
        }
        ech.insert(f, row);
    }
    let (av, _) = coords_mod(model, j, a)?;
    Ok(ech.tail_rows(v_var(0)).iter().all(|row| {
        let mut s = 0;
        for &(i, x) in row {
            s = f.mul_add(x, av[i - v_var(0)], s);
        }
        s == 0
    }))
}

/// The same question answered through `a·L ⊆ J` with
/// `L = {y : c y^q ∈ J^{[q]}}`, valid for irreducible `J`.
pub fn hom_test_by_colon(a: &Poly, j: &RIdeal, e: u32, c: &Poly) -> Result<bool> {
    let model = j.model();
    let f = model.field();
    let q = (f.p() as u64).pow(e);
    let jq = bracket(j, e)?;
    let t = j.truncation();
    let images: Vec<Vector> = t
        .algebra
        .monos()
        .iter()
        .map(|m| {
            let mq = Poly::monomial(m.iter().map(|&x| (x as u64 * q) as u32).collect(), 1);
            Ok(coords_mod(model, &jq, &c.mul(f, &mq))?.0)
        })
        .collect::<Result<_>>()?;
    let width = images.first().map_or(0, |v| v.len());
    let l: Subspace = linalg::kernel(f, width, &images).map_entries(f, |x| f.frobenius_inv(x, e));
    let av = model.element_in(t, a)?;
    Ok(l.rows().iter().all(|y| j.space().contains(f, &t.algebra.mul(&av, y))))
}
