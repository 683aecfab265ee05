use std::collections::HashMap;
use std::fmt;

use super::Closure;
use crate::algebra::{RIdeal, RingModel};
use crate::error::{Error, Result};
use crate::linalg::{self, Subspace, Vector};
use crate::poly::{Mono, Poly};

/// Closure operations on `m`-primary ideals of a [`RingModel`].
#[derive(Clone, Debug)]
pub enum RingClosure {
    Identity,
    Integral,
    /// Tight closure in dimension one, which agrees with integral closure.
    TightDim1,
    /// `I ↦ (I : τ)` for a test ideal `τ`.
    TightSocle {
        tau: RIdeal,
    },
    Frobenius {
        e_max: u32,
    },
}

/// How a Frobenius closure computation ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusReport {
    /// Largest exponent `e` that was computed.
    pub e_reached: u32,
    /// Whether two consecutive exponents agreed.
    pub stabilized: bool,
    pub route: &'static str,
    /// `dim_k R/I_e` for `e = 0, 1, ...`.
    pub colengths: Vec<usize>,
}

impl fmt::Display for RingClosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingClosure::Identity => f.write_str("identity"),
            RingClosure::Integral => f.write_str("integral"),
            RingClosure::TightDim1 => f.write_str("tight[dim1]"),
            RingClosure::TightSocle { tau } => write!(f, "tight[socle,tau={tau}]"),
            RingClosure::Frobenius { e_max } => write!(f, "frobenius[e_max={e_max}]"),
        }
    }
}

impl RingClosure {
    pub fn close(&self, i: &RIdeal) -> Result<RIdeal> {
        Ok(self.close_with_report(i)?.0)
    }

    pub fn close_with_report(&self, i: &RIdeal) -> Result<(RIdeal, Option<FrobeniusReport>)> {
        let model = i.model();
        match self {
            RingClosure::Identity => Ok((i.clone(), None)),
            RingClosure::TightDim1 if model.meta().dimension != 1 => {
                Err(Error::Capability("tight[dim1] applies to one-dimensional rings only".into()))
            }
            RingClosure::Integral | RingClosure::TightDim1 => {
                if i.is_unit() {
                    return Ok((i.clone(), None));
                }
                let cl = Closure::integral(model, i.precision())?;
                let reg = i.truncation().algebra.regular();
                let space = cl.close(&reg, i.space())?;
                Ok((RIdeal::from_space(model.clone(), i.precision(), space)?, None))
            }
            RingClosure::TightSocle { tau } => Ok((i.colon(tau)?, None)),
            RingClosure::Frobenius { e_max } => {
                let (r, rep) = frobenius_closure(i, *e_max)?;
                Ok((r, Some(rep)))
            }
        }
    }

    /// The matching closure on ideals of the truncation at `p`, when it is
    /// computed exactly there.
    pub fn finite(&self, model: &RingModel, p: &[u32]) -> Result<Closure> {
        match self {
            RingClosure::Identity => Ok(Closure::Identity),
            RingClosure::Integral => Closure::integral(model, p),
            RingClosure::TightDim1 if model.meta().dimension == 1 => Closure::integral(model, p),
            RingClosure::TightSocle { tau } => {
                let t = model.truncation(p)?;
                let lifted = tau.lift_to(&model.join(tau.precision(), p))?;
                let space = model.project_space(lifted.truncation(), &t, lifted.space());
                Ok(Closure::TightSocle { tau: space })
            }
            _ => Err(Error::Capability(format!("{self} has no finite-level counterpart"))),
        }
    }
}

fn colength(i: &RIdeal) -> usize {
    i.space().ambient_dim() - i.space().dim()
}

/// `I^F`, approximated by `{u : u^q ∈ I^[q]}` for `q = p^e`, `e ≤ e_max`.
fn frobenius_closure(i: &RIdeal, e_max: u32) -> Result<(RIdeal, FrobeniusReport)> {
    let model = i.model();
    let mut report = FrobeniusReport { e_reached: 0, stabilized: false, route: "dense", colengths: vec![colength(i)] };
    if i.is_unit() || e_max == 0 {
        report.stabilized = i.is_unit();
        return Ok((i.clone(), report));
    }
    let gens = i.generators()?;
    let w = model.weights();
    let graded = model.semigroup_of().is_none()
        && !model.is_artinian()
        && model.is_graded()
        && gens.iter().all(|g| g.is_homogeneous(&w));
    if graded {
        report.route = "graded";
    }
    let mut current = i.clone();
    for e in 1..=e_max {
        let step = if graded { frobenius_graded(i, &gens, e) } else { frobenius_dense(i, &gens, e) };
        let next = match step {
            Ok(n) => n,
            Err(Error::Resource(msg)) => {
                if e == 1 {
                    return Err(Error::Resource(msg));
                }
                return Ok((current, report));
            }
            Err(err) => return Err(err),
        };
        report.e_reached = e;
        report.colengths.push(colength(&next));
        let same = next.same_as(&current)?;
        current = next;
        if same && e >= 2 {
            report.stabilized = true;
            break;
        }
    }
    Ok((current, report))
}

pub(crate) fn frob_poly(model: &RingModel, g: &Poly, e: u32, q: u64) -> Poly {
    let f = model.field();
    Poly {
        terms: g
            .terms
            .iter()
            .map(|(m, &c)| (m.iter().map(|&x| (x as u64 * q) as u32).collect(), f.frobenius(c, e)))
            .collect(),
    }
}

fn frobenius_dense(i: &RIdeal, gens: &[Poly], e: u32) -> Result<RIdeal> {
    let model = i.model();
    let f = model.field();
    let q = (f.p() as u64).pow(e);
    let p = i.precision();
    let big = model.frobenius_precision(p, q);
    let cap = model.caps().frobenius_dim;
    let dim = model.dim_of(&big);
    if dim > cap {
        return Err(Error::Resource(format!(
            "Frobenius power at e={e} needs a truncation of dimension {dim}, above the cap {cap}"
        )));
    }
    let tb = model.truncation(&big)?;
    let vecs = gens.iter().map(|g| model.element_in(&tb, &frob_poly(model, g, e, q))).collect::<Result<Vec<_>>>()?;
    let bracket = tb.algebra.regular().span(vecs);
    let small = i.truncation();
    let images: Vec<Vector> = small
        .algebra
        .monos()
        .iter()
        .map(|m| {
            let mq = Poly::monomial(m.iter().map(|&x| (x as u64 * q) as u32).collect(), 1);
            Ok(bracket.reduced(f, &model.element_in(&tb, &mq)?))
        })
        .collect::<Result<_>>()?;
    let twisted = linalg::kernel(f, tb.dim(), &images);
    let space = twisted.map_entries(f, |c| f.frobenius_inv(c, e)).sum(f, i.space());
    RIdeal::from_space(model.clone(), p, space)
}

/// Degree by degree, for homogeneous ideals of graded models: the
/// computation at degree `d` lives in `R_{qd}` and needs no truncation.
fn frobenius_graded(i: &RIdeal, gens: &[Poly], e: u32) -> Result<RIdeal> {
    let model = i.model();
    let f = model.field();
    let q = (f.p() as u64).pow(e);
    let w = model.weights();
    let cap = model.caps().frobenius_dim;
    let top = i.truncation().algebra.max_degree();
    let gen_deg: Vec<u32> =
        gens.iter().map(|g| g.terms.keys().next().map_or(0, |m| crate::poly::weighted_degree(m, &w))).collect();
    let frob_gens: Vec<Poly> = gens.iter().map(|g| frob_poly(model, g, e, q)).collect();
    let mut new_gens = gens.to_vec();
    for d in 1..=top {
        let basis = model.standard_monos_of_degree(d);
        let not_in: Vec<bool> =
            basis.iter().map(|m| i.contains_poly(&Poly::monomial(m.clone(), 1)).map(|b| !b)).collect::<Result<_>>()?;
        if !not_in.iter().any(|&b| b) {
            continue;
        }
        let big_deg = (q * d as u64) as u32;
        let target = model.standard_monos_of_degree(big_deg);
        if target.len() > cap {
            return Err(Error::Resource(format!(
                "graded Frobenius power at e={e} needs {} monomials in degree {big_deg}, above the cap {cap}",
                target.len()
            )));
        }
        let index: HashMap<&Mono, usize> = target.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let coords = |p: &Poly| -> Result<Vector> {
            let mut v = linalg::zero(target.len());
            for (m, &c) in &model.nf_graded(p).terms {
                let k = index.get(m).ok_or_else(|| Error::Anomaly("graded normal form left its degree".into()))?;
                v[*k] = c;
            }
            Ok(v)
        };
        let mut bracket = Subspace::zero(target.len());
        for (g, &dg) in frob_gens.iter().zip(&gen_deg) {
            if dg > d {
                continue;
            }
            let rest = (q * (d - dg) as u64) as u32;
            for m in model.standard_monos_of_degree(rest) {
                bracket.insert(f, coords(&g.mul(f, &Poly::monomial(m, 1)))?);
            }
        }
        let images: Vec<Vector> = basis
            .iter()
            .map(|m| {
                coords(&Poly::monomial(m.iter().map(|&x| (x as u64 * q) as u32).collect(), 1))
                    .map(|v| bracket.reduced(f, &v))
            })
            .collect::<Result<_>>()?;
        let kernel = linalg::kernel(f, target.len(), &images);
        for r in kernel.rows() {
            let mut g = Poly::zero();
            for (k, &c) in r.iter().enumerate() {
                if c != 0 {
                    g.add_term(f, basis[k].clone(), f.frobenius_inv(c, e));
                }
            }
            new_gens.push(g);
        }
    }
    let out = RIdeal::from_gens(model, &new_gens)?;
    let p = model.join(out.precision(), i.precision());
    out.lift_to(&p)
}
