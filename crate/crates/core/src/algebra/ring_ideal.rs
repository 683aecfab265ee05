use std::fmt;
use std::sync::Arc;

use super::{Precision, RingModel, Truncation};
use crate::error::{Error, Result};
use crate::linalg::{Subspace, Vector};
use crate::poly::{self, Poly};

const MAX_DOUBLINGS: usize = 8;

/// An ideal of the complete ring containing the truncation ideal `Q_P`,
/// stored as its image in `A_P`.
#[derive(Clone)]
pub struct RIdeal {
    model: Arc<RingModel>,
    trunc: Arc<Truncation>,
    space: Subspace,
}

impl fmt::Debug for RIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RIdeal{} @ {:?}", self, self.trunc.precision)
    }
}

impl RIdeal {
    /// Wraps an ideal of the truncation at `p`; the caller guarantees that
    /// `Q_p` lies in the ideal it stands for.
    pub fn from_space(model: Arc<RingModel>, p: &[u32], space: Subspace) -> Result<RIdeal> {
        let trunc = model.truncation(p)?;
        Ok(RIdeal { model, trunc, space })
    }

    pub fn unit(model: &Arc<RingModel>) -> Result<RIdeal> {
        let p = model.unit_precision();
        let trunc = model.truncation(&p)?;
        let space = Subspace::full(trunc.dim());
        Ok(RIdeal { model: model.clone(), trunc, space })
    }

    pub fn maximal(model: &Arc<RingModel>) -> Result<RIdeal> {
        let gens: Vec<Poly> = match model.semigroup_of() {
            Some(s) => s.generators().iter().map(|&g| Poly::monomial(vec![g], 1)).collect(),
            None => (0..model.vars().len()).map(|i| Poly::var(model.vars().len(), i)).collect(),
        };
        RIdeal::from_gens(model, &gens)
    }

    /// The ideal generated by `gens`. Fails when the ideal is not primary
    /// to the maximal ideal, detected by the Nakayama witness test
    /// failing at every precision up to the resource cap.
    pub fn from_gens(model: &Arc<RingModel>, gens: &[Poly]) -> Result<RIdeal> {
        let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.iter().any(|g| g.terms.keys().any(|m| m.iter().all(|&e| e == 0))) {
            return RIdeal::unit(model);
        }
        if model.is_artinian() {
            let p = model.initial_precision(&gens);
            let t = model.truncation(&p)?;
            let vecs = gens.iter().map(|g| model.element_in(&t, g)).collect::<Result<Vec<_>>>()?;
            let space = t.algebra.regular().span(vecs);
            return Ok(RIdeal { model: model.clone(), trunc: t, space });
        }
        if gens.is_empty() {
            return Err(Error::Domain("the zero ideal is not primary to the maximal ideal".into()));
        }
        let f = model.field().clone();
        let mut p = model.initial_precision(&gens);
        for _ in 0..=MAX_DOUBLINGS {
            let w = model.witness_precision(&p);
            if model.dim_of(&w) > model.caps().truncation_dim {
                break;
            }
            let tw = model.truncation(&w)?;
            let vecs = gens.iter().map(|g| model.element_in(&tw, g)).collect::<Result<Vec<_>>>()?;
            let k = tw.algebra.regular().span(vecs);
            let ok = model
                .truncation_generators(&p)
                .iter()
                .map(|q| model.element_in(&tw, q))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(|v| k.contains(&f, v));
            if ok {
                let t = model.truncation(&p)?;
                let space = model.project_space(&tw, &t, &k);
                return Ok(RIdeal { model: model.clone(), trunc: t, space });
            }
            p = model.double(&p);
        }
        let shown: Vec<String> = gens.iter().map(|g| render_poly(model, g)).collect();
        Err(Error::Domain(format!(
            "the ideal ({}) is not primary to the maximal ideal within the precision cap",
            shown.join(", ")
        )))
    }

    /// Parses a generator list such as `(t^4 + 2*t^5, t^7)`.
    pub fn parse(model: &Arc<RingModel>, text: &str) -> Result<RIdeal> {
        let gens = poly::parse_generator_list(model.field(), model.vars(), text)?;
        RIdeal::from_gens(model, &gens)
    }

    pub fn model(&self) -> &Arc<RingModel> {
        &self.model
    }

    pub fn precision(&self) -> &Precision {
        &self.trunc.precision
    }

    pub fn truncation(&self) -> &Arc<Truncation> {
        &self.trunc
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn is_unit(&self) -> bool {
        self.space.is_full()
    }

    fn check(&self, other: &RIdeal) -> Result<()> {
        if Arc::ptr_eq(&self.model, &other.model) {
            Ok(())
        } else {
            Err(Error::Usage("ideals of different ring models".into()))
        }
    }

    /// Re-expresses the ideal at a larger precision.
    pub fn lift_to(&self, p: &[u32]) -> Result<RIdeal> {
        let big = self.model.truncation(p)?;
        if !self.model.precision_le(&self.trunc.precision, &big.precision) {
            return Err(Error::Usage("cannot lift an ideal to a smaller precision".into()));
        }
        let space = self.model.lift_space(&self.trunc, &big, &self.space);
        Ok(RIdeal { model: self.model.clone(), trunc: big, space })
    }

    /// Both ideals at their common precision.
    pub fn align(&self, other: &RIdeal) -> Result<(RIdeal, RIdeal)> {
        self.check(other)?;
        let j = self.model.join(&self.trunc.precision, &other.trunc.precision);
        Ok((self.lift_to(&j)?, other.lift_to(&j)?))
    }

    pub fn sum(&self, other: &RIdeal) -> Result<RIdeal> {
        let (a, b) = self.align(other)?;
        let space = a.space.sum(self.model.field(), &b.space);
        Ok(RIdeal { space, ..a })
    }

    pub fn intersect(&self, other: &RIdeal) -> Result<RIdeal> {
        let (a, b) = self.align(other)?;
        let space = a.space.intersect(self.model.field(), &b.space);
        Ok(RIdeal { space, ..a })
    }

    /// `(self : other)`.
    pub fn colon(&self, other: &RIdeal) -> Result<RIdeal> {
        let (a, b) = self.align(other)?;
        let reg = a.trunc.algebra.regular();
        let space = reg.colon_ideal(&a.space, &b.space);
        Ok(RIdeal { space, ..a })
    }

    pub fn product(&self, other: &RIdeal) -> Result<RIdeal> {
        self.check(other)?;
        let f = self.model.field();
        let mut gens = Vec::new();
        for g in self.generators()? {
            for h in other.generators()? {
                gens.push(g.mul(f, &h));
            }
        }
        if gens.is_empty() {
            return RIdeal::unit(&self.model);
        }
        RIdeal::from_gens(&self.model, &gens)
    }

    pub fn contains_poly(&self, g: &Poly) -> Result<bool> {
        let v = self.model.element_in(&self.trunc, g)?;
        Ok(self.space.contains(self.model.field(), &v))
    }

    pub fn is_subset_of(&self, other: &RIdeal) -> Result<bool> {
        let (a, b) = self.align(other)?;
        Ok(a.space.is_subspace_of(self.model.field(), &b.space))
    }

    pub fn same_as(&self, other: &RIdeal) -> Result<bool> {
        let (a, b) = self.align(other)?;
        Ok(a.space == b.space)
    }

    /// Canonical minimal generators: a basis of `I/mI` reduced against
    /// `mI`, in echelon form. Independent of the stored precision.
    pub fn generator_vectors(&self) -> Result<(Arc<Truncation>, Vec<Vector>)> {
        if self.is_unit() {
            let t = self.model.truncation(&self.model.unit_precision())?;
            return Ok((t, vec![vec![1]]));
        }
        let w = self.model.witness_precision(&self.trunc.precision);
        let big = self.lift_to(&w)?;
        let reg = big.trunc.algebra.regular();
        Ok((big.trunc.clone(), reg.minimal_generators(&big.space)))
    }

    pub fn generators(&self) -> Result<Vec<Poly>> {
        let (t, vecs) = self.generator_vectors()?;
        Ok(vecs.iter().map(|v| self.model.poly_of(&t, v)).collect())
    }

    /// Canonical generator strings in basis order.
    pub fn generator_strings(&self) -> Result<Vec<String>> {
        Ok(self.generators()?.iter().map(|g| render_poly(&self.model, g)).collect())
    }

    /// Minimal number of generators.
    pub fn num_generators(&self) -> Result<usize> {
        Ok(self.generator_vectors()?.1.len())
    }
}

/// Renders a polynomial with terms in the basis order of the model:
/// increasing degree, then decreasing exponent vector.
pub fn render_poly(model: &RingModel, g: &Poly) -> String {
    let mut terms: Vec<(Vec<u32>, u32)> = g.terms.iter().map(|(m, c)| (m.clone(), *c)).collect();
    terms.sort_by(|(a, _), (b, _)| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    poly::format_terms(model.field(), model.vars(), &terms)
}

impl fmt::Display for RIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.generator_strings() {
            Ok(g) => write!(f, "({})", g.join(", ")),
            Err(e) => write!(f, "<{e}>"),
        }
    }
}
