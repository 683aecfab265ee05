//! Finite-dimensional commutative local algebras, their modules, and the
//! truncation families that approximate complete local rings.
//!
//! An [`Algebra`] is stored through the action of its generators on a
//! monomial basis: basis element `i` equals the product of the generators
//! listed in `words[i]`, and basis element 0 is the unit. Products of
//! arbitrary elements are evaluated by composing generator actions along
//! these words.

mod model;
mod module;
mod ring_ideal;

use std::sync::{Arc, OnceLock};

pub use model::{Caps, ModelKind, ModelMeta, Precision, RingModel, Truncation};
pub use module::{direct_sum, Module, Submodule};
pub use ring_ideal::{render_poly, RIdeal};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, SparseMat, Subspace, Vector};
use crate::poly::{self, Mono};

/// Dimension up to which construction checks associativity on every
/// basis triple in addition to the generator-level checks.
const TRIPLE_CHECK_LIMIT: usize = 30;

pub struct Algebra {
    field: Arc<Field>,
    vars: Vec<String>,
    monos: Vec<Mono>,
    degrees: Vec<u32>,
    gen_names: Vec<String>,
    gen_mats: Vec<SparseMat>,
    words: Vec<Vec<u16>>,
    regular: OnceLock<Arc<Module>>,
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Algebra(dim {} over {})", self.dim(), self.field.spec())
    }
}

/// Raw data for [`Algebra::new`].
pub struct AlgebraParts {
    pub field: Arc<Field>,
    pub vars: Vec<String>,
    pub monos: Vec<Mono>,
    pub degrees: Vec<u32>,
    pub gen_names: Vec<String>,
    pub gen_mats: Vec<SparseMat>,
    pub words: Vec<Vec<u16>>,
}

impl Algebra {
    /// Builds and validates an algebra: generator actions must commute,
    /// be nilpotent, and reproduce every basis element from the unit along
    /// its word.
    pub fn new(parts: AlgebraParts) -> Result<Arc<Algebra>> {
        let n = parts.monos.len();
        if n == 0 {
            return Err(Error::Construction("algebra of dimension zero".into()));
        }
        if parts.words.len() != n || parts.degrees.len() != n || !parts.words[0].is_empty() {
            return Err(Error::Construction("basis element 0 must be the unit".into()));
        }
        let alg = Algebra {
            field: parts.field,
            vars: parts.vars,
            monos: parts.monos,
            degrees: parts.degrees,
            gen_names: parts.gen_names,
            gen_mats: parts.gen_mats,
            words: parts.words,
            regular: OnceLock::new(),
        };
        alg.validate()?;
        Ok(Arc::new(alg))
    }

    fn validate(&self) -> Result<()> {
        let f = &*self.field;
        let n = self.dim();
        for (g, m) in self.gen_mats.iter().enumerate() {
            if m.rows != n || m.ncols() != n {
                return Err(Error::Construction(format!("generator {} has a malformed action", self.gen_names[g])));
            }
        }
        for a in 0..self.gen_mats.len() {
            for b in a + 1..self.gen_mats.len() {
                for j in 0..n {
                    let e = linalg::unit(n, j);
                    let ab = self.gen_mats[a].apply(f, &self.gen_mats[b].apply(f, &e));
                    let ba = self.gen_mats[b].apply(f, &self.gen_mats[a].apply(f, &e));
                    if ab != ba {
                        return Err(Error::Construction(format!(
                            "rewriting is not confluent: ({})*({})*({}) depends on the order of multiplication",
                            self.gen_names[a],
                            self.gen_names[b],
                            self.labels_of(j)
                        )));
                    }
                }
            }
        }
        for i in 0..n {
            let v = self.apply_word(&self.words[i], &linalg::unit(n, 0), &self.gen_mats);
            if v != linalg::unit(n, i) {
                return Err(Error::Construction(format!(
                    "basis element {} is not the product of its generators",
                    self.labels_of(i)
                )));
            }
        }
        for (g, m) in self.gen_mats.iter().enumerate() {
            let mut v = linalg::unit(n, 0);
            v = m.apply(f, &v);
            let mut steps = 0;
            while !linalg::is_zero(&v) {
                v = m.apply(f, &v);
                steps += 1;
                if steps > n {
                    return Err(Error::Construction(format!(
                        "generator {} is not nilpotent, so the algebra is not local",
                        self.gen_names[g]
                    )));
                }
            }
        }
        if n <= TRIPLE_CHECK_LIMIT {
            for i in 0..n {
                for j in 0..n {
                    let ij = self.mul(&linalg::unit(n, i), &linalg::unit(n, j));
                    let ji = self.mul(&linalg::unit(n, j), &linalg::unit(n, i));
                    if ij != ji {
                        return Err(Error::Construction(format!(
                            "multiplication is not commutative on ({}, {})",
                            self.labels_of(i),
                            self.labels_of(j)
                        )));
                    }
                    for k in 0..n {
                        let ek = linalg::unit(n, k);
                        let left = self.mul(&ij, &ek);
                        let right = self.mul(&linalg::unit(n, i), &self.mul(&linalg::unit(n, j), &ek));
                        if left != right {
                            return Err(Error::Construction(format!(
                                "multiplication is not associative on ({}, {}, {})",
                                self.labels_of(i),
                                self.labels_of(j),
                                self.labels_of(k)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn labels_of(&self, i: usize) -> String {
        poly::format_mono(&self.vars, &self.monos[i])
    }

    pub(crate) fn apply_word(&self, word: &[u16], v: &[u32], mats: &[SparseMat]) -> Vector {
        let mut out = v.to_vec();
        for &g in word.iter().rev() {
            out = mats[g as usize].apply(&self.field, &out);
        }
        out
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.monos.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn monos(&self) -> &[Mono] {
        &self.monos
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn label(&self, i: usize) -> String {
        self.labels_of(i)
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| self.labels_of(i)).collect()
    }

    pub fn gen_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn num_gens(&self) -> usize {
        self.gen_mats.len()
    }

    pub fn gen_mats(&self) -> &[SparseMat] {
        &self.gen_mats
    }

    pub fn words(&self) -> &[Vec<u16>] {
        &self.words
    }

    pub fn one(&self) -> Vector {
        linalg::unit(self.dim(), 0)
    }

    pub fn mul(&self, u: &[u32], v: &[u32]) -> Vector {
        let f = &*self.field;
        let mut out = linalg::zero(self.dim());
        for (i, &c) in u.iter().enumerate() {
            if c != 0 {
                let w = self.apply_word(&self.words[i], v, &self.gen_mats);
                linalg::axpy(f, &mut out, c, &w);
            }
        }
        out
    }

    pub fn pow(&self, u: &[u32], mut e: u64) -> Vector {
        let mut base = u.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// The maximal ideal, spanned by every basis element except the unit.
    pub fn maximal_space(&self) -> Subspace {
        Subspace::coordinates(self.dim(), 1..self.dim())
    }

    pub fn regular(self: &Arc<Self>) -> Arc<Module> {
        self.regular.get_or_init(|| Module::regular_of(self.clone())).clone()
    }

    /// Renders an element with terms in basis order.
    pub fn format_element(&self, v: &[u32]) -> String {
        let terms: Vec<(Mono, u32)> =
            v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (self.monos[i].clone(), c)).collect();
        poly::format_terms(&self.field, &self.vars, &terms)
    }

    /// Whether the basis is homogeneous and generator actions raise degree
    /// by a fixed amount; always true for the monomial families here.
    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Quotient algebra `A/I` for an ideal `I ⊆ m`.
    ///
    /// With `keep_low` the retained basis consists of the lowest monomials
    /// (pivots are chosen at the highest coordinate of each relation);
    /// otherwise the retained basis is the non-pivot set of the usual
    /// echelon form.
    pub fn quotient(self: &Arc<Self>, ideal: &Subspace, keep_low: bool) -> Result<Arc<Algebra>> {
        let f = &*self.field;
        let n = self.dim();
        if ideal.rows().iter().any(|r| r[0] != 0) {
            return Err(Error::Domain("quotient by an ideal not contained in the maximal ideal".into()));
        }
        let rev = |v: &[u32]| -> Vector { v.iter().rev().copied().collect() };
        let (space, keep): (Subspace, Vec<usize>) = if keep_low {
            let s = Subspace::span(f, n, ideal.rows().iter().map(|r| rev(r)));
            let keep: Vec<usize> = s.non_pivots().into_iter().map(|i| n - 1 - i).rev().collect();
            (s, keep)
        } else {
            (ideal.clone(), ideal.non_pivots())
        };
        let reduce = |v: &[u32]| -> Vector {
            if keep_low {
                rev(&space.reduced(f, &rev(v)))
            } else {
                space.reduced(f, v)
            }
        };
        let pos: std::collections::HashMap<usize, usize> = keep.iter().enumerate().map(|(a, &b)| (b, a)).collect();
        let m = keep.len();
        let gen_mats = self
            .gen_mats
            .iter()
            .map(|g| {
                let cols: Vec<Vector> = keep
                    .iter()
                    .map(|&c| {
                        let img = reduce(&g.column(c));
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
        Algebra::new(AlgebraParts {
            field: self.field.clone(),
            vars: self.vars.clone(),
            monos: keep.iter().map(|&i| self.monos[i].clone()).collect(),
            degrees: keep.iter().map(|&i| self.degrees[i]).collect(),
            gen_names: self.gen_names.clone(),
            gen_mats,
            words: keep.iter().map(|&i| self.words[i].clone()).collect(),
        })
    }
}

#[cfg(test)]
mod tests;
