//! Sparse polynomials over a finite field and the generator-expression
//! grammar used for ideals in ring-spec files.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' digits)?
//! atom   := digits | name | '(' expr ')'
//! ```
//!
//! `g` denotes the canonical generator of an extension field.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;

pub type Mono = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: BTreeMap<Mono, u32>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: u32) -> Self {
        let mut p = Poly::zero();
        if c != 0 {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn monomial(mono: Mono, c: u32) -> Self {
        let mut p = Poly::zero();
        if c != 0 {
            p.terms.insert(mono, c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut m = vec![0; nvars];
        m[i] = 1;
        Poly::monomial(m, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, f: &Field, mono: Mono, c: u32) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(mono.clone()).or_insert(0);
        *e = f.add(*e, c);
        if *e == 0 {
            self.terms.remove(&mono);
        }
    }

    pub fn add(&self, f: &Field, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(f, m.clone(), c);
        }
        out
    }

    pub fn scale(&self, f: &Field, c: u32) -> Poly {
        if c == 0 {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, &a)| (m.clone(), f.mul(a, c))).collect() }
    }

    pub fn neg(&self, f: &Field) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, &a)| (m.clone(), f.neg(a))).collect() }
    }

    pub fn mul(&self, f: &Field, other: &Poly) -> Poly {
        let mut acc: BTreeMap<Mono, u32> = BTreeMap::new();
        for (m1, &a) in &self.terms {
            for (m2, &b) in &other.terms {
                let m: Mono = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
                let e = acc.entry(m).or_insert(0);
                *e = f.mul_add(a, b, *e);
            }
        }
        acc.retain(|_, c| *c != 0);
        Poly { terms: acc }
    }

    /// `self^e`, normalizing after each product.
    pub fn pow_with(&self, f: &Field, nvars: usize, mut e: u64, nf: &dyn Fn(Poly) -> Poly) -> Poly {
        let mut base = nf(self.clone());
        let mut acc = nf(Poly::constant(nvars, 1));
        while e > 0 {
            if e & 1 == 1 {
                acc = nf(acc.mul(f, &base));
            }
            e >>= 1;
            if e > 0 {
                base = nf(base.mul(f, &base));
            }
        }
        acc
    }

    pub fn map_coeffs(&self, g: impl Fn(u32) -> u32) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, &c) in &self.terms {
            let d = g(c);
            if d != 0 {
                terms.insert(m.clone(), d);
            }
        }
        Poly { terms }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum::<u32>()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum::<u32>()).min()
    }

    pub fn is_homogeneous(&self, weights: &[u32]) -> bool {
        let mut it = self.terms.keys().map(|m| weighted_degree(m, weights));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }
}

pub fn weighted_degree(m: &[u32], weights: &[u32]) -> u32 {
    m.iter().zip(weights).map(|(a, w)| a * w).sum()
}

/// Renders a monomial such as `x^2*y`; the empty product is `1`.
pub fn format_mono(vars: &[String], m: &[u32]) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(m)
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Renders `c * mono` with the coefficient omitted when it is one.
pub fn format_term(f: &Field, vars: &[String], m: &[u32], c: u32) -> String {
    let mono = format_mono(vars, m);
    let coef = if f.is_compound(c) { format!("({})", f.format(c)) } else { f.format(c) };
    if mono == "1" {
        coef
    } else if c == 1 {
        mono
    } else {
        format!("{coef}*{mono}")
    }
}

/// Joins terms given in display order.
pub fn format_terms(f: &Field, vars: &[String], terms: &[(Mono, u32)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().map(|(m, c)| format_term(f, vars, m, *c)).collect::<Vec<_>>().join(" + ")
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    field: &'a Field,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn err(&self, at: usize, msg: impl Into<String>) -> Error {
        Error::parse_at(self.text, at, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let nv = self.vars.len();
        let mut acc = Poly::zero();
        let mut sign_neg = false;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign_neg = true;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = if sign_neg { acc.add(self.field, &t.neg(self.field)) } else { acc.add(self.field, &t) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign_neg = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign_neg = true;
                }
                _ => break,
            }
        }
        let _ = nv;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let next = self.factor()?;
            acc = acc.mul(self.field, &next);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            if self.peek() == Some(b'-') {
                return Err(self.err(start, "negative exponents are not allowed"));
            }
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err(start, "expected a nonnegative integer exponent"));
            }
            let e: u64 = digits.parse().map_err(|_| self.err(start, "exponent out of range"))?;
            if e > 100_000 {
                return Err(self.err(start, "exponent out of range"));
            }
            return Ok(base.pow_with(self.field, self.vars.len(), e, &|p| p));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.text[start..self.pos].to_string()
    }

    fn atom(&mut self) -> Result<Poly> {
        let nv = self.vars.len();
        let start = {
            self.skip_ws();
            self.pos
        };
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err(self.pos, "expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let p = self.field.p() as u64;
                let mut r = 0u64;
                for ch in d.bytes() {
                    r = (r * 10 + (ch - b'0') as u64) % p;
                }
                Ok(Poly::constant(nv, r as u32))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                while self.pos < self.bytes.len()
                    && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.text[start..self.pos];
                if let Some(i) = self.vars.iter().position(|v| v == name) {
                    return Ok(Poly::var(nv, i));
                }
                if name == "g" {
                    if let Some(g) = self.field.generator() {
                        return Ok(Poly::constant(nv, g));
                    }
                    return Err(
                        self.err(start, "'g' denotes the generator of an extension field, but the field is prime")
                    );
                }
                Err(self.err(start, format!("unknown variable '{name}'")))
            }
            Some(c) => Err(self.err(start, format!("unexpected character '{}'", c as char))),
            None => Err(self.err(start, "unexpected end of expression")),
        }
    }
}

/// Parses one polynomial expression in the given variables.
pub fn parse_poly(field: &Field, vars: &[String], text: &str) -> Result<Poly> {
    let mut p = Parser { text, bytes: text.as_bytes(), pos: 0, field, vars };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err(p.pos, "unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a parenthesized generator list such as `(t^4, t^5 + 2*t^6)`.
/// Bare single expressions are accepted as one-element lists.
pub fn parse_generator_list(field: &Field, vars: &[String], text: &str) -> Result<Vec<Poly>> {
    let trimmed = text.trim();
    let lead = text.len() - text.trim_start().len();
    if !(trimmed.starts_with('(') && trimmed.ends_with(')') && balanced_outer(trimmed)) {
        return Ok(vec![parse_poly(field, vars, text)?]);
    }
    let inner_start = lead + 1;
    let inner = &trimmed[1..trimmed.len() - 1];
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut seg_start = 0usize;
    let bytes = inner.as_bytes();
    for i in 0..=bytes.len() {
        let at_end = i == bytes.len();
        if !at_end {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                _ => {}
            }
        }
        if at_end || (bytes[i] == b',' && depth == 0) {
            let seg = &inner[seg_start..i];
            match parse_poly(field, vars, seg) {
                Ok(p) => out.push(p),
                Err(Error::Parse { .. }) => {
                    // re-run on the full text to get an absolute position
                    let mut p = Parser { text, bytes: text.as_bytes(), pos: inner_start + seg_start, field, vars };
                    let e = match p.expr() {
                        Err(e) => e,
                        Ok(_) => Error::parse_at(text, p.pos, "unexpected input"),
                    };
                    return Err(e);
                }
                Err(e) => return Err(e),
            }
            seg_start = i + 1;
        }
    }
    Ok(out)
}

fn balanced_outer(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 && i != s.len() - 1 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_binomials() {
        let f = Field::prime(5).unwrap();
        let v = vars(&["t"]);
        let p = parse_poly(&f, &v, "t^4 + 2*t^5").unwrap();
        assert_eq!(p.terms.len(), 2);
        assert_eq!(p.terms[&vec![4]], 1);
        assert_eq!(p.terms[&vec![5]], 2);
        let q = parse_poly(&f, &v, "-(t^2 - t^3)*t").unwrap();
        assert_eq!(q.terms[&vec![3]], 4);
        assert_eq!(q.terms[&vec![4]], 1);
    }

    #[test]
    fn negative_exponent_is_positioned() {
        let f = Field::prime(5).unwrap();
        let err = parse_poly(&f, &vars(&["t"]), "t^-1").unwrap_err();
        assert_eq!(err, Error::Parse { line: 1, column: 3, message: "negative exponents are not allowed".into() });
    }

    #[test]
    fn generator_lists() {
        let f = Field::prime(7).unwrap();
        let v = vars(&["x", "y", "z"]);
        let gens = parse_generator_list(&f, &v, "(y^2, z^3, (y+x^2)*z)").unwrap();
        assert_eq!(gens.len(), 3);
        let err = parse_generator_list(&f, &v, "(y, w)").unwrap_err();
        assert!(matches!(err, Error::Parse { column: 5, .. }), "{err:?}");
    }

    #[test]
    fn extension_generator() {
        let f = Field::new(3, 2).unwrap();
        let p = parse_poly(&f, &vars(&["t"]), "g*t^2 + (g+1)").unwrap();
        assert_eq!(p.terms[&vec![2]], 3);
        assert_eq!(p.terms[&vec![0]], 4);
        let t = format_terms(&f, &vars(&["t"]), &[(vec![0], 4), (vec![2], 3)]);
        assert_eq!(t, "(g+1) + g*t^2");
    }
}
