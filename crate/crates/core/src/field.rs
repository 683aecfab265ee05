//! Exact arithmetic in finite fields `F_q`, `q = p^d`.
//!
//! Elements are `u32` codes in `0..q`. For `d = 1` the code is the residue
//! itself. For `d > 1` the code is the base-`p` digit string of the
//! coefficient vector over `F_p[g]/(f)`, where `f` is a primitive
//! polynomial, so `g` generates the multiplicative group and
//! multiplication goes through exp/log tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order supported for proper extensions.
pub const MAX_EXTENSION_ORDER: u32 = 1024;

/// Characteristic and degree of a finite field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec {
    pub p: u32,
    pub d: u32,
}

impl FieldSpec {
    pub fn new(p: u32, d: u32) -> Self {
        FieldSpec { p, d }
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.d)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            write!(f, "F{}", self.p)
        } else {
            write!(f, "F{}^{}", self.p, self.d)
        }
    }
}

/// A finite field with precomputed tables.
pub struct Field {
    spec: FieldSpec,
    q: u32,
    // extension fields only
    exp: Vec<u32>,
    log: Vec<u32>,
    modulus: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u32;
    while (i as u64) * (i as u64) <= n as u64 {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

impl Field {
    pub fn new(p: u32, d: u32) -> Result<Arc<Field>> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("field characteristic {p} is not prime")));
        }
        if d == 0 {
            return Err(Error::Domain("field degree must be at least 1".into()));
        }
        if p > 65_521 {
            return Err(Error::Domain(format!("characteristic {p} exceeds 65521")));
        }
        let spec = FieldSpec { p, d };
        if d == 1 {
            return Ok(Arc::new(Field { spec, q: p, exp: vec![], log: vec![], modulus: vec![] }));
        }
        let order = spec.order();
        if order > MAX_EXTENSION_ORDER as u64 {
            return Err(Error::Domain(format!("extension field of order {order} exceeds {MAX_EXTENSION_ORDER}")));
        }
        let q = order as u32;
        let modulus = find_primitive(p, d);
        let mut exp = vec![0u32; (q - 1) as usize];
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![0u32; d as usize];
        cur[0] = 1;
        for (i, slot) in exp.iter_mut().enumerate() {
            let code = encode(&cur, p);
            *slot = code;
            log[code as usize] = i as u32;
            cur = mul_by_g(&cur, &modulus, p);
        }
        Ok(Arc::new(Field { spec, q, exp, log, modulus }))
    }

    pub fn prime(p: u32) -> Result<Arc<Field>> {
        Field::new(p, 1)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn p(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.spec.d
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Coefficients of the defining polynomial, constant term first (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.spec.d == 1 {
            let s = a + b;
            if s >= self.q {
                s - self.q
            } else {
                s
            }
        } else {
            let p = self.spec.p;
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut place = 1u32;
            while a > 0 || b > 0 {
                out += ((a % p + b % p) % p) * place;
                a /= p;
                b /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        if self.spec.d == 1 {
            self.q - a
        } else {
            let p = self.spec.p;
            let mut a = a;
            let mut out = 0u32;
            let mut place = 1u32;
            while a > 0 {
                out += ((p - a % p) % p) * place;
                a /= p;
                place *= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if self.spec.d == 1 {
            ((a as u64 * b as u64) % self.q as u64) as u32
        } else if a == 0 || b == 0 {
            0
        } else {
            let n = self.q - 1;
            let s = self.log[a as usize] + self.log[b as usize];
            self.exp[(if s >= n { s - n } else { s }) as usize]
        }
    }

    /// `a*b + c`
    #[inline]
    pub fn mul_add(&self, a: u32, b: u32, c: u32) -> u32 {
        if self.spec.d == 1 {
            ((a as u64 * b as u64 + c as u64) % self.q as u64) as u32
        } else {
            self.add(self.mul(a, b), c)
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        if self.spec.d == 1 {
            self.pow(a, (self.q - 2) as u64)
        } else {
            let n = self.q - 1;
            self.exp[((n - self.log[a as usize]) % n) as usize]
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^e)`, the `e`-th power of the Frobenius automorphism.
    pub fn frobenius(&self, a: u32, e: u32) -> u32 {
        if self.spec.d == 1 {
            return a;
        }
        let shift = e % self.spec.d;
        let mut out = a;
        for _ in 0..shift {
            out = self.pow(out, self.spec.p as u64);
        }
        out
    }

    /// Inverse of [`Field::frobenius`].
    pub fn frobenius_inv(&self, a: u32, e: u32) -> u32 {
        let d = self.spec.d;
        self.frobenius(a, (d - e % d) % d)
    }

    /// The canonical generator `g` of an extension field.
    pub fn generator(&self) -> Option<u32> {
        if self.spec.d == 1 {
            None
        } else {
            Some(self.spec.p)
        }
    }

    pub fn from_int(&self, n: i64) -> u32 {
        let p = self.spec.p as i64;
        (((n % p) + p) % p) as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    /// Base-`p` digits of an element, constant coefficient first.
    pub fn digits(&self, a: u32) -> Vec<u32> {
        let p = self.spec.p;
        let mut a = a;
        (0..self.spec.d)
            .map(|_| {
                let r = a % p;
                a /= p;
                r
            })
            .collect()
    }

    /// Text form used in generator expressions: `3`, `g`, `2*g^2+1`.
    pub fn format(&self, a: u32) -> String {
        if self.spec.d == 1 {
            return a.to_string();
        }
        let digits = self.digits(a);
        let mut parts = Vec::new();
        for (i, &c) in digits.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            parts.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// True when the element needs parentheses as a coefficient.
    pub fn is_compound(&self, a: u32) -> bool {
        self.spec.d > 1 && self.digits(a).iter().filter(|&&c| c != 0).count() > 1
    }
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn mul_by_g(v: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let d = v.len();
    let top = v[d - 1];
    let mut out = vec![0u32; d];
    for i in (1..d).rev() {
        out[i] = v[i - 1];
    }
    // g^d = -(modulus[0] + ... + modulus[d-1] g^(d-1))
    for i in 0..d {
        out[i] = (out[i] + (p - modulus[i] % p) * top) % p;
    }
    out
}

fn find_primitive(p: u32, d: u32) -> Vec<u32> {
    let q = (p as u64).pow(d);
    let n = q - 1;
    // candidates: monic of degree d, low coefficients enumerated in base p
    for code in 0..(q as u32) {
        let mut coeffs = Vec::with_capacity(d as usize);
        let mut c = code;
        for _ in 0..d {
            coeffs.push(c % p);
            c /= p;
        }
        if coeffs[0] == 0 {
            continue;
        }
        // order of g must be exactly q - 1
        let mut cur = vec![0u32; d as usize];
        cur[0] = 1;
        let mut order = 0u64;
        loop {
            cur = mul_by_g(&cur, &coeffs, p);
            order += 1;
            if cur[0] == 1 && cur[1..].iter().all(|&x| x == 0) {
                break;
            }
            if order > n {
                break;
            }
        }
        if order == n {
            return coeffs;
        }
    }
    unreachable!("a primitive polynomial always exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &Field) {
        let q = f.order();
        for a in 0..q {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in 0..q {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
            }
        }
        // distributivity on a sample grid
        for a in (0..q).step_by(3) {
            for b in (0..q).step_by(5) {
                for c in (0..q).step_by(7) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn prime_fields_satisfy_axioms() {
        for p in [2, 3, 5, 7] {
            check_axioms(&Field::prime(p).unwrap());
        }
    }

    #[test]
    fn extension_fields_satisfy_axioms() {
        for (p, d) in [(2, 2), (3, 2), (5, 2), (2, 3), (7, 2)] {
            let f = Field::new(p, d).unwrap();
            assert_eq!(f.order(), p.pow(d));
            check_axioms(&f);
        }
    }

    #[test]
    fn frobenius_is_additive_and_invertible() {
        let f = Field::new(5, 2).unwrap();
        for a in 0..25 {
            for b in 0..25 {
                assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
            }
            assert_eq!(f.frobenius_inv(f.frobenius(a, 1), 1), a);
            assert_eq!(f.frobenius(a, 2), a);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(5, 0).is_err());
        assert!(Field::new(2, 11).is_err());
    }

    #[test]
    fn formats_extension_elements() {
        let f = Field::new(3, 2).unwrap();
        assert_eq!(f.format(0), "0");
        assert_eq!(f.format(2), "2");
        assert_eq!(f.format(3), "g");
        assert_eq!(f.format(7), "2*g+1");
    }
}
