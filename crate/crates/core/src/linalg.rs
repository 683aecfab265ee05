//! Dense and sparse linear algebra over a [`Field`].
//!
//! Subspaces are kept in reduced row-echelon form with each pivot at the
//! lowest nonzero coordinate of its row, which makes the row list a unique
//! normal form.

use std::collections::BTreeMap;

use crate::field::Field;

pub type Vector = Vec<u32>;

pub fn zero(n: usize) -> Vector {
    vec![0; n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

pub fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// `y += c * x`
pub fn axpy(f: &Field, y: &mut [u32], c: u32, x: &[u32]) {
    if c == 0 {
        return;
    }
    if f.degree() == 1 {
        let p = f.p() as u64;
        let c = c as u64;
        for (a, &b) in y.iter_mut().zip(x) {
            if b != 0 {
                *a = ((*a as u64 + c * b as u64) % p) as u32;
            }
        }
    } else {
        for (a, &b) in y.iter_mut().zip(x) {
            if b != 0 {
                *a = f.mul_add(c, b, *a);
            }
        }
    }
}

pub fn scale(f: &Field, v: &mut [u32], c: u32) {
    for a in v.iter_mut() {
        *a = f.mul(*a, c);
    }
}

pub fn add(f: &Field, x: &[u32], y: &[u32]) -> Vector {
    x.iter().zip(y).map(|(&a, &b)| f.add(a, b)).collect()
}

pub fn dot(f: &Field, x: &[u32], y: &[u32]) -> u32 {
    x.iter().zip(y).fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { f.mul_add(a, b, acc) })
}

pub fn first_nonzero(v: &[u32]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// A subspace of `F^n` in reduced row-echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { n, rows: (0..n).map(|i| unit(n, i)).collect(), pivots: (0..n).collect() }
    }

    pub fn span<I, V>(f: &Field, n: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[u32]>,
    {
        let mut s = Subspace::zero(n);
        for v in vectors {
            s.insert(f, v.as_ref().to_vec());
        }
        s
    }

    /// Coordinate subspace spanned by the given unit vectors.
    pub fn coordinates(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = idx.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        Subspace { n, rows: idx.iter().map(|&i| unit(n, i)).collect(), pivots: idx }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.n
    }

    /// Coordinates that carry no pivot, in increasing order.
    pub fn non_pivots(&self) -> Vec<usize> {
        let mut mark = vec![false; self.n];
        for &p in &self.pivots {
            mark[p] = true;
        }
        (0..self.n).filter(|&i| !mark[i]).collect()
    }

    /// Residue of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, f: &Field, v: &mut [u32]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                axpy(f, v, f.neg(c), row);
            }
        }
    }

    pub fn reduced(&self, f: &Field, v: &[u32]) -> Vector {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w
    }

    pub fn contains(&self, f: &Field, v: &[u32]) -> bool {
        is_zero(&self.reduced(f, v))
    }

    /// Adds `v` to the span. Returns `true` when the dimension grew.
    pub fn insert(&mut self, f: &Field, mut v: Vector) -> bool {
        debug_assert_eq!(v.len(), self.n);
        self.reduce(f, &mut v);
        let Some(p) = first_nonzero(&v) else {
            return false;
        };
        let inv = f.inv(v[p]);
        scale(f, &mut v, inv);
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                axpy(f, row, f.neg(c), &v);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, v);
        true
    }

    pub fn is_subspace_of(&self, f: &Field, other: &Subspace) -> bool {
        self.dim() <= other.dim() && self.rows.iter().all(|r| other.contains(f, r))
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Subspace {
        let (mut big, small) = if self.dim() >= other.dim() { (self.clone(), other) } else { (other.clone(), self) };
        for r in &small.rows {
            big.insert(f, r.clone());
        }
        big
    }

    /// The orthogonal complement under the standard pairing.
    pub fn perp(&self, f: &Field) -> Subspace {
        let np = self.non_pivots();
        let mut rows = Vec::with_capacity(np.len());
        for &j in &np {
            let mut v = zero(self.n);
            v[j] = 1;
            for (row, &p) in self.rows.iter().zip(&self.pivots) {
                v[p] = f.neg(row[j]);
            }
            rows.push(v);
        }
        // each row has its lowest nonzero entry at a pivot of `self` or at j;
        // re-reduce to obtain the echelon form
        Subspace::span(f, self.n, rows)
    }

    pub fn intersect(&self, f: &Field, other: &Subspace) -> Subspace {
        if self.is_subspace_of(f, other) {
            return self.clone();
        }
        if other.is_subspace_of(f, self) {
            return other.clone();
        }
        self.perp(f).sum(f, &other.perp(f)).perp(f)
    }

    /// A flat key identifying the subspace.
    pub fn key(&self) -> Vec<u32> {
        let mut k = Vec::with_capacity(self.rows.len() * self.n + 1);
        k.push(self.rows.len() as u32);
        for r in &self.rows {
            k.extend_from_slice(r);
        }
        k
    }

    /// Applies a coordinatewise map to every row and re-reduces.
    pub fn map_entries(&self, f: &Field, g: impl Fn(u32) -> u32) -> Subspace {
        Subspace::span(f, self.n, self.rows.iter().map(|r| r.iter().map(|&x| g(x)).collect::<Vector>()))
    }

    /// Every vector of the subspace, for fields and dimensions small enough
    /// to enumerate.
    pub fn elements(&self, f: &Field) -> Vec<Vector> {
        let q = f.order();
        let d = self.dim();
        let total = (q as usize).pow(d as u32);
        let mut out = Vec::with_capacity(total);
        let mut coeffs = vec![0u32; d];
        for _ in 0..total {
            let mut v = zero(self.n);
            for (c, row) in coeffs.iter().zip(&self.rows) {
                axpy(f, &mut v, *c, row);
            }
            out.push(v);
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < q {
                    break;
                }
                *c = 0;
            }
        }
        out
    }
}

/// Kernel of the linear map sending the `i`-th basis vector of `F^m` to
/// `images[i]` in `F^n`.
pub fn kernel(f: &Field, n: usize, images: &[Vector]) -> Subspace {
    let m = images.len();
    // echelon rows of [image | combination]
    let mut piv: BTreeMap<usize, (Vector, Vector)> = BTreeMap::new();
    let mut ker = Subspace::zero(m);
    for (i, img) in images.iter().enumerate() {
        debug_assert_eq!(img.len(), n);
        let mut v = img.clone();
        let mut comb = unit(m, i);
        loop {
            match first_nonzero(&v) {
                None => {
                    ker.insert(f, comb);
                    break;
                }
                Some(p) => match piv.get(&p) {
                    Some((pv, pc)) => {
                        let c = f.neg(v[p]);
                        axpy(f, &mut v, c, pv);
                        axpy(f, &mut comb, c, pc);
                    }
                    None => {
                        let inv = f.inv(v[p]);
                        scale(f, &mut v, inv);
                        scale(f, &mut comb, inv);
                        piv.insert(p, (v, comb));
                        break;
                    }
                },
            }
        }
    }
    ker
}

/// Sparse matrix stored by columns: column `j` lists the nonzero entries
/// of the image of the `j`-th basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    pub rows: usize,
    pub cols: Vec<Vec<(u32, u32)>>,
}

impl SparseMat {
    pub fn identity(n: usize) -> Self {
        SparseMat { rows: n, cols: (0..n).map(|j| vec![(j as u32, 1)]).collect() }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols: vec![Vec::new(); cols] }
    }

    pub fn from_columns(f: &Field, rows: usize, columns: &[Vector]) -> Self {
        let _ = f;
        SparseMat {
            rows,
            cols: columns
                .iter()
                .map(|c| c.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i as u32, x)).collect())
                .collect(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn apply(&self, f: &Field, v: &[u32]) -> Vector {
        let mut out = zero(self.rows);
        for (j, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(i, a) in &self.cols[j] {
                out[i as usize] = f.mul_add(c, a, out[i as usize]);
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vector {
        let mut out = zero(self.rows);
        for &(i, a) in &self.cols[j] {
            out[i as usize] = a;
        }
        out
    }

    pub fn transpose(&self) -> SparseMat {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for &(i, a) in col {
                cols[i as usize].push((j as u32, a));
            }
        }
        SparseMat { rows: self.cols.len(), cols }
    }

    /// `self * other`
    pub fn compose(&self, f: &Field, other: &SparseMat) -> SparseMat {
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
                for &(k, b) in col {
                    for &(i, a) in &self.cols[k as usize] {
                        let e = acc.entry(i).or_insert(0);
                        *e = f.mul_add(a, b, *e);
                    }
                }
                acc.into_iter().filter(|&(_, x)| x != 0).collect()
            })
            .collect();
        SparseMat { rows: self.rows, cols }
    }

    pub fn map_entries(&self, g: impl Fn(u32) -> u32) -> SparseMat {
        SparseMat {
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.iter().map(|&(i, a)| (i, g(a))).collect()).collect(),
        }
    }

    pub fn to_dense_columns(&self) -> Vec<Vector> {
        (0..self.ncols()).map(|j| self.column(j)).collect()
    }
}

/// Incremental echelon form of sparse rows, used for large homogeneous
/// systems whose equations have few terms.
#[derive(Default, Debug)]
pub struct SparseEchelon {
    rows: BTreeMap<usize, Vec<(usize, u32)>>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        SparseEchelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds an equation given as (variable, coefficient) pairs.
    pub fn insert(&mut self, f: &Field, row: Vec<(usize, u32)>) -> bool {
        let mut acc: BTreeMap<usize, u32> = BTreeMap::new();
        for (i, c) in row {
            let e = acc.entry(i).or_insert(0);
            *e = f.add(*e, c);
        }
        acc.retain(|_, c| *c != 0);
        loop {
            let Some((&p, &c)) = acc.iter().next() else {
                return false;
            };
            match self.rows.get(&p) {
                Some(prow) => {
                    let m = f.neg(c);
                    for &(i, a) in prow {
                        let e = acc.entry(i).or_insert(0);
                        *e = f.mul_add(m, a, *e);
                        if *e == 0 {
                            acc.remove(&i);
                        }
                    }
                }
                None => {
                    let inv = f.inv(c);
                    let r: Vec<(usize, u32)> = acc.into_iter().map(|(i, a)| (i, f.mul(a, inv))).collect();
                    self.rows.insert(p, r);
                    return true;
                }
            }
        }
    }

    /// Rows whose pivot is at or beyond `start`; these involve only
    /// variables `>= start`.
    pub fn tail_rows(&self, start: usize) -> Vec<Vec<(usize, u32)>> {
        self.rows.range(start..).map(|(_, r)| r.clone()).collect()
    }
}
