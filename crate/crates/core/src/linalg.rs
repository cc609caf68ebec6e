//! Exact linear algebra over Q: dense matrices for small ambient spaces and a
//! sparse incremental echelon form for the large spaces `Λ^d(Q^N)`.
//!
//! The sparse echelon only ever reduces leading terms, so vectors with
//! disjoint supports never interact. Kernels of maps whose matrix is
//! block-diagonal up to permutation are therefore computed block by block
//! without any explicit decomposition.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Sparse vector: entries sorted by key, no explicit zeros.
pub type SparseVec<K> = Vec<(K, Rational)>;

/// `a - c * b`.
pub fn sub_scaled<K: Ord + Copy>(a: &[(K, Rational)], c: &Rational, b: &[(K, Rational)]) -> SparseVec<K> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(c * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn scale<K: Copy>(v: &[(K, Rational)], c: &Rational) -> SparseVec<K> {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(k, x)| (*k, x * c)).collect()
}

/// Builds a sparse vector from arbitrary `(key, value)` pairs, summing duplicates.
pub fn collect_sparse<K: Ord + Copy>(entries: impl IntoIterator<Item = (K, Rational)>) -> SparseVec<K> {
    let mut map: BTreeMap<K, Rational> = BTreeMap::new();
    for (k, v) in entries {
        *map.entry(k).or_insert_with(Rational::zero) += v;
    }
    map.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn lookup<K: Ord>(v: &[(K, Rational)], key: &K) -> Option<Rational> {
    v.binary_search_by(|(k, _)| k.cmp(key)).ok().map(|i| v[i].1.clone())
}

#[derive(Clone, Debug)]
struct Row<K> {
    vec: SparseVec<K>,
    combo: SparseVec<usize>,
}

/// Incremental echelon basis of a span of sparse vectors.
///
/// Each stored row has a distinct leading key with coefficient 1. When
/// relation tracking is on, every row also records how it was formed from the
/// inserted vectors, and every dependent insertion yields a relation.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Copy> {
    rows: BTreeMap<K, Row<K>>,
    track: bool,
    inserted: usize,
    relations: Vec<SparseVec<usize>>,
}

impl<K: Ord + Copy> Default for Echelon<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Copy> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new(), track: false, inserted: 0, relations: Vec::new() }
    }

    /// Echelon form that records linear relations among inserted vectors.
    pub fn with_relations() -> Self {
        Echelon { track: true, ..Self::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Relations `Σ c_i v_i = 0` among the inserted vectors, one per dependent
    /// insertion.
    pub fn relations(&self) -> &[SparseVec<usize>] {
        &self.relations
    }

    fn reduce_tracked(&self, mut v: SparseVec<K>, mut combo: SparseVec<usize>) -> (SparseVec<K>, SparseVec<usize>) {
        while let Some((lead, c)) = v.first().cloned() {
            let Some(row) = self.rows.get(&lead) else { break };
            v = sub_scaled(&v, &c, &row.vec);
            if self.track {
                combo = sub_scaled(&combo, &c, &row.combo);
            }
        }
        (v, combo)
    }

    /// Remainder after reducing leading terms; zero iff `v` lies in the span.
    pub fn reduce(&self, v: SparseVec<K>) -> SparseVec<K> {
        self.reduce_tracked(v, Vec::new()).0
    }

    pub fn contains(&self, v: &[(K, Rational)]) -> bool {
        self.reduce(v.to_vec()).is_empty()
    }

    /// Inserts `v`; returns `true` if it was independent of the current span.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let combo = if self.track { vec![(index, Rational::one())] } else { Vec::new() };
        let (v, combo) = self.reduce_tracked(v, combo);
        match v.first() {
            None => {
                if self.track {
                    self.relations.push(combo);
                }
                false
            }
            Some((lead, c)) => {
                let inv = c.recip();
                let lead = *lead;
                let row = Row { vec: scale(&v, &inv), combo: scale(&combo, &inv) };
                self.rows.insert(lead, row);
                true
            }
        }
    }

    /// Coefficients expressing `v` in the inserted vectors, if `v` is in the
    /// span. Requires relation tracking.
    pub fn express(&self, v: SparseVec<K>) -> Option<SparseVec<usize>> {
        assert!(self.track, "express needs relation tracking");
        let mut v = v;
        let mut acc: SparseVec<usize> = Vec::new();
        while let Some((lead, c)) = v.first().cloned() {
            let row = self.rows.get(&lead)?;
            v = sub_scaled(&v, &c, &row.vec);
            acc = sub_scaled(&acc, &(-c), &row.combo);
        }
        Some(acc)
    }

    /// Reduced row echelon basis of the span, ordered by pivot.
    pub fn into_rref(self) -> Rref<K> {
        let mut done: BTreeMap<K, SparseVec<K>> = BTreeMap::new();
        for (pivot, row) in self.rows.into_iter().rev() {
            let mut v = row.vec.clone();
            for (key, _) in row.vec.iter().skip(1) {
                if let Some(other) = done.get(key) {
                    if let Some(c) = lookup(&v, key) {
                        v = sub_scaled(&v, &c, other);
                    }
                }
            }
            done.insert(pivot, v);
        }
        Rref { rows: done }
    }
}

/// Reduced row echelon basis: every row has leading coefficient 1 and zeros
/// in the pivot columns of the other rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<K: Ord + Copy> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Copy> Rref<K> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values()
    }

    pub fn into_rows(self) -> Vec<SparseVec<K>> {
        self.rows.into_values().collect()
    }

    pub fn pivots(&self) -> Vec<K> {
        self.rows.keys().copied().collect()
    }

    /// Linear projection killing the span: `v - Σ_p v[p] row_p`.
    pub fn remainder(&self, v: &[(K, Rational)]) -> SparseVec<K> {
        let mut out = v.to_vec();
        for (key, c) in v {
            if let Some(row) = self.rows.get(key) {
                out = sub_scaled(&out, c, row);
            }
        }
        out
    }
}

/// Rank of a family of sparse vectors and a canonical basis of the relations
/// among them.
pub fn span_rank<K: Ord + Copy>(vectors: &[SparseVec<K>]) -> (usize, Vec<SparseVec<usize>>) {
    let mut ech = Echelon::with_relations();
    for v in vectors {
        ech.insert(v.clone());
    }
    let rank = ech.rank();
    let mut rel = Echelon::new();
    for r in ech.relations() {
        rel.insert(r.clone());
    }
    (rank, rel.into_rref().into_rows())
}

/// Rank only.
pub fn rank_of<K: Ord + Copy>(vectors: impl IntoIterator<Item = SparseVec<K>>) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// Kernel of the map sending the `j`-th source basis vector to `images[j]`,
/// as a canonical (reduced echelon) basis of coefficient vectors.
///
/// Large systems go through the multi-modular solver first; the result is
/// the same canonical basis either way.
pub fn kernel_of_images<K: Ord + Copy>(images: &[SparseVec<K>]) -> Vec<SparseVec<usize>> {
    if images.len() >= MODULAR_THRESHOLD {
        if let Some(kernel) = crate::modular::kernel(images) {
            let mut e = Echelon::new();
            for v in kernel {
                e.insert(v);
            }
            return e.into_rref().into_rows();
        }
    }
    span_rank(images).1
}

const MODULAR_THRESHOLD: usize = 40;

/// Dense matrix over Q, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Ok(RationalMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&x| rational::int(x)).collect()).collect();
        Self::from_rows(&v).expect("rectangular")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &RationalMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &RationalMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * c).collect() }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// True when the matrix is square and a multiple of the identity.
    pub fn is_scalar(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self[(i, i)] == self[(0, 0)] } else { self[(i, j)].is_zero() })
            })
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &m[(i, j)] - &f * &m[(r, j)];
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical nullspace basis: one vector per free column, with a 1 in that
    /// column and zeros in the other free columns.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        if self.cols >= MODULAR_THRESHOLD {
            let columns: Vec<SparseVec<usize>> = (0..self.cols).map(|c| to_sparse(&self.column(c))).collect();
            if let Some(kernel) = crate::modular::kernel(&columns) {
                return kernel.iter().map(|v| to_dense(v, self.cols)).collect();
            }
        }
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = b` if possible (one particular solution).
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let (m, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m[(r, self.cols)].clone();
        }
        Some(x)
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &pivot;
                for j in c..m.cols {
                    let v = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
        Ok(det)
    }

    /// Inverse of a square matrix, if invertible.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rational::one();
        }
        let (m, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = m[(r, n + c)].clone();
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(rational::format).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dense vector to sparse form.
pub fn to_sparse(v: &[Rational]) -> SparseVec<usize> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Sparse vector over `0..len` to dense form.
pub fn to_dense(v: &[(usize, Rational)], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}
