//! Sparse elements of `Λ^d(Q^N)` and of the dual algebra `Λ^d(Q^N)^∨`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::index_set::{IndexSet, MAX_DIM};
use crate::linalg::{RationalMatrix, SparseVec};
use crate::rational::{self, Rational};

/// Homogeneous element of degree `grade` in the exterior algebra of `Q^dim`,
/// stored as a map from index sets to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector {
    dim: usize,
    grade: usize,
    terms: BTreeMap<IndexSet, Rational>,
}

/// Element of the dual exterior algebra, acting on [`Multivector`]s by
/// contraction. The basis element `x_J` is dual to `e_J`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DualForm(Multivector);

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::AmbientOutOfRange { found: dim, max: MAX_DIM });
    }
    Ok(())
}

impl Multivector {
    pub fn zero(dim: usize, grade: usize) -> Self {
        Multivector { dim, grade, terms: BTreeMap::new() }
    }

    /// The monomial `e_I`.
    pub fn basis(dim: usize, set: IndexSet) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(set, Rational::one());
        Multivector { dim, grade: set.len(), terms }
    }

    /// The monomial `e_I` from 0-based indices (must be increasing).
    pub fn monomial(dim: usize, indices: &[usize]) -> Self {
        Self::basis(dim, IndexSet::from_sorted(indices).expect("increasing indices"))
    }

    /// Builds a multivector from `(index set, coefficient)` pairs, summing
    /// repeated index sets and dropping zeros.
    pub fn from_terms(dim: usize, grade: usize, terms: impl IntoIterator<Item = (IndexSet, Rational)>) -> Result<Self> {
        check_dim(dim)?;
        let mut m = Multivector::zero(dim, grade);
        for (set, c) in terms {
            if set.len() != grade {
                return Err(Error::GradeMismatch { expected: grade, found: set.len() });
            }
            if let Some(max) = set.max_index() {
                if max >= dim {
                    return Err(Error::IndexOutOfRange { index: max + 1, dim });
                }
            }
            m.add_term(set, c);
        }
        Ok(m)
    }

    /// Grade-one element with the given coordinates.
    pub fn vector(coords: &[Rational]) -> Self {
        let mut m = Multivector::zero(coords.len(), 1);
        for (i, c) in coords.iter().enumerate() {
            m.add_term(IndexSet::singleton(i), c.clone());
        }
        m
    }

    /// `v_1 ∧ ... ∧ v_k` for vectors of equal length.
    pub fn wedge_vectors(dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        let mut acc = Multivector::scalar(dim, Rational::one());
        for v in vectors {
            if v.len() != dim {
                return Err(Error::AmbientMismatch { left: dim, right: v.len() });
            }
            acc = acc.wedge(&Multivector::vector(v))?;
        }
        Ok(acc)
    }

    /// Degree-zero element.
    pub fn scalar(dim: usize, c: Rational) -> Self {
        let mut m = Multivector::zero(dim, 0);
        m.add_term(IndexSet::EMPTY, c);
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn terms(&self) -> &BTreeMap<IndexSet, Rational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, set: IndexSet) -> Rational {
        self.terms.get(&set).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lexicographically first term.
    pub fn leading(&self) -> Option<(IndexSet, &Rational)> {
        self.terms.iter().next().map(|(s, c)| (*s, c))
    }

    /// Adds `c e_I` in place.
    pub fn add_term(&mut self, set: IndexSet, c: Rational) {
        debug_assert_eq!(set.len(), self.grade);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(set) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Multivector::zero(self.dim, self.grade);
        }
        let terms = self.terms.iter().map(|(s, v)| (*s, v * c)).collect();
        Multivector { dim: self.dim, grade: self.grade, terms }
    }

    fn check_compatible(&self, other: &Multivector) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::AmbientMismatch { left: self.dim, right: other.dim });
        }
        if self.grade != other.grade {
            return Err(Error::GradeMismatch { expected: self.grade, found: other.grade });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Multivector) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &Multivector) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (s, v) in &other.terms {
            out.add_term(*s, c * v);
        }
        Ok(out)
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Multivector) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::AmbientMismatch { left: self.dim, right: other.dim });
        }
        let mut out = Multivector::zero(self.dim, self.grade + other.grade);
        if out.grade > self.dim {
            return Ok(out);
        }
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(sign) = a.merge_sign(*b) {
                    let v = x * y;
                    out.add_term(a.union(*b), if sign < 0 { -v } else { v });
                }
            }
        }
        Ok(out)
    }

    /// Image under the linear map `g: Q^dim -> Q^m` whose `j`-th column is
    /// the image of `e_j`, acting as `g e_{i1} ∧ ... ∧ g e_{ik}`.
    pub fn apply_matrix(&self, g: &RationalMatrix) -> Result<Self> {
        if g.ncols() != self.dim {
            return Err(Error::AmbientMismatch { left: self.dim, right: g.ncols() });
        }
        let m = g.nrows();
        let columns: Vec<Multivector> = (0..self.dim).map(|j| Multivector::vector(&g.column(j))).collect();
        let mut out = Multivector::zero(m, self.grade);
        for (set, c) in &self.terms {
            let mut acc = Multivector::scalar(m, c.clone());
            for i in set.iter() {
                acc = acc.wedge(&columns[i])?;
                if acc.is_zero() {
                    break;
                }
            }
            for (s, v) in acc.terms {
                out.add_term(s, v);
            }
        }
        Ok(out)
    }

    /// Relabels `e_i` as `e_{map[i]}` in a space of dimension `new_dim`; the
    /// map must be strictly increasing.
    pub fn remap(&self, map: &[usize], new_dim: usize) -> Self {
        debug_assert!(map.windows(2).all(|w| w[0] < w[1]));
        let terms = self.terms.iter().map(|(s, c)| (s.remap(map), c.clone())).collect();
        Multivector { dim: new_dim, grade: self.grade, terms }
    }

    /// Restriction to the coordinates listed in `support` (sorted), provided
    /// every term only involves those coordinates.
    pub fn restrict_to_coords(&self, support: &[usize]) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (s, c) in &self.terms {
            terms.insert(s.positions_in(support)?, c.clone());
        }
        Some(Multivector { dim: support.len(), grade: self.grade, terms })
    }

    /// Indices occurring in some term.
    pub fn coordinate_support(&self) -> IndexSet {
        self.terms.keys().fold(IndexSet::EMPTY, |acc, s| acc.union(*s))
    }

    /// `Some(r)` with `self = r * other` when the two are proportional and
    /// `other` is nonzero.
    pub fn ratio_to(&self, other: &Multivector) -> Option<Rational> {
        if self.dim != other.dim || self.grade != other.grade || other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.terms.len() != other.terms.len() {
            return None;
        }
        let (s0, c0) = other.leading()?;
        let r = self.coeff(s0) / c0;
        (self == &other.scale(&r)).then_some(r)
    }

    /// Scaled so that the leading coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn to_sparse(&self) -> SparseVec<IndexSet> {
        self.terms.iter().map(|(s, c)| (*s, c.clone())).collect()
    }

    pub fn from_sparse(dim: usize, grade: usize, v: &[(IndexSet, Rational)]) -> Self {
        let terms = v.iter().filter(|(_, c)| !c.is_zero()).map(|(s, c)| (*s, c.clone())).collect();
        Multivector { dim, grade, terms }
    }

    /// Dense coordinates of a grade-one element.
    pub fn to_vector(&self) -> Vec<Rational> {
        assert_eq!(self.grade, 1);
        let mut v = vec![Rational::zero(); self.dim];
        for (s, c) in &self.terms {
            v[s.iter().next().expect("grade one")] = c.clone();
        }
        v
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, other: &Multivector) -> Multivector {
        self.checked_add(other).expect("compatible multivectors")
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, other: &Multivector) -> Multivector {
        self.add_scaled(&-Rational::one(), other).expect("compatible multivectors")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(&-Rational::one())
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (s, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{} ", rational::format(&a))?;
            }
            if s.is_empty() {
                write!(f, "1")?;
            } else {
                write!(f, "{s}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ^{}(Q^{}): {}", self.grade, self.dim, self)
    }
}

impl DualForm {
    pub fn new(inner: Multivector) -> Self {
        DualForm(inner)
    }

    /// The monomial `x_J`.
    pub fn basis(dim: usize, set: IndexSet) -> Self {
        DualForm(Multivector::basis(dim, set))
    }

    pub fn inner(&self) -> &Multivector {
        &self.0
    }

    pub fn into_inner(self) -> Multivector {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn grade(&self) -> usize {
        self.0.grade
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn wedge(&self, other: &DualForm) -> Result<DualForm> {
        Ok(DualForm(self.0.wedge(&other.0)?))
    }

    /// Contraction `x ⌟ v`. For monomials,
    /// `x_J ⌟ e_I = (-1)^{inv(J, I∖J)} e_{I∖J}` when `J ⊂ I` and zero
    /// otherwise, where `inv` counts inversions of the concatenated sequence.
    /// By multilinearity this is the signed determinant expansion over
    /// `|J|`-subsets of `I`.
    pub fn contract(&self, v: &Multivector) -> Result<Multivector> {
        if self.dim() != v.dim {
            return Err(Error::AmbientMismatch { left: self.dim(), right: v.dim });
        }
        if self.grade() > v.grade {
            return Err(Error::GradeMismatch { expected: v.grade, found: self.grade() });
        }
        let mut out = Multivector::zero(v.dim, v.grade - self.grade());
        for (j, x) in &self.0.terms {
            for (i, y) in &v.terms {
                if !j.is_subset(*i) {
                    continue;
                }
                let rest = i.difference(*j);
                let v = x * y;
                let neg = j.inversions(rest) % 2 == 1;
                out.add_term(rest, if neg { -v } else { v });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for DualForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.0.to_string();
        write!(f, "{}", s.replace('e', "x"))
    }
}

impl fmt::Debug for DualForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Λ^{}(Q^{})^∨: {}", self.grade(), self.dim(), self)
    }
}
