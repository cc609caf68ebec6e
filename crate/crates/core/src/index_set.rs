//! Sorted index sets `I = {i1 < ... < ik}` labelling the monomials `e_I`.
//!
//! Indices are 0-based internally; text formats use 1-based indices. A set is
//! stored as a 64-bit mask, which caps the ambient dimension at [`MAX_DIM`].

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(u64);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        IndexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_DIM);
        IndexSet(1 << i)
    }

    /// Builds a set from 0-based indices; they must be strictly increasing.
    pub fn from_sorted(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        let mut last: Option<usize> = None;
        for &i in indices {
            if i >= MAX_DIM {
                return Err(Error::IndexOutOfRange { index: i + 1, dim: MAX_DIM });
            }
            if last.is_some_and(|l| l >= i) {
                return Err(Error::UnsortedIndices);
            }
            last = Some(i);
            bits |= 1 << i;
        }
        Ok(IndexSet(bits))
    }

    /// Builds a set from 1-based indices, checking that they lie in `1..=dim`.
    pub fn from_one_based(indices: &[usize], dim: usize) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(indices.len());
        for &i in indices {
            if i == 0 || i > dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            zero_based.push(i - 1);
        }
        Self::from_sorted(&zero_based)
    }

    /// Set of the first `k` indices `{0, ..., k-1}`.
    pub fn initial(k: usize) -> Self {
        if k >= 64 {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << k) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_DIM && self.0 >> i & 1 == 1
    }

    pub fn max_index(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: IndexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn difference(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> IndexSet {
        IndexSet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> IndexSet {
        IndexSet(self.0 & !(1 << i))
    }

    /// Ascending iterator over the 0-based indices.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Number of pairs `(x, y)` with `x` in `self`, `y` in `other` and `x > y`.
    pub fn inversions(self, other: IndexSet) -> u32 {
        other
            .iter()
            .map(|y| {
                let above = if y >= 63 { 0 } else { !0u64 << (y + 1) };
                (self.0 & above).count_ones()
            })
            .sum()
    }

    /// Sign of the permutation sorting the concatenation `(self, other)`,
    /// or `None` when the sets overlap (the wedge of the monomials vanishes).
    pub fn merge_sign(self, other: IndexSet) -> Option<i8> {
        if !self.is_disjoint(other) {
            return None;
        }
        Some(if self.inversions(other).is_multiple_of(2) { 1 } else { -1 })
    }

    /// Relabels index `i` as `map[i]`. The map must be strictly increasing on
    /// the elements of the set, so the monomial keeps its sign.
    pub fn remap(self, map: &[usize]) -> IndexSet {
        let mut bits = 0u64;
        for i in self.iter() {
            bits |= 1 << map[i];
        }
        IndexSet(bits)
    }

    /// Positions of the elements of `self` inside the sorted list `support`,
    /// or `None` if some element is missing.
    pub fn positions_in(self, support: &[usize]) -> Option<IndexSet> {
        let mut bits = 0u64;
        for i in self.iter() {
            let pos = support.binary_search(&i).ok()?;
            bits |= 1 << pos;
        }
        Some(IndexSet(bits))
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

impl Ord for IndexSet {
    /// Lexicographic order on the sorted index sequences.
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let d = diff.trailing_zeros();
        let above = if d >= 63 { 0 } else { !0u64 << (d + 1) };
        // Below `d` both sequences agree; the set holding `d` has the smaller
        // element at the first differing position, unless the other sequence
        // has already ended.
        let (holder, other_bits) = if self.0 >> d & 1 == 1 {
            (Ordering::Less, other.0)
        } else {
            (Ordering::Greater, self.0)
        };
        if other_bits & above != 0 {
            holder
        } else {
            holder.reverse()
        }
    }
}

impl PartialOrd for IndexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

/// All `k`-subsets of `{0, ..., n-1}` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<IndexSet> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(IndexSet::from_sorted(&idx).expect("increasing"));
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Binomial coefficient.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}
