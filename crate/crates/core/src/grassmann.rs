//! Subspaces of `Q^N`, their Plücker vectors, distances and tangent spaces.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::index_set::{IndexSet, MAX_DIM};
use crate::linalg::{self, Echelon, RationalMatrix, SparseVec};
use crate::multivector::{DualForm, Multivector};
use crate::rational::Rational;

/// Linear subspace of `Q^N`, stored as its reduced row echelon basis. Two
/// equal subspaces always have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: RationalMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given vectors (each of length `ambient`).
    pub fn span(ambient: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        if ambient == 0 || ambient > MAX_DIM {
            return Err(Error::AmbientOutOfRange { found: ambient, max: MAX_DIM });
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::AmbientMismatch { left: ambient, right: v.len() });
        }
        if vectors.is_empty() {
            return Ok(Self::zero(ambient));
        }
        let (m, pivots) = RationalMatrix::from_rows(vectors)?.rref();
        let rows: Vec<Vec<Rational>> = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        let basis = if rows.is_empty() { RationalMatrix::zeros(0, ambient) } else { RationalMatrix::from_rows(&rows)? };
        Ok(Subspace { ambient, basis, pivots })
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: RationalMatrix::zeros(0, ambient), pivots: Vec::new() }
    }

    /// Span of the coordinate vectors `e_i`, `i` in `coords` (0-based).
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Result<Self> {
        let vs: Vec<Vec<Rational>> = coords.iter().map(|&i| unit(ambient, i)).collect();
        Self::span(ambient, &vs)
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinate(ambient, &(0..ambient).collect::<Vec<_>>()).expect("valid ambient")
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Reduced row echelon basis, one row per basis vector.
    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.to_rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates that are not pivots, i.e. whose unit vectors complete the
    /// basis to a basis of `Q^N`.
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Coefficients of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if v.len() != self.ambient {
            return None;
        }
        let c: Vec<Rational> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        (self.lift(&c) == v).then_some(c)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    /// `Σ c_i b_i` for the echelon basis `b_i`.
    pub fn lift(&self, coeffs: &[Rational]) -> Vec<Rational> {
        assert_eq!(coeffs.len(), self.dim());
        let mut out = vec![Rational::zero(); self.ambient];
        for (r, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.basis.row(r)) {
                if !b.is_zero() {
                    *o += c * b;
                }
            }
        }
        out
    }

    /// Inclusion `Q^dim -> Q^N` as a matrix whose columns are the basis.
    pub fn inclusion(&self) -> RationalMatrix {
        self.basis.transpose()
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Subspace::span(self.ambient, &vs)
    }

    /// Annihilator in the dual space, identified with `Q^N` through the
    /// standard pairing.
    pub fn annihilator(&self) -> Subspace {
        if self.dim() == 0 {
            return Subspace::full(self.ambient);
        }
        Subspace::span(self.ambient, &self.basis.kernel()).expect("same ambient")
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        self.same_ambient(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Image under a square matrix.
    pub fn image(&self, g: &RationalMatrix) -> Result<Subspace> {
        if g.ncols() != self.ambient {
            return Err(Error::AmbientMismatch { left: self.ambient, right: g.ncols() });
        }
        let vs: Vec<Vec<Rational>> = self.basis_vectors().iter().map(|v| g.mul_vec(v)).collect();
        Subspace::span(g.nrows(), &vs)
    }

    /// Extension of `u ∈ Λ^d(Q^dim)` to `Λ^d(Q^N)` through the inclusion.
    pub fn extend(&self, u: &Multivector) -> Result<Multivector> {
        u.apply_matrix(&self.inclusion())
    }

    /// Coordinates of `t ∈ Λ^d(U)` with respect to the wedge basis of the
    /// echelon basis of `U`, or `None` when `t` is not in `Λ^d(U)`.
    pub fn restrict(&self, t: &Multivector) -> Option<Multivector> {
        if t.dim() != self.ambient {
            return None;
        }
        let mut terms = Vec::new();
        for (s, c) in t.terms() {
            if s.is_subset(pivot_set(&self.pivots)) {
                terms.push((s.positions_in(&self.pivots)?, c.clone()));
            }
        }
        if self.dim() == 0 {
            return None;
        }
        let u = Multivector::from_terms(self.dim(), t.grade(), terms).ok()?;
        (self.extend(&u).ok()? == *t).then_some(u)
    }

    fn same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch { left: self.ambient, right: other.ambient });
        }
        Ok(())
    }
}

fn pivot_set(pivots: &[usize]) -> IndexSet {
    pivots.iter().fold(IndexSet::EMPTY, |s, &p| s.with(p))
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in Q^{}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

/// Unit vector `e_i` of length `n`.
pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[i] = Rational::one();
    v
}

/// Point of the Grassmannian `Gr(k, N)`: a `k`-dimensional subspace together
/// with its Plücker vector, the wedge of its echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrassPoint {
    space: Subspace,
    pluecker: Multivector,
}

impl GrassPoint {
    pub fn new(space: Subspace) -> Result<Self> {
        if space.dim() == 0 {
            return Err(Error::OutOfRange("the zero subspace has no Plücker point".into()));
        }
        let pluecker = Multivector::wedge_vectors(space.ambient, &space.basis_vectors())?;
        Ok(GrassPoint { space, pluecker })
    }

    /// Coordinate point `⟨e_i : i ∈ coords⟩` (0-based).
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Result<Self> {
        Self::new(Subspace::coordinate(ambient, coords)?)
    }

    /// Recognises a decomposable tensor: returns the point `p` and `c` with
    /// `t = c · pl(p)`.
    pub fn from_multivector(t: &Multivector) -> Result<(Self, Rational)> {
        if t.is_zero() {
            return Err(Error::ZeroTensor);
        }
        let kernel = multiplication_kernel(t);
        if kernel.dim() != t.grade() {
            return Err(Error::NotDecomposable);
        }
        let p = GrassPoint::new(kernel)?;
        let c = t.ratio_to(&p.pluecker).ok_or(Error::NotDecomposable)?;
        Ok((p, c))
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn pluecker(&self) -> &Multivector {
        &self.pluecker
    }

    pub fn k(&self) -> usize {
        self.space.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient
    }

    pub fn image(&self, g: &RationalMatrix) -> Result<Self> {
        GrassPoint::new(self.space.image(g)?)
    }
}

impl fmt::Debug for GrassPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GrassPoint({})", self.pluecker)
    }
}

/// `H_t = ker(x ↦ x ∧ t)`, the largest subspace dividing `t`.
pub fn multiplication_kernel(t: &Multivector) -> Subspace {
    let n = t.dim();
    let images: Vec<SparseVec<IndexSet>> = (0..n)
        .map(|i| Multivector::basis(n, IndexSet::singleton(i)).wedge(t).expect("same ambient").to_sparse())
        .collect();
    let kernel: Vec<Vec<Rational>> = linalg::kernel_of_images(&images).iter().map(|v| linalg::to_dense(v, n)).collect();
    Subspace::span(n, &kernel).expect("valid ambient")
}

/// Subspace spanned by all contractions `ξ ⌟ t` with `ξ` of degree
/// `grade(t) - 1`: the smallest `S` with `t ∈ Λ^k S`.
pub fn support_space(t: &Multivector) -> Subspace {
    let n = t.dim();
    if t.grade() == 0 || t.is_zero() {
        return Subspace::zero(n);
    }
    let mut vs: Vec<Vec<Rational>> = Vec::new();
    let mut ech = Echelon::new();
    for s in t.terms().keys() {
        for i in s.iter() {
            let xi = DualForm::basis(n, s.without(i));
            let v = xi.contract(t).expect("grade fits").to_vector();
            if ech.insert(linalg::to_sparse(&v)) {
                vs.push(v);
            }
        }
    }
    Subspace::span(n, &vs).expect("valid ambient")
}

/// Coefficients `c` with `target = Σ c_i gens_i`, if `target` is in the span.
pub fn express_in_span(target: &Multivector, gens: &[Multivector]) -> Option<Vec<Rational>> {
    let mut ech = Echelon::with_relations();
    for g in gens {
        ech.insert(g.to_sparse());
    }
    let c = ech.express(target.to_sparse())?;
    Some(linalg::to_dense(&c, gens.len()))
}

/// Hamming distance `k - dim(H_p ∩ H_q)`.
pub fn hamming_distance(p: &GrassPoint, q: &GrassPoint) -> Result<usize> {
    if p.k() != q.k() {
        return Err(Error::GradeMismatch { expected: p.k(), found: q.k() });
    }
    Ok(p.k() - p.space.intersection(&q.space)?.dim())
}

/// Chain `p = p_0, p_1, ..., p_d = q` with consecutive points at distance one,
/// obtained by exchanging one basis vector at a time.
pub fn distance_chain(p: &GrassPoint, q: &GrassPoint) -> Result<Vec<GrassPoint>> {
    let d = hamming_distance(p, q)?;
    let n = p.ambient_dim();
    let common = p.space.intersection(&q.space)?;
    let extend = |base: &Subspace, target: &Subspace| -> Vec<Vec<Rational>> {
        let mut acc = base.clone();
        let mut extra = Vec::new();
        for v in target.basis_vectors() {
            if !acc.contains(&v) {
                acc = acc.sum(&Subspace::span(n, std::slice::from_ref(&v)).expect("same ambient")).expect("same ambient");
                extra.push(v);
            }
        }
        extra
    };
    let from_p = extend(&common, &p.space);
    let from_q = extend(&common, &q.space);
    debug_assert_eq!(from_p.len(), d);
    let mut chain = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut vs = common.basis_vectors();
        vs.extend(from_q[..j].iter().cloned());
        vs.extend(from_p[j..].iter().cloned());
        chain.push(GrassPoint::new(Subspace::span(n, &vs)?)?);
    }
    Ok(chain)
}

/// Basis of the affine tangent space `T_p = Λ^{k-1}H_p ∧ V`: the Plücker
/// vector followed by the `k(N-k)` vectors obtained by replacing one echelon
/// basis vector with a complementary unit vector.
pub fn tangent_space_basis(p: &GrassPoint) -> Vec<Multivector> {
    let n = p.ambient_dim();
    let rows = p.space.basis_vectors();
    let mut out = vec![p.pluecker.clone()];
    for i in 0..rows.len() {
        for c in p.space.complement_coords() {
            let mut vs = rows.clone();
            vs[i] = unit(n, c);
            out.push(Multivector::wedge_vectors(n, &vs).expect("same ambient"));
        }
    }
    out
}

/// `(dim span(T_p ∪ T_q), dim(T_p ∩ T_q))` for affine tangent spaces.
pub fn tangent_span_pair(p: &GrassPoint, q: &GrassPoint) -> Result<(usize, usize)> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::AmbientMismatch { left: p.ambient_dim(), right: q.ambient_dim() });
    }
    if p.k() != q.k() {
        return Err(Error::GradeMismatch { expected: p.k(), found: q.k() });
    }
    let tp = tangent_space_basis(p);
    let tq = tangent_space_basis(q);
    let each = tp.len();
    let span = linalg::rank_of(tp.iter().chain(&tq).map(Multivector::to_sparse));
    Ok((span, 2 * each - span))
}

/// Generator `E_ij` of `gl(N)` (0-based), sending `e_j` to `e_i` and the
/// other basis vectors to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GlGenerator {
    pub i: usize,
    pub j: usize,
}

impl GlGenerator {
    pub fn new(i: usize, j: usize) -> Self {
        GlGenerator { i, j }
    }

    /// Derivation action `E(v_1 ∧ ... ∧ v_k) = Σ_s v_1 ∧ ... ∧ E v_s ∧ ... ∧ v_k`.
    pub fn act(&self, t: &Multivector) -> Multivector {
        let mut out = Multivector::zero(t.dim(), t.grade());
        for (s, c) in t.terms() {
            if let Some((set, neg)) = generator_on_monomial(self.i, self.j, *s) {
                out.add_term(set, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }
}

fn generator_on_monomial(i: usize, j: usize, s: IndexSet) -> Option<(IndexSet, bool)> {
    if !s.contains(j) {
        return None;
    }
    if i == j {
        return Some((s, false));
    }
    if s.contains(i) {
        return None;
    }
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let between = s.iter().filter(|&x| x > lo && x < hi).count();
    Some((s.without(j).with(i), between % 2 == 1))
}

/// Derivation action of an arbitrary matrix `A = Σ A_ij E_ij`.
pub fn derivation(a: &RationalMatrix, t: &Multivector) -> Result<Multivector> {
    let n = t.dim();
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::ShapeMismatch(format!("{}x{} matrix on Q^{n}", a.nrows(), a.ncols())));
    }
    let mut out = Multivector::zero(n, t.grade());
    for (s, c) in t.terms() {
        for j in s.iter() {
            for i in 0..n {
                let aij = &a[(i, j)];
                if aij.is_zero() {
                    continue;
                }
                if let Some((set, neg)) = generator_on_monomial(i, j, *s) {
                    let v = aij * c;
                    out.add_term(set, if neg { -v } else { v });
                }
            }
        }
    }
    Ok(out)
}

/// The `N²` vectors `E_ij · t`, spanning the tangent space of the cone over
/// the `GL(N)`-orbit of `t`.
pub fn orbit_tangent_vectors(t: &Multivector) -> Vec<Multivector> {
    let n = t.dim();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            out.push(GlGenerator::new(i, j).act(t));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn e(dim: usize, idx: &[usize]) -> Multivector {
        Multivector::monomial(dim, &idx.iter().map(|i| i - 1).collect::<Vec<_>>())
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn generator_action_example() {
        // E_41 e123 = e4 ∧ e2 ∧ e3 = e234
        assert_eq!(GlGenerator::new(3, 0).act(&e(4, &[1, 2, 3])), e(4, &[2, 3, 4]));
        // E_31 e12 = e3 ∧ e2 = -e23
        assert_eq!(GlGenerator::new(2, 0).act(&e(3, &[1, 2])), -&e(3, &[2, 3]));
        assert!(GlGenerator::new(1, 0).act(&e(3, &[1, 2])).is_zero());
        assert_eq!(GlGenerator::new(1, 1).act(&e(3, &[1, 2])), e(3, &[1, 2]));
    }

    #[test]
    fn kernel_of_decomposable() {
        let v1 = ints(&[1, 2, 0, 1]);
        let v2 = ints(&[0, 1, 1, 3]);
        let t = Multivector::wedge_vectors(4, &[v1.clone(), v2.clone()]).unwrap().scale(&int(5));
        let (p, c) = GrassPoint::from_multivector(&t).unwrap();
        assert!(p.space().contains(&v1) && p.space().contains(&v2));
        assert_eq!(p.pluecker().scale(&c), t);
        let s = &e(4, &[1, 2]) + &e(4, &[3, 4]);
        assert_eq!(GrassPoint::from_multivector(&s).unwrap_err(), Error::NotDecomposable);
    }

    #[test]
    fn intersection_and_distance() {
        let p = GrassPoint::coordinate(6, &[0, 1, 2]).unwrap();
        let q = GrassPoint::coordinate(6, &[0, 3, 4]).unwrap();
        assert_eq!(hamming_distance(&p, &q).unwrap(), 2);
        assert_eq!(hamming_distance(&p, &p).unwrap(), 0);
        let chain = distance_chain(&p, &q).unwrap();
        assert_eq!(chain.len(), 3);
        for w in chain.windows(2) {
            assert_eq!(hamming_distance(&w[0], &w[1]).unwrap(), 1);
        }
        assert_eq!(chain.first().unwrap(), &p);
        assert_eq!(chain.last().unwrap(), &q);
    }

    #[test]
    fn tangent_space_dimension() {
        let p = GrassPoint::coordinate(7, &[0, 1, 2]).unwrap();
        let basis = tangent_space_basis(&p);
        assert_eq!(basis.len(), 13);
        assert_eq!(linalg::rank_of(basis.iter().map(Multivector::to_sparse)), 13);
    }

    #[test]
    fn restrict_and_extend() {
        let s = Subspace::span(4, &[ints(&[1, 1, 0, 0]), ints(&[0, 0, 1, 1])]).unwrap();
        let t = Multivector::wedge_vectors(4, &s.basis_vectors()).unwrap();
        let u = s.restrict(&t).unwrap();
        assert_eq!(u, e(2, &[1, 2]));
        assert!(s.restrict(&e(4, &[1, 3])).is_none());
    }

    #[test]
    fn support_of_tensor() {
        let t = &e(6, &[1, 2]) + &e(6, &[3, 4]);
        assert_eq!(support_space(&t), Subspace::coordinate(6, &[0, 1, 2, 3]).unwrap());
    }
}
