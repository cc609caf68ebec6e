//! Recovery of the points behind a secant or tangent tensor.
//!
//! Every tensor `t ∈ Λ^k V` factors as `t = h ∧ t'` where `h` spans the
//! multiplication kernel `H_t` and `t' ∈ Λ^l W` lives on a coordinate
//! complement `W` of `H_t`. All recovery happens on `t'`; the answers are
//! lifted back to `V` and re-verified against `t` exactly.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::grassmann::{
    derivation, express_in_span, hamming_distance, multiplication_kernel, support_space, tangent_space_basis,
    tangent_span_pair, GlGenerator, GrassPoint, Subspace,
};
use crate::index_set::{combinations, IndexSet};
use crate::linalg::{collect_sparse, kernel_of_images, Echelon, RationalMatrix, SparseVec};
use crate::multivector::{DualForm, Multivector};
use crate::rational::{int, sqrt_exact, Rational};
use crate::sampling;

/// Factorisation `t = h ∧ t'` with `h` the wedge of the echelon basis of the
/// multiplication kernel and `t'` written in the non-pivot coordinates.
#[derive(Clone, Debug)]
pub struct Reduction {
    kernel: Subspace,
    complement: Vec<usize>,
    reduced: Multivector,
}

impl Reduction {
    pub fn new(t: &Multivector) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::ZeroTensor);
        }
        Self::with_kernel(t, multiplication_kernel(t))
    }

    /// Factorisation against a given subspace, which must divide `t`.
    pub fn with_kernel(t: &Multivector, kernel: Subspace) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::ZeroTensor);
        }
        let n = t.dim();
        if kernel.ambient_dim() != n {
            return Err(Error::AmbientMismatch { left: n, right: kernel.ambient_dim() });
        }
        if kernel.dim() > t.grade() {
            return Err(Error::Inconsistent(format!(
                "kernel of dimension {} exceeds the grade {}",
                kernel.dim(),
                t.grade()
            )));
        }
        let x_p = DualForm::basis(n, IndexSet::from_sorted(kernel.pivots())?);
        let u = x_p.contract(t)?;
        let h = Multivector::wedge_vectors(n, &kernel.basis_vectors())?;
        if h.wedge(&u)? != *t {
            return Err(Error::Inconsistent("the subspace does not divide the tensor".into()));
        }
        let complement = kernel.complement_coords();
        let reduced = u
            .restrict_to_coords(&complement)
            .ok_or_else(|| Error::Inconsistent("reduced factor touches pivot coordinates".into()))?;
        Ok(Reduction { kernel, complement, reduced })
    }

    /// The multiplication kernel `H_t`.
    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    /// Coordinates (0-based) spanning the complement `W`.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    /// `t'` in the coordinates of `W`.
    pub fn reduced(&self) -> &Multivector {
        &self.reduced
    }

    /// Grade of `t'`, i.e. `k - dim H_t`.
    pub fn l(&self) -> usize {
        self.reduced.grade()
    }

    pub fn ambient_dim(&self) -> usize {
        self.kernel.ambient_dim()
    }

    /// `W` as a subspace of `V`.
    pub fn reduced_ambient(&self) -> Subspace {
        Subspace::coordinate(self.ambient_dim(), &self.complement).expect("valid coordinates")
    }

    /// Embeds a vector of `W` into `V`.
    pub fn lift_vector(&self, w: &[Rational]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.ambient_dim()];
        for (c, x) in self.complement.iter().zip(w) {
            v[*c] = x.clone();
        }
        v
    }

    /// The point `H_t ⊕ span(lifted vectors)`.
    pub fn lift_point(&self, vectors: &[Vec<Rational>]) -> Result<GrassPoint> {
        let mut vs = self.kernel.basis_vectors();
        vs.extend(vectors.iter().map(|w| self.lift_vector(w)));
        GrassPoint::new(Subspace::span(self.ambient_dim(), &vs)?)
    }
}

/// Basis pivots and rows of a point, used to compare decompositions.
pub type PointKey = (Vec<usize>, Vec<Vec<Rational>>);

/// `t = coeff_p · pl(p) + coeff_q · pl(q)` with `pl` the echelon-normalised
/// Plücker vector. The pair is stored in a canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SecantDecomposition {
    pub p: GrassPoint,
    pub q: GrassPoint,
    pub coeff_p: Rational,
    pub coeff_q: Rational,
    /// Whether the pair is the only one (up to order) summing to `t`.
    pub unique: bool,
}

fn space_key(p: &GrassPoint) -> (Vec<usize>, Vec<Vec<Rational>>) {
    (p.space().pivots().to_vec(), p.space().basis_vectors())
}

impl SecantDecomposition {
    fn canonical(p: GrassPoint, q: GrassPoint, coeff_p: Rational, coeff_q: Rational, unique: bool) -> Self {
        if space_key(&q) < space_key(&p) {
            SecantDecomposition { p: q, q: p, coeff_p: coeff_q, coeff_q: coeff_p, unique }
        } else {
            SecantDecomposition { p, q, coeff_p, coeff_q, unique }
        }
    }

    pub fn resynthesize(&self) -> Multivector {
        self.p.pluecker().scale(&self.coeff_p).add_scaled(&self.coeff_q, self.q.pluecker()).expect("same shape")
    }

    /// The unordered pair of subspaces.
    pub fn pair_key(&self) -> (PointKey, PointKey) {
        (space_key(&self.p), space_key(&self.q))
    }

    pub fn distance(&self) -> usize {
        hamming_distance(&self.p, &self.q).expect("same grade")
    }
}

/// Rational certificate for a secant point whose two factors are conjugate
/// over a quadratic field. On the support `S` of `K₂`, a non-scalar element
/// `Z` of the centre of the stabiliser of `K₂` satisfies `Z² - sZ + p = 0`
/// with non-square discriminant, and its derivation action `D` satisfies
/// `D²t' - l·s·Dt' + l²·p·t' = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateCertificate {
    /// `H_t ⊕ S` in `V`.
    pub span: Subspace,
    /// `Z` in the echelon coordinates of `S`.
    pub center: RationalMatrix,
    pub trace_sum: Rational,
    pub product: Rational,
    pub discriminant: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SecantCertificate {
    Rational(SecantDecomposition),
    Conjugate(ConjugateCertificate),
}

/// `t = base_coeff · pl(p) + Σ D_ic · (h_1 ∧ .. e_c .. ∧ h_k)` where `e_c`
/// replaces the `i`-th echelon basis vector of `p` and `c` runs over the
/// complementary coordinates. The rank of `D` is the distance parameter `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentWitness {
    pub point: GrassPoint,
    pub base_coeff: Rational,
    pub displacement: RationalMatrix,
    pub rank: usize,
}

impl TangentWitness {
    pub fn resynthesize(&self) -> Multivector {
        let basis = tangent_space_basis(&self.point);
        let m = self.displacement.ncols();
        let mut acc = basis[0].scale(&self.base_coeff);
        for i in 0..self.displacement.nrows() {
            for c in 0..m {
                let d = &self.displacement[(i, c)];
                if !d.is_zero() {
                    acc = acc.add_scaled(d, &basis[1 + i * m + c]).expect("same shape");
                }
            }
        }
        acc
    }
}

/// `K₂ = ker(y ↦ y ∧ t)` on `Λ²`, as a canonical basis of 2-vectors.
pub fn k2_kernel(t: &Multivector) -> Vec<Multivector> {
    let w = t.dim();
    let basis = combinations(w, 2);
    let images: Vec<SparseVec<IndexSet>> =
        basis.iter().map(|&s| Multivector::basis(w, s).wedge(t).expect("same ambient").to_sparse()).collect();
    kernel_of_images(&images)
        .iter()
        .map(|c| {
            let terms: Vec<(IndexSet, Rational)> = c.iter().map(|(i, x)| (basis[*i], x.clone())).collect();
            Multivector::from_sparse(w, 2, &terms)
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Constraint {
    Span(usize, IndexSet),
    Commute(usize, usize, usize),
}

fn matrix_from_coeffs(s: usize, coeffs: &[(usize, Rational)]) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(s, s);
    for (u, c) in coeffs {
        m[(u / s, u % s)] = c.clone();
    }
    m
}

/// Basis of `{A ∈ gl(s) : A·y ∈ span(ys) for all y, [A, B] = 0 for all B in
/// commute_with}`, with `A` acting on multivectors as a derivation.
pub fn stabilizer(ys: &[Multivector], commute_with: &[RationalMatrix], s: usize) -> Vec<RationalMatrix> {
    let mut ech = Echelon::new();
    for y in ys {
        ech.insert(y.to_sparse());
    }
    let rref = ech.into_rref();
    let mut images = Vec::with_capacity(s * s);
    for i in 0..s {
        for j in 0..s {
            let g = GlGenerator::new(i, j);
            let mut entries: Vec<(Constraint, Rational)> = Vec::new();
            for (b, y) in ys.iter().enumerate() {
                let r = rref.remainder(&g.act(y).to_sparse());
                entries.extend(r.into_iter().map(|(set, c)| (Constraint::Span(b, set), c)));
            }
            // [E_ij, B] = (row i <- row j of B) - (column j <- column i of B)
            for (c, b) in commute_with.iter().enumerate() {
                for col in 0..s {
                    entries.push((Constraint::Commute(c, i, col), b[(j, col)].clone()));
                }
                for row in 0..s {
                    entries.push((Constraint::Commute(c, row, j), -b[(row, i)].clone()));
                }
            }
            images.push(collect_sparse(entries));
        }
    }
    kernel_of_images(&images).iter().map(|v| matrix_from_coeffs(s, v)).collect()
}

fn scalar_action_solutions(ys: &[Multivector], s: usize) -> Vec<RationalMatrix> {
    // unknowns: the s² entries of A, then the scalar c
    let mut images = Vec::with_capacity(s * s + 1);
    for i in 0..s {
        for j in 0..s {
            let g = GlGenerator::new(i, j);
            let entries = ys.iter().enumerate().flat_map(|(b, y)| g.act(y).terms().iter().map(move |(set, c)| ((b, *set), c.clone())).collect::<Vec<_>>());
            images.push(collect_sparse(entries));
        }
    }
    let minus_c = ys.iter().enumerate().flat_map(|(b, y)| y.terms().iter().map(move |(set, c)| ((b, *set), -c.clone())).collect::<Vec<_>>());
    images.push(collect_sparse(minus_c));
    kernel_of_images(&images)
        .iter()
        .map(|v| {
            let entries: Vec<(usize, Rational)> = v.iter().filter(|(u, _)| *u < s * s).cloned().collect();
            matrix_from_coeffs(s, &entries)
        })
        .filter(|m| !m.is_zero())
        .collect()
}

/// The scalar by which `a` acts on every `y`, if there is one.
fn common_eigenvalue(a: &RationalMatrix, ys: &[Multivector]) -> Option<Rational> {
    let first = ys.first()?;
    let image = derivation(a, first).expect("same ambient");
    let c = if image.is_zero() { Rational::zero() } else { image.ratio_to(first)? };
    ys.iter().all(|y| derivation(a, y).expect("same ambient") == y.scale(&c)).then_some(c)
}

/// Basis of `{A ∈ gl(s) : A·y = c·y for all y in span(ys), one c}`.
///
/// For `ys` spanning `H_a ∧ H_b` with `H_a ⊕ H_b = k^s` this is the centre
/// `span(π_a, π_b)` of the stabiliser of `span(ys)`. The system is first
/// solved on a few generic combinations of `ys` and the answer is checked
/// on every `y`; if the check fails it is solved on all of `ys`.
pub fn scalar_action_space(ys: &[Multivector], s: usize) -> Vec<RationalMatrix> {
    let probes: Vec<Multivector> = ys.iter().take(2).chain(ys.iter().rev().take(2)).cloned().collect();
    let sol = scalar_action_solutions(&probes, s);
    if !sol.is_empty() && sol.iter().all(|a| common_eigenvalue(a, ys).is_some()) {
        sol
    } else {
        scalar_action_solutions(ys, s)
    }
}

/// Writes a 2-form as `Σ a_i ∧ b_i` with `2 · (number of pairs)` equal to its
/// rank, by repeatedly splitting off the leading monomial.
pub fn skew_reduction(t: &Multivector) -> Result<Vec<(Vec<Rational>, Vec<Rational>)>> {
    if t.grade() != 2 {
        return Err(Error::GradeMismatch { expected: 2, found: t.grade() });
    }
    let n = t.dim();
    let mut rest = t.clone();
    let mut pairs = Vec::new();
    while let Some((set, c)) = rest.leading() {
        let c = c.clone();
        let idx = set.to_vec();
        let u = DualForm::basis(n, IndexSet::singleton(idx[0])).contract(&rest)?.to_vector();
        let v = DualForm::basis(n, IndexSet::singleton(idx[1])).contract(&rest)?.to_vector();
        let a: Vec<Rational> = v.iter().map(|x| -x / &c).collect();
        let b = u;
        let ab = Multivector::wedge_vectors(n, &[a.clone(), b.clone()])?;
        rest = &rest - &ab;
        pairs.push((a, b));
        if pairs.len() > n {
            return Err(Error::Inconsistent("skew reduction did not terminate".into()));
        }
    }
    Ok(pairs)
}

fn decomposition_from_subspaces(
    t: &Multivector,
    red: &Reduction,
    a: &[Vec<Rational>],
    b: &[Vec<Rational>],
    unique: bool,
) -> Result<SecantDecomposition> {
    let p = red.lift_point(a)?;
    let q = red.lift_point(b)?;
    let c = express_in_span(t, &[p.pluecker().clone(), q.pluecker().clone()])
        .ok_or_else(|| Error::SplitFailed("the recovered points do not span the tensor".into()))?;
    let dec = SecantDecomposition::canonical(p, q, c[0].clone(), c[1].clone(), unique);
    if dec.resynthesize() != *t || dec.coeff_p.is_zero() || dec.coeff_q.is_zero() {
        return Err(Error::SplitFailed("re-synthesis differs from the input".into()));
    }
    Ok(dec)
}

/// Secant test and split for `l >= 3`.
///
/// On the support `S` of `K₂` (which must be `2l`-dimensional, with
/// `dim K₂ = l²`), the stabiliser of `K₂ = H_a ∧ H_b` in `gl(S)` has a
/// two-dimensional centre spanned by the projections onto `H_a` and `H_b`.
/// The eigenspaces of a non-scalar central element are the two factors.
pub fn secant_certificate(t: &Multivector, red: &Reduction) -> Result<SecantCertificate> {
    let w = red.reduced();
    let l = w.grade();
    if l < 3 {
        return Err(Error::NotSecant(format!("split by centre needs l >= 3, got {l}")));
    }
    let n_w = w.dim();
    let k2 = k2_kernel(w);
    if k2.len() != l * l {
        return Err(Error::NotSecant(format!("dim K₂ = {}, expected {}", k2.len(), l * l)));
    }
    let mut contractions = Vec::new();
    for y in &k2 {
        for i in y.coordinate_support().iter() {
            contractions.push(DualForm::basis(n_w, IndexSet::singleton(i)).contract(y)?.to_vector());
        }
    }
    let support = Subspace::span(n_w, &contractions)?;
    if support.dim() != 2 * l {
        return Err(Error::NotSecant(format!("support of K₂ has dimension {}, expected {}", support.dim(), 2 * l)));
    }
    let ts = support.restrict(w).ok_or_else(|| Error::NotSecant("t' is not supported on the span of K₂".into()))?;
    let s = 2 * l;
    let ks = k2_kernel(&ts);
    let center = scalar_action_space(&ks, s);
    if center.len() != 2 {
        return Err(Error::NotSecant(format!("centre of the stabiliser of K₂ has dimension {}", center.len())));
    }
    let z = center
        .iter()
        .find(|m| !m.is_scalar())
        .ok_or_else(|| Error::NotSecant("centre is scalar".into()))?
        .clone();
    let lq = int(l as i64);
    let trace_sum = z.trace() / &lq;
    let z2 = z.mul(&z)?;
    let product = (&trace_sum * &trace_sum - z2.trace() / &lq) / int(2);
    let identity = RationalMatrix::identity(s);
    if !z2.sub(&z.scale(&trace_sum)).add(&identity.scale(&product)).is_zero() {
        return Err(Error::SplitFailed("central element is not annihilated by its quadratic".into()));
    }
    let discriminant = &trace_sum * &trace_sum - int(4) * &product;
    if discriminant.is_zero() {
        return Err(Error::SplitFailed("central element has a repeated eigenvalue".into()));
    }
    let to_w = |vs: Vec<Vec<Rational>>| -> Vec<Vec<Rational>> { vs.iter().map(|v| support.lift(v)).collect() };
    match sqrt_exact(&discriminant) {
        Some(root) => {
            let two = int(2);
            let alpha = (&trace_sum + &root) / &two;
            let beta = (&trace_sum - &root) / &two;
            let ea = z.sub(&identity.scale(&alpha)).kernel();
            let eb = z.sub(&identity.scale(&beta)).kernel();
            if ea.len() != l || eb.len() != l {
                return Err(Error::SplitFailed(format!("eigenspaces of dimensions {} and {}", ea.len(), eb.len())));
            }
            let dec = decomposition_from_subspaces(t, red, &to_w(ea), &to_w(eb), true)?;
            if dec.distance() != l {
                return Err(Error::Inconsistent("split factors are not transverse".into()));
            }
            Ok(SecantCertificate::Rational(dec))
        }
        None => {
            let d1 = derivation(&z, &ts)?;
            let d2 = derivation(&z, &d1)?;
            let rel = d2
                .add_scaled(&-(&lq * &trace_sum), &d1)?
                .add_scaled(&(&lq * &lq * &product), &ts)?;
            if !rel.is_zero() {
                return Err(Error::SplitFailed("conjugate eigen-relation fails".into()));
            }
            let mut span_vs = red.kernel().basis_vectors();
            span_vs.extend(to_w(support.basis_vectors()).iter().map(|v| red.lift_vector(v)));
            Ok(SecantCertificate::Conjugate(ConjugateCertificate {
                span: Subspace::span(red.ambient_dim(), &span_vs)?,
                center: z,
                trace_sum,
                product,
                discriminant,
            }))
        }
    }
}

/// Tangent test for `l >= 3`.
///
/// On the support `S` of `t'`, the projective stabiliser
/// `g = {A : A·t' ∈ ⟨t'⟩}` of a tangent point `Λ^{l-1}E ∧ F` contains
/// `Hom(F, E)` as the radical of the trace form `tr(AB)`; its image is the
/// tangency space `E`.
pub fn tangent_certificate(t: &Multivector, red: &Reduction) -> Result<TangentWitness> {
    let w = red.reduced();
    let l = w.grade();
    let support = support_space(w);
    let ts = support.restrict(w).ok_or_else(|| Error::NotTangent("t' is not supported on its span".into()))?;
    let s = support.dim();
    let g = stabilizer(std::slice::from_ref(&ts), &[], s);
    let mut gram = RationalMatrix::zeros(g.len(), g.len());
    for a in 0..g.len() {
        for b in a..g.len() {
            let mut tr = Rational::zero();
            for i in 0..s {
                for j in 0..s {
                    let (x, y) = (&g[a][(i, j)], &g[b][(j, i)]);
                    if !x.is_zero() && !y.is_zero() {
                        tr += x * y;
                    }
                }
            }
            gram[(a, b)] = tr.clone();
            gram[(b, a)] = tr;
        }
    }
    let mut image = Vec::new();
    for coeffs in gram.kernel() {
        let mut m = RationalMatrix::zeros(s, s);
        for (c, ga) in coeffs.iter().zip(&g) {
            if !c.is_zero() {
                m = m.add(&ga.scale(c));
            }
        }
        for col in 0..s {
            image.push(m.column(col));
        }
    }
    let e = Subspace::span(s, &image)?;
    if e.dim() != l {
        return Err(Error::NotTangent(format!("trace-form radical has image of dimension {}, expected {l}", e.dim())));
    }
    let lifted: Vec<Vec<Rational>> = e.basis_vectors().iter().map(|v| support.lift(v)).collect();
    let point = red.lift_point(&lifted)?;
    tangent_witness(t, &point)?.ok_or_else(|| Error::NotTangent("tensor is not in the tangent space".into()))
}

/// Expresses `t` in the tangent basis at `p`, if possible.
pub fn tangent_witness(t: &Multivector, p: &GrassPoint) -> Result<Option<TangentWitness>> {
    let basis = tangent_space_basis(p);
    let Some(c) = express_in_span(t, &basis) else { return Ok(None) };
    let k = p.k();
    let m = p.ambient_dim() - k;
    let mut displacement = RationalMatrix::zeros(k, m);
    for i in 0..k {
        for j in 0..m {
            displacement[(i, j)] = c[1 + i * m + j].clone();
        }
    }
    let rank = displacement.rank();
    let witness = TangentWitness { point: p.clone(), base_coeff: c[0].clone(), displacement, rank };
    if witness.resynthesize() != *t {
        return Err(Error::Inconsistent("tangent re-synthesis differs from the input".into()));
    }
    Ok(Some(witness))
}

/// Decomposition of a secant tensor at distance `l` whose multiplication
/// kernel is `h_t`. For `l = 2` one of infinitely many decompositions is
/// returned (`unique = false`); for `l >= 3` the decomposition is unique.
pub fn decompose_secant(t: &Multivector, l: usize, h_t: &Subspace) -> Result<SecantDecomposition> {
    let red = Reduction::new(t)?;
    if red.kernel() != h_t {
        return Err(Error::NotSecant("the given subspace is not the multiplication kernel".into()));
    }
    if red.l() != l {
        return Err(Error::NotSecant(format!("reduced grade is {}, expected {l}", red.l())));
    }
    match l {
        2 => {
            let pairs = skew_reduction(red.reduced())?;
            if pairs.len() != 2 {
                return Err(Error::NotSecant(format!("reduced 2-form has rank {}", 2 * pairs.len())));
            }
            let (a, b) = (&pairs[0], &pairs[1]);
            decomposition_from_subspaces(t, &red, &[a.0.clone(), a.1.clone()], &[b.0.clone(), b.1.clone()], false)
        }
        l if l >= 3 => match secant_certificate(t, &red)? {
            SecantCertificate::Rational(d) => Ok(d),
            SecantCertificate::Conjugate(c) => {
                Err(Error::ConjugateFactors { discriminant: crate::rational::format(&c.discriminant) })
            }
        },
        _ => Err(Error::NotSecant(format!("distance {l} has no proper secant points"))),
    }
}

fn symplectic_frame(t: &Multivector) -> Result<(Reduction, [Vec<Rational>; 4])> {
    let red = Reduction::new(t)?;
    let pairs = if red.l() == 2 { skew_reduction(red.reduced())? } else { Vec::new() };
    if pairs.len() != 2 {
        return Err(Error::WrongStratum {
            expected: "Sigma2=Theta2".into(),
            found: format!("reduced grade {} with {} skew pairs", red.l(), pairs.len()),
        });
    }
    let frame = [pairs[0].0.clone(), pairs[0].1.clone(), pairs[1].0.clone(), pairs[1].1.clone()];
    Ok((red, frame))
}

fn combine(a: &[Rational], c: &Rational, b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + c * y).collect()
}

/// Distinct verified decompositions of a point of `Σ₂ = Θ₂`.
///
/// With `t' = u1∧u2 + u3∧u4`, the shears `u2 += s·u3, u4 += s·u1` and
/// `u1 += r·u4, u3 += r·u2` preserve `t'`; each `(s, r)` gives the pair
/// `(⟨u1, u2⟩, ⟨u3, u4⟩)` of transformed planes. The list starts with
/// `(s, r) = (0, 0)` and `(1, 0)`, followed by seeded samples.
pub fn unident_family(t: &Multivector, samples: usize, seed: u64) -> Result<Vec<SecantDecomposition>> {
    let (red, [u1, u2, u3, u4]) = symplectic_frame(t)?;
    let mut rng = sampling::rng(seed);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut attempt = 0usize;
    while out.len() < samples && attempt < 50 * samples.max(1) {
        let (s, r) = match attempt {
            0 => (Rational::zero(), Rational::zero()),
            1 => (Rational::one(), Rational::zero()),
            _ => (int(rng.gen_range(-3..=3)), int(rng.gen_range(-3..=3))),
        };
        attempt += 1;
        let v2 = combine(&u2, &s, &u3);
        let v4 = combine(&u4, &s, &u1);
        let v1 = combine(&u1, &r, &v4);
        let v3 = combine(&u3, &r, &v2);
        let dec = decomposition_from_subspaces(t, &red, &[v1, v2], &[v3, v4], false)?;
        if seen.insert(dec.pair_key()) {
            out.push(dec);
        }
    }
    Ok(out)
}

/// Points `p` with `t ∈ T_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentialLocusReport {
    pub points: Vec<GrassPoint>,
    /// `true` when `points` is the whole locus.
    pub complete: bool,
    /// Dimension of the locus when it is known to be positive-dimensional.
    pub dimension_hint: Option<usize>,
}

/// Tangency points of `t ∈ Θ_l`.
///
/// For `l >= 3` the point is unique. For `l = 2` the locus is the set of
/// Lagrangian planes of the symplectic 4-space carrying `t'` (dimension 3);
/// the four planes `⟨u_a, u_c⟩`, `a ∈ {1, 2}`, `c ∈ {3, 4}`, are returned.
pub fn tangential_locus(t: &Multivector, l: usize) -> Result<TangentialLocusReport> {
    if l == 2 {
        let (red, u) = symplectic_frame(t)?;
        let mut points: Vec<GrassPoint> = Vec::new();
        for a in [0, 1] {
            for c in [2, 3] {
                let p = red.lift_point(&[u[a].clone(), u[c].clone()])?;
                if tangent_witness(t, &p)?.is_none() {
                    return Err(Error::Inconsistent("Lagrangian plane is not a tangency point".into()));
                }
                if !points.contains(&p) {
                    points.push(p);
                }
            }
        }
        return Ok(TangentialLocusReport { points, complete: false, dimension_hint: Some(3) });
    }
    if l < 2 {
        return Err(Error::OutOfRange(format!("tangential locus needs l >= 2, got {l}")));
    }
    let red = Reduction::new(t)?;
    if red.l() != l {
        return Err(Error::WrongStratum { expected: format!("Theta({l})"), found: format!("reduced grade {}", red.l()) });
    }
    let w = tangent_certificate(t, &red)?;
    if w.rank != l {
        return Err(Error::NotTangent(format!("displacement rank {} differs from {l}", w.rank)));
    }
    Ok(TangentialLocusReport { points: vec![w.point], complete: true, dimension_hint: None })
}

/// Outcome of the Terracini test for a pair of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerraciniReport {
    pub distance: usize,
    pub span_dim: usize,
    pub intersection_dim: usize,
    /// `2(k(N-k)+1)`, the span of two transverse affine tangent spaces.
    pub expected_dim: usize,
    /// True when the tangent spaces meet, i.e. the span is smaller than expected.
    pub in_terracini: bool,
}

/// Whether the affine tangent spaces at `p` and `q` intersect.
pub fn terracini_pair(p: &GrassPoint, q: &GrassPoint) -> Result<TerraciniReport> {
    let distance = hamming_distance(p, q)?;
    let (span_dim, intersection_dim) = tangent_span_pair(p, q)?;
    let k = p.k();
    let expected_dim = 2 * (k * (p.ambient_dim() - k) + 1);
    Ok(TerraciniReport { distance, span_dim, intersection_dim, expected_dim, in_terracini: span_dim < expected_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn e(dim: usize, idx: &[usize]) -> Multivector {
        Multivector::monomial(dim, &idx.iter().map(|i| i - 1).collect::<Vec<_>>())
    }

    #[test]
    fn reduction_of_product() {
        // e1 ∧ (e2e3 + e4e5) in Q^6
        let t = &e(6, &[1, 2, 3]) + &e(6, &[1, 4, 5]);
        let red = Reduction::new(&t).unwrap();
        assert_eq!(red.kernel(), &Subspace::coordinate(6, &[0]).unwrap());
        assert_eq!(red.l(), 2);
        assert_eq!(red.reduced(), &(&e(5, &[1, 2]) + &e(5, &[3, 4])));
    }

    #[test]
    fn skew_reduction_rank() {
        let t = &(&e(6, &[1, 2]) + &e(6, &[3, 4])) + &e(6, &[5, 6]).scale(&int(3));
        let pairs = skew_reduction(&t).unwrap();
        assert_eq!(pairs.len(), 3);
        let mut acc = Multivector::zero(6, 2);
        for (a, b) in &pairs {
            acc = &acc + &Multivector::wedge_vectors(6, &[a.clone(), b.clone()]).unwrap();
        }
        assert_eq!(acc, t);
    }

    #[test]
    fn secant_split_of_coordinate_pair() {
        // e123 + e456 in Q^6
        let t = &e(6, &[1, 2, 3]) + &e(6, &[4, 5, 6]);
        let d = decompose_secant(&t, 3, &Subspace::zero(6)).unwrap();
        assert!(d.unique);
        assert_eq!(d.p, GrassPoint::coordinate(6, &[0, 1, 2]).unwrap());
        assert_eq!(d.q, GrassPoint::coordinate(6, &[3, 4, 5]).unwrap());
        assert_eq!(d.resynthesize(), t);
    }

    #[test]
    fn conjugate_pair_is_certified() {
        // a = (e1 + √2 e4)(e2 + √2 e5)(e3 + √2 e6); a + ā keeps the even powers of √2, doubled
        let mut t = Multivector::zero(6, 3);
        for mask in 0u32..8 {
            let j = mask.count_ones();
            if j % 2 == 1 {
                continue;
            }
            let vs: Vec<Vec<Rational>> =
                (0..3).map(|i| crate::grassmann::unit(6, if mask >> i & 1 == 1 { i + 3 } else { i })).collect();
            let piece = Multivector::wedge_vectors(6, &vs).unwrap();
            t = &t + &piece.scale(&int(2 * 2i64.pow(j / 2)));
        }
        let red = Reduction::new(&t).unwrap();
        match secant_certificate(&t, &red).unwrap() {
            SecantCertificate::Conjugate(c) => {
                assert!(sqrt_exact(&c.discriminant).is_none());
                assert_eq!(c.span.dim(), 6);
            }
            other => panic!("expected conjugate certificate, got {other:?}"),
        }
        assert!(matches!(decompose_secant(&t, 3, &Subspace::zero(6)), Err(Error::ConjugateFactors { .. })));
    }

    #[test]
    fn tangent_point_of_theta3() {
        // θ3 = e4∧e2∧e3 + e1∧e5∧e3 + e1∧e2∧e6 in Q^6
        let vs = |idx: [usize; 3]| {
            Multivector::wedge_vectors(6, &idx.iter().map(|&i| crate::grassmann::unit(6, i - 1)).collect::<Vec<_>>())
                .unwrap()
        };
        let t = &(&vs([4, 2, 3]) + &vs([1, 5, 3])) + &vs([1, 2, 6]);
        let report = tangential_locus(&t, 3).unwrap();
        assert_eq!(report.points, vec![GrassPoint::coordinate(6, &[0, 1, 2]).unwrap()]);
        let red = Reduction::new(&t).unwrap();
        assert!(secant_certificate(&t, &red).is_err());
    }

    #[test]
    fn terracini_distances() {
        let p = GrassPoint::coordinate(7, &[0, 1, 2]).unwrap();
        for (q, expect) in [(vec![0, 1, 3], true), (vec![0, 3, 4], true), (vec![3, 4, 5], false)] {
            let q = GrassPoint::coordinate(7, &q).unwrap();
            assert_eq!(terracini_pair(&p, &q).unwrap().in_terracini, expect);
        }
    }
}
