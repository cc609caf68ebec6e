//! Annihilator ideals, their squares in degree `k`, and the resulting
//! sandwich bounds for the tangent space of `σ₂(Gr(k, N))`.

use crate::error::{Error, Result};
use crate::grassmann::{tangent_space_basis, GrassPoint};
use crate::identifiability::{skew_reduction, Reduction, SecantDecomposition};
use crate::index_set::{binomial, combinations, IndexSet};
use crate::linalg::{kernel_of_images, Echelon, SparseVec};
use crate::multivector::{DualForm, Multivector};
use crate::orbits::{classify, ClassificationReport, OrbitLabel, Witness};
use crate::rational::Rational;

/// Degree-`d` piece `Ann_d(t) = ker(x ↦ x ⌟ t)` of the annihilator ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApolarSlice {
    pub degree: usize,
    /// Reduced echelon basis.
    pub generators: Vec<DualForm>,
}

pub fn annihilator(t: &Multivector, d: usize) -> Result<ApolarSlice> {
    if d > t.grade() {
        return Err(Error::GradeMismatch { expected: t.grade(), found: d });
    }
    let n = t.dim();
    let basis = combinations(n, d);
    let images: Vec<SparseVec<IndexSet>> =
        basis.iter().map(|&j| DualForm::basis(n, j).contract(t).expect("grade fits").to_sparse()).collect();
    let generators = kernel_of_images(&images)
        .iter()
        .map(|c| {
            let terms: Vec<(IndexSet, Rational)> = c.iter().map(|(i, x)| (basis[*i], x.clone())).collect();
            DualForm::new(Multivector::from_sparse(n, d, &terms))
        })
        .collect();
    Ok(ApolarSlice { degree: d, generators })
}

/// Echelon basis of the degree-`degree` part of the ideal generated by
/// `generators` in the dual exterior algebra of `Q^n`.
///
/// Degrees are raised one at a time: the degree-`d` part is the span of the
/// degree-`d` generators and of (degree-`(d-1)` part) ∧ `x_i`, so only a basis
/// is ever multiplied.
pub fn ideal_component(generators: &[DualForm], degree: usize, n: usize) -> Vec<DualForm> {
    let mut current: Vec<DualForm> = Vec::new();
    let min_deg = generators.iter().map(DualForm::grade).min().unwrap_or(degree + 1);
    for d in min_deg..=degree {
        let mut ech = Echelon::new();
        let mut next = Vec::new();
        let mut push = |f: DualForm, ech: &mut Echelon<IndexSet>| {
            if !f.is_zero() && ech.insert(f.inner().to_sparse()) {
                next.push(f);
            }
        };
        for g in generators.iter().filter(|g| g.grade() == d) {
            push(g.clone(), &mut ech);
        }
        for f in &current {
            for i in 0..n {
                push(f.wedge(&DualForm::basis(n, IndexSet::singleton(i))).expect("same ambient"), &mut ech);
            }
        }
        current = next;
    }
    current
}

/// Which annihilator slices generate the ideal `I` whose square is taken.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SquareOptions {
    pub max_generator_degree: usize,
}

impl Default for SquareOptions {
    fn default() -> Self {
        SquareOptions { max_generator_degree: 2 }
    }
}

/// Products `α ∧ β` of annihilator generators with `deg α + deg β <= k`.
fn square_generators(t: &Multivector, options: SquareOptions) -> Result<Vec<DualForm>> {
    let k = t.grade();
    let top = options.max_generator_degree.min(k.saturating_sub(1));
    let slices: Vec<ApolarSlice> = (1..=top).map(|d| annihilator(t, d)).collect::<Result<_>>()?;
    let mut products = Vec::new();
    for (ia, a) in slices.iter().enumerate() {
        for b in &slices[ia..] {
            if a.degree + b.degree > k {
                continue;
            }
            let mut ech = Echelon::new();
            for (i, x) in a.generators.iter().enumerate() {
                let start = if a.degree == b.degree { i } else { 0 };
                for y in &b.generators[start..] {
                    let p = x.wedge(y)?;
                    if !p.is_zero() && ech.insert(p.inner().to_sparse()) {
                        products.push(p);
                    }
                }
            }
        }
    }
    Ok(products)
}

/// Basis of `(I²)_k` where `I` is generated by the annihilator slices of
/// degree at most `options.max_generator_degree`.
pub fn squared_degree_k_with(t: &Multivector, options: SquareOptions) -> Result<Vec<DualForm>> {
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let gens = square_generators(t, options)?;
    Ok(ideal_component(&gens, t.grade(), t.dim()))
}

/// `(I²)_k` for the ideal generated by `Ann_1(t)` and `Ann_2(t)`.
pub fn squared_degree_k(t: &Multivector) -> Result<Vec<DualForm>> {
    squared_degree_k_with(t, SquareOptions::default())
}

/// `dim (I²)_k^⊥ = C(N, k) - dim (I²)_k`, an upper bound for the tangent
/// space of `σ₂` at points of the strata `Σ_l`, `Θ_l`, `l >= 3`.
pub fn perp_dim(t: &Multivector) -> Result<usize> {
    Ok(binomial(t.dim(), t.grade()) - squared_degree_k(t)?.len())
}

pub fn perp_dim_with(t: &Multivector, options: SquareOptions) -> Result<usize> {
    Ok(binomial(t.dim(), t.grade()) - squared_degree_k_with(t, options)?.len())
}

/// Comparison of `(I²)_k` for generators of degree `<= 2` against all
/// annihilator slices of degree `<= k - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub base_dim: usize,
    pub extended_dim: usize,
    pub stable: bool,
}

pub fn stabilization_check(t: &Multivector) -> Result<StabilizationReport> {
    let base_dim = squared_degree_k(t)?.len();
    let extended = SquareOptions { max_generator_degree: t.grade().saturating_sub(1).max(1) };
    let extended_dim = squared_degree_k_with(t, extended)?.len();
    Ok(StabilizationReport { base_dim, extended_dim, stable: base_dim == extended_dim })
}

/// `dim` of the affine cone over `σ₂(Gr(k, N))`.
pub fn sigma2_cone_dim(k: usize, n: usize) -> usize {
    let full = binomial(n, k);
    let d = match k {
        0 => 1,
        1 => n,
        2 => (4 * n).saturating_sub(10).max(1),
        _ => 2 * k * (n - k) + 2,
    };
    d.min(full)
}

/// Span of the tangent spaces at a list of points of the Grassmannian.
pub fn tangent_span_dim(points: &[GrassPoint]) -> usize {
    let mut ech = Echelon::new();
    for p in points {
        for v in tangent_space_basis(p) {
            ech.insert(v.to_sparse());
        }
    }
    ech.rank()
}

/// Points whose tangent spaces are forced into `T_t σ₂`, and their span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    pub points: Vec<GrassPoint>,
    pub span_dim: usize,
    pub description: String,
}

fn decomposition_points(dec: &SecantDecomposition) -> Vec<GrassPoint> {
    vec![dec.p.clone(), dec.q.clone()]
}

/// Tangent spaces contained in `T_t σ₂`:
/// - Grass: the point `p` and all coordinate neighbours at distance one
///   (each lies on a line of the Grassmannian through `p`, and these lines
///   lie in `σ₂`);
/// - `Σ₂ = Θ₂` (and rank-4 2-forms): the decomposition points together with
///   the four tangency planes `H_t ⊕ ⟨u_a, u_c⟩`;
/// - `Σ_l`: the two decomposition points;
/// - `Θ_l`: the tangency point.
pub fn tangent_lower_bound(t: &Multivector, report: &ClassificationReport) -> Result<LowerBound> {
    let (points, description) = match (&report.label, &report.witness) {
        (OrbitLabel::Grass, Witness::Point { point, .. }) => {
            let n = point.ambient_dim();
            let rows = point.space().basis_vectors();
            let mut pts = vec![point.clone()];
            for i in 0..rows.len() {
                for c in point.space().complement_coords() {
                    let mut vs = rows.clone();
                    vs[i] = crate::grassmann::unit(n, c);
                    pts.push(GrassPoint::new(crate::grassmann::Subspace::span(n, &vs)?)?);
                }
            }
            (pts, "p and its coordinate neighbours at distance 1".to_string())
        }
        (OrbitLabel::SigmaTheta2 | OrbitLabel::K2Rank(4), Witness::Secant(dec)) => {
            let red = Reduction::new(t)?;
            let pairs = skew_reduction(red.reduced())?;
            let u = [&pairs[0].0, &pairs[0].1, &pairs[1].0, &pairs[1].1];
            let mut pts = decomposition_points(dec);
            for a in [0, 1] {
                for c in [2, 3] {
                    pts.push(red.lift_point(&[u[a].clone(), u[c].clone()])?);
                }
            }
            (pts, "two decomposition points and four tangency planes".to_string())
        }
        (OrbitLabel::Sigma(_), Witness::Secant(dec)) => (decomposition_points(dec), "decomposition points".to_string()),
        (OrbitLabel::Sigma(_), Witness::ConjugateSecant(_)) => {
            (Vec::new(), "conjugate decomposition points are not rational".to_string())
        }
        (OrbitLabel::Theta(_), Witness::Tangent(w)) => (vec![w.point.clone()], "tangency point".to_string()),
        (label, _) => {
            return Err(Error::WrongStratum { expected: "a point of the secant variety".into(), found: label.to_string() })
        }
    };
    let span_dim = tangent_span_dim(&points);
    Ok(LowerBound { points, span_dim, description })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Smooth,
    Singular,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Smooth => "Smooth",
            Verdict::Singular => "Singular",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

/// Sandwich `lower_dim <= dim T_t σ₂ <= upper_dim` and the resulting verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessCertificate {
    pub label: OrbitLabel,
    /// Span of the tangent spaces listed by [`tangent_lower_bound`].
    pub mandated_span_dim: usize,
    /// `max(mandated_span_dim, sigma2_cone_dim)`.
    pub lower_dim: usize,
    /// `dim (I²)_k^⊥` when that bound applies, otherwise `C(N, k)`.
    pub upper_dim: usize,
    pub perp_dim: usize,
    pub upper_bound_applies: bool,
    pub sigma2_cone_dim: usize,
    pub verdict: Verdict,
}

/// Decides smoothness of `σ₂` at `t`: singular when the mandated tangent
/// spaces already span more than `dim σ₂`, smooth when the apolarity upper
/// bound equals `dim σ₂`.
pub fn smoothness_certificate(t: &Multivector) -> Result<SmoothnessCertificate> {
    let report = classify(t)?;
    let (k, n) = (t.grade(), t.dim());
    let full = binomial(n, k);
    let cone = sigma2_cone_dim(k, n);
    let lower = tangent_lower_bound(t, &report)?;
    let perp = perp_dim(t)?;
    let upper_bound_applies = match report.label {
        OrbitLabel::Sigma(l) | OrbitLabel::Theta(l) => l >= 3,
        OrbitLabel::K2Rank(4) => true,
        _ => false,
    };
    let lower_dim = lower.span_dim.max(cone);
    let upper_dim = if upper_bound_applies { perp } else { full };
    if lower_dim > upper_dim {
        return Err(Error::Inconsistent(format!("lower bound {lower_dim} exceeds upper bound {upper_dim}")));
    }
    let verdict = if cone == full {
        Verdict::Smooth
    } else if lower.span_dim > cone {
        Verdict::Singular
    } else if upper_bound_applies && perp == cone {
        Verdict::Smooth
    } else {
        Verdict::Inconclusive
    };
    Ok(SmoothnessCertificate {
        label: report.label,
        mandated_span_dim: lower.span_dim,
        lower_dim,
        upper_dim,
        perp_dim: perp,
        upper_bound_applies,
        sigma2_cone_dim: cone,
        verdict,
    })
}

/// Explicit generators of `Ann_1(q₃) ⊕ Ann_2(q₃)` (0-based `x_i`):
/// 1. `x_{k+4}, ..., x_N`;
/// 2. `x1 x_{k+1}, x2 x_{k+2}, x3 x_{k+3}`;
/// 3. `x_{k+1} x_{k+2}, x_{k+1} x_{k+3}, x_{k+2} x_{k+3}`;
/// 4. `x2 x_{k+1} + x1 x_{k+2}, x3 x_{k+1} + x1 x_{k+3}, x2 x_{k+3} + x3 x_{k+2}`.
///
/// (1-based indices in this list.)
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q3Generators {
    pub linear: Vec<DualForm>,
    pub diagonal: Vec<DualForm>,
    pub cross: Vec<DualForm>,
    pub binomial: Vec<DualForm>,
}

impl Q3Generators {
    pub fn all(&self) -> Vec<DualForm> {
        [&self.linear, &self.diagonal, &self.cross, &self.binomial].into_iter().flatten().cloned().collect()
    }
}

pub fn q3_generators(k: usize, n: usize) -> Result<Q3Generators> {
    if k < 3 || n < k + 3 {
        return Err(Error::OutOfRange(format!("q3 generators need k >= 3 and N >= k+3, got k={k}, N={n}")));
    }
    let x = |idx: &[usize]| DualForm::basis(n, IndexSet::from_sorted(idx).expect("increasing"));
    let sum = |a: DualForm, b: DualForm| DualForm::new(a.inner() + b.inner());
    Ok(Q3Generators {
        linear: (k + 3..n).map(|i| x(&[i])).collect(),
        diagonal: (0..3).map(|j| x(&[j, k + j])).collect(),
        cross: vec![x(&[k, k + 1]), x(&[k, k + 2]), x(&[k + 1, k + 2])],
        binomial: vec![
            sum(x(&[1, k]), x(&[0, k + 1])),
            sum(x(&[2, k]), x(&[0, k + 2])),
            sum(x(&[1, k + 2]), x(&[2, k + 1])),
        ],
    })
}

/// Monomial part `B = {(1)², (1)(2), (1)(3), (2)², (2)(3)}` of the products
/// of the groups above.
pub fn q3_monomial_block(k: usize, n: usize) -> Result<Vec<DualForm>> {
    let g = q3_generators(k, n)?;
    let pairs: [(&Vec<DualForm>, &Vec<DualForm>, bool); 5] = [
        (&g.linear, &g.linear, true),
        (&g.linear, &g.diagonal, false),
        (&g.linear, &g.cross, false),
        (&g.diagonal, &g.diagonal, true),
        (&g.diagonal, &g.cross, false),
    ];
    let mut out = Vec::new();
    for (a, b, same) in pairs {
        for (i, x) in a.iter().enumerate() {
            let rest = if same { &b[i + 1..] } else { &b[..] };
            for y in rest {
                let p = x.wedge(y)?;
                if !p.is_zero() {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// `dim (B)_k^⊥`.
pub fn q3_block_perp_dim(k: usize, n: usize) -> Result<usize> {
    let block = q3_monomial_block(k, n)?;
    Ok(binomial(n, k) - ideal_component(&block, k, n).len())
}

/// Closed form `5 + 3(N-k-3)(k-1) + 6(k-2) + k(N-k)` of `dim (B)_k^⊥`, `k >= 4`.
pub fn q3_block_perp_formula(k: usize, n: usize) -> Option<usize> {
    (k >= 4 && n >= k + 3).then(|| 5 + 3 * (n - k - 3) * (k - 1) + 6 * (k - 2) + k * (n - k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::{omega, q3, representative, Branch};

    #[test]
    fn annihilator_of_omega() {
        let t = omega(3, 7).unwrap();
        assert_eq!(annihilator(&t, 1).unwrap().generators.len(), 4);
        // all x_ix_j except x12, x13, x23
        assert_eq!(annihilator(&t, 2).unwrap().generators.len(), 21 - 3);
        assert_eq!(perp_dim(&t).unwrap(), 13);
    }

    #[test]
    fn perp_at_q3() {
        assert_eq!(perp_dim(&q3(3, 7).unwrap()).unwrap(), 26);
        assert_eq!(perp_dim(&q3(4, 8).unwrap()).unwrap(), 34);
    }

    #[test]
    fn q3_groups_span_low_annihilator() {
        for (k, n) in [(3, 7), (4, 8), (4, 9)] {
            let t = q3(k, n).unwrap();
            let g = q3_generators(k, n).unwrap().all();
            for f in &g {
                assert!(f.contract(&t).unwrap().is_zero(), "{f}");
            }
            let ann1 = annihilator(&t, 1).unwrap().generators;
            let gens = q3_generators(k, n).unwrap();
            assert_eq!(ideal_component(&gens.linear, 1, n), ann1);
            let ann2 = annihilator(&t, 2).unwrap().generators;
            let deg2 = ideal_component(&g, 2, n);
            let mut ech = Echelon::new();
            for f in &deg2 {
                ech.insert(f.inner().to_sparse());
            }
            assert_eq!(deg2.len(), ann2.len());
            assert!(ann2.iter().all(|f| ech.contains(&f.inner().to_sparse())));
        }
    }

    #[test]
    fn smooth_at_theta3() {
        let t = representative(Branch::Tangent, 3, 3, 7).unwrap();
        let c = smoothness_certificate(&t).unwrap();
        assert_eq!(c.verdict, Verdict::Smooth);
        assert_eq!((c.lower_dim, c.upper_dim), (26, 26));
    }

    #[test]
    fn singular_at_s2() {
        let t = representative(Branch::Secant, 2, 3, 7).unwrap();
        let c = smoothness_certificate(&t).unwrap();
        assert_eq!(c.verdict, Verdict::Singular);
        assert_eq!(c.mandated_span_dim, 30);
    }
}
