//! Orbit representatives, classification into secant strata, orbit
//! dimensions and the stratification of the secant variety.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grassmann::{orbit_tangent_vectors, unit, GrassPoint, Subspace};
use crate::identifiability::{
    k2_kernel, secant_certificate, skew_reduction, tangent_certificate, ConjugateCertificate, Reduction,
    SecantCertificate, SecantDecomposition, TangentWitness,
};
use crate::index_set::IndexSet;
use crate::linalg;
use crate::multivector::Multivector;
use crate::rational::Rational;

/// Stratum of a tensor. For `k >= 3` the secant variety of the Grassmannian
/// splits into `Grass`, `Σ₂ = Θ₂`, and for `3 <= l <= k` the tangent strata
/// `Θ_l` and secant strata `Σ_l`. For `k = 2` the relevant invariant is the
/// rank of the skew form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitLabel {
    Zero,
    Grass,
    SigmaTheta2,
    Theta(usize),
    Sigma(usize),
    K2Rank(usize),
    OutsideSigma2,
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Zero => write!(f, "Zero"),
            OrbitLabel::Grass => write!(f, "Grass"),
            OrbitLabel::SigmaTheta2 => write!(f, "Sigma2=Theta2"),
            OrbitLabel::Theta(l) => write!(f, "Theta({l})"),
            OrbitLabel::Sigma(l) => write!(f, "Sigma({l})"),
            OrbitLabel::K2Rank(r) => write!(f, "K2Rank({r})"),
            OrbitLabel::OutsideSigma2 => write!(f, "OutsideSigma2"),
        }
    }
}

impl FromStr for OrbitLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown orbit label `{s}`"));
        let arg = |name: &str| -> Option<usize> { s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?.parse().ok() };
        match s {
            "Zero" => Ok(OrbitLabel::Zero),
            "Grass" => Ok(OrbitLabel::Grass),
            "Sigma2=Theta2" | "SigmaTheta2" => Ok(OrbitLabel::SigmaTheta2),
            "OutsideSigma2" => Ok(OrbitLabel::OutsideSigma2),
            _ => {
                if let Some(l) = arg("Theta") {
                    Ok(OrbitLabel::Theta(l))
                } else if let Some(l) = arg("Sigma") {
                    Ok(OrbitLabel::Sigma(l))
                } else if let Some(r) = arg("K2Rank") {
                    Ok(OrbitLabel::K2Rank(r))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// Secant (`s_l = ω + 𝕖_l`) or tangent (`θ_l`) family of representatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Secant,
    Tangent,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Branch::Secant => "secant",
            Branch::Tangent => "tangent",
        })
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "secant" | "sigma" => Ok(Branch::Secant),
            "tangent" | "theta" => Ok(Branch::Tangent),
            _ => Err(Error::Parse(format!("unknown branch `{s}` (expected secant or tangent)"))),
        }
    }
}

fn check_kn(k: usize, n: usize) -> Result<()> {
    if k == 0 || 2 * k > n || n > crate::index_set::MAX_DIM {
        return Err(Error::OutOfRange(format!("need 1 <= k <= N/2 and N <= 64, got k={k}, N={n}")));
    }
    Ok(())
}

/// `ω = e_1 ∧ ... ∧ e_k`.
pub fn omega(k: usize, n: usize) -> Result<Multivector> {
    check_kn(k, n)?;
    Ok(Multivector::basis(n, IndexSet::initial(k)))
}

/// `𝕖_l = e_1 ∧ ... ∧ e_{k-l} ∧ e_{k+1} ∧ ... ∧ e_{k+l}`, at distance `l`
/// from `ω`.
pub fn shifted_plane(l: usize, k: usize, n: usize) -> Result<Multivector> {
    check_kn(k, n)?;
    if l > k {
        return Err(Error::OutOfRange(format!("l={l} exceeds k={k}")));
    }
    let idx: Vec<usize> = (0..k - l).chain(k..k + l).collect();
    Ok(Multivector::monomial(n, &idx))
}

/// `s_l = ω + 𝕖_l` (secant) or
/// `θ_l = Σ_{j=1}^{l} e_1 ∧ ... ∧ e_{j-1} ∧ e_{k+j} ∧ e_{j+1} ∧ ... ∧ e_k`
/// (tangent, `e_{k+j}` in slot `j`). `l = 0` gives `ω`.
pub fn representative(branch: Branch, l: usize, k: usize, n: usize) -> Result<Multivector> {
    check_kn(k, n)?;
    if l > k {
        return Err(Error::OutOfRange(format!("l={l} exceeds k={k}")));
    }
    let w = omega(k, n)?;
    if l == 0 {
        return Ok(w);
    }
    match branch {
        Branch::Secant => Ok(&w + &shifted_plane(l, k, n)?),
        Branch::Tangent => {
            let mut t = Multivector::zero(n, k);
            for j in 0..l {
                let vs: Vec<Vec<Rational>> = (0..k).map(|s| unit(n, if s == j { k + j } else { s })).collect();
                t = &t + &Multivector::wedge_vectors(n, &vs)?;
            }
            Ok(t)
        }
    }
}

/// `q₃ = e_2..e_k e_{k+1} - e_1 e_3..e_k e_{k+2} + e_1 e_2 e_4..e_k e_{k+3}`
/// (each monomial in increasing order), which equals `(-1)^{k-1} θ₃`.
pub fn q3(k: usize, n: usize) -> Result<Multivector> {
    check_kn(k, n)?;
    if k < 3 {
        return Err(Error::OutOfRange(format!("q3 needs k >= 3, got {k}")));
    }
    let mut t = Multivector::zero(n, k);
    for (j, sign) in [(0usize, 1i64), (1, -1), (2, 1)] {
        let idx: Vec<usize> = (0..k).filter(|&i| i != j).chain([k + j]).collect();
        t.add_term(IndexSet::from_sorted(&idx)?, crate::rational::int(sign));
    }
    Ok(t)
}

/// Standard representative of a stratum.
pub fn label_representative(label: OrbitLabel, k: usize, n: usize) -> Result<Multivector> {
    match label {
        OrbitLabel::Grass => omega(k, n),
        OrbitLabel::SigmaTheta2 | OrbitLabel::K2Rank(4) => representative(Branch::Secant, 2, k, n),
        OrbitLabel::Sigma(l) if l >= 3 => representative(Branch::Secant, l, k, n),
        OrbitLabel::Theta(l) if l >= 3 => representative(Branch::Tangent, l, k, n),
        other => Err(Error::OutOfRange(format!("no standard representative for {other}"))),
    }
}

/// Evidence supporting a classification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// `t = coeff · pl(point)`.
    Point { point: GrassPoint, coeff: Rational },
    Secant(SecantDecomposition),
    ConjugateSecant(ConjugateCertificate),
    Tangent(TangentWitness),
    /// Rank of the reduced 2-form when it exceeds 4.
    SkewRank(usize),
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub label: OrbitLabel,
    pub k: usize,
    pub n: usize,
    /// `H_t = ker(x ↦ x ∧ t)`.
    pub common_kernel: Subspace,
    /// Coordinate complement `W` of `H_t` carrying the reduced tensor.
    pub reduced_ambient: Subspace,
    /// `l = k - dim H_t`.
    pub reduced_grade: usize,
    /// `dim ker(y ↦ y ∧ t')` on `Λ²W`, computed when `l >= 3`.
    pub k2_dim: Option<usize>,
    pub witness: Witness,
    /// The witness was verified by exact re-synthesis (or, for conjugate
    /// secant points, by the rational eigen-relation).
    pub checked: bool,
}

/// Classifies a nonzero `t ∈ Λ^k(Q^N)`.
pub fn classify(t: &Multivector) -> Result<ClassificationReport> {
    if t.grade() == 0 {
        return Err(Error::GradeMismatch { expected: 1, found: 0 });
    }
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let (k, n) = (t.grade(), t.dim());
    let red = Reduction::new(t)?;
    let l = red.l();
    let mut report = ClassificationReport {
        label: OrbitLabel::OutsideSigma2,
        k,
        n,
        common_kernel: red.kernel().clone(),
        reduced_ambient: red.reduced_ambient(),
        reduced_grade: l,
        k2_dim: None,
        witness: Witness::None,
        checked: false,
    };
    match l {
        0 => {
            let point = GrassPoint::new(red.kernel().clone())?;
            let coeff = red.reduced().coeff(IndexSet::EMPTY);
            report.checked = point.pluecker().scale(&coeff) == *t;
            report.label = OrbitLabel::Grass;
            report.witness = Witness::Point { point, coeff };
        }
        1 => return Err(Error::Inconsistent("a nonzero reduced 1-form must be absorbed by the kernel".into())),
        2 => {
            let pairs = skew_reduction(red.reduced())?;
            if pairs.len() == 2 {
                let dec = crate::identifiability::decompose_secant(t, 2, red.kernel())?;
                report.checked = dec.resynthesize() == *t;
                report.label = if k == 2 { OrbitLabel::K2Rank(4) } else { OrbitLabel::SigmaTheta2 };
                report.witness = Witness::Secant(dec);
            } else {
                report.witness = Witness::SkewRank(2 * pairs.len());
            }
        }
        _ => {
            report.k2_dim = Some(k2_kernel(red.reduced()).len());
            match secant_certificate(t, &red) {
                Ok(SecantCertificate::Rational(dec)) => {
                    report.checked = dec.resynthesize() == *t;
                    report.label = OrbitLabel::Sigma(l);
                    report.witness = Witness::Secant(dec);
                }
                Ok(SecantCertificate::Conjugate(cert)) => {
                    report.checked = true;
                    report.label = OrbitLabel::Sigma(l);
                    report.witness = Witness::ConjugateSecant(cert);
                }
                Err(Error::NotSecant(_)) | Err(Error::SplitFailed(_)) => match tangent_certificate(t, &red) {
                    Ok(w) if w.rank == l => {
                        report.checked = w.resynthesize() == *t;
                        report.label = OrbitLabel::Theta(l);
                        report.witness = Witness::Tangent(w);
                    }
                    Ok(w) => {
                        return Err(Error::Inconsistent(format!("tangent witness of rank {} at l = {l}", w.rank)))
                    }
                    Err(Error::NotTangent(_)) => {}
                    Err(e) => return Err(e),
                },
                Err(e) => return Err(e),
            }
        }
    }
    Ok(report)
}

/// Orbit dimension: `cone` is the rank of `{E_ij · t}`, the tangent space of
/// the affine cone over the orbit; `projective = cone - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitDim {
    pub cone: usize,
    pub projective: usize,
}

pub fn orbit_dim(t: &Multivector) -> Result<OrbitDim> {
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let cone = linalg::rank_of(orbit_tangent_vectors(t).iter().map(Multivector::to_sparse));
    Ok(OrbitDim { cone, projective: cone - 1 })
}

/// Closed-form projective dimension of a stratum of `σ₂(Gr(k, N))`.
pub fn expected_projective_dim(label: OrbitLabel, k: usize, n: usize) -> Option<usize> {
    let g = k * (n - k);
    match (label, k) {
        (OrbitLabel::Grass, _) => Some(g),
        (OrbitLabel::K2Rank(4), 2) => (n >= 4).then(|| 4 * (n - 2) - 3),
        (OrbitLabel::SigmaTheta2, k) if k >= 3 => Some(g + 2 * (n - 2) - 3),
        (OrbitLabel::Sigma(l), k) if l >= 3 && l <= k => Some(g + l * (n - l) + 1),
        (OrbitLabel::Theta(l), k) if l >= 3 && l <= k => Some(g + l * (n - l)),
        _ => None,
    }
}

/// Human-readable form of the closed-form dimension.
pub fn dimension_formula(label: OrbitLabel) -> &'static str {
    match label {
        OrbitLabel::Grass => "k(N-k)",
        OrbitLabel::K2Rank(_) => "4(N-2)-3",
        OrbitLabel::SigmaTheta2 => "k(N-k)+2(N-2)-3",
        OrbitLabel::Sigma(_) => "k(N-k)+l(N-l)+1",
        OrbitLabel::Theta(_) => "k(N-k)+l(N-l)",
        OrbitLabel::Zero | OrbitLabel::OutsideSigma2 => "n/a",
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtlasEntry {
    pub label: OrbitLabel,
    pub branch: Branch,
    pub l: usize,
    pub representative: Multivector,
    pub dim: OrbitDim,
    pub expected_projective_dim: Option<usize>,
}

/// Strata of `σ₂(Gr(k, N))` with their orbit dimensions and the closure
/// (Hasse) arrows `from ⊂ closure(to)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas {
    pub k: usize,
    pub n: usize,
    pub entries: Vec<AtlasEntry>,
    pub arrows: Vec<(OrbitLabel, OrbitLabel)>,
}

impl Atlas {
    pub fn entry(&self, label: OrbitLabel) -> Option<&AtlasEntry> {
        self.entries.iter().find(|e| e.label == label)
    }
}

/// Classifies and measures every standard representative for `2 <= k <= N/2`.
/// Fails with `Inconsistent` if a representative is misclassified or the
/// dimensions do not increase along a closure arrow.
pub fn orbit_atlas(k: usize, n: usize) -> Result<Atlas> {
    check_kn(k, n)?;
    if k < 2 {
        return Err(Error::OutOfRange("the atlas needs k >= 2".into()));
    }
    let mut strata: Vec<(OrbitLabel, Branch, usize)> = vec![(OrbitLabel::Grass, Branch::Secant, 0)];
    let mut arrows = Vec::new();
    if k == 2 {
        strata.push((OrbitLabel::K2Rank(4), Branch::Secant, 2));
        arrows.push((OrbitLabel::Grass, OrbitLabel::K2Rank(4)));
    } else {
        strata.push((OrbitLabel::SigmaTheta2, Branch::Secant, 2));
        arrows.push((OrbitLabel::Grass, OrbitLabel::SigmaTheta2));
        arrows.push((OrbitLabel::SigmaTheta2, OrbitLabel::Theta(3)));
        for l in 3..=k {
            strata.push((OrbitLabel::Theta(l), Branch::Tangent, l));
            strata.push((OrbitLabel::Sigma(l), Branch::Secant, l));
            arrows.push((OrbitLabel::Theta(l), OrbitLabel::Sigma(l)));
            if l < k {
                arrows.push((OrbitLabel::Theta(l), OrbitLabel::Theta(l + 1)));
                arrows.push((OrbitLabel::Sigma(l), OrbitLabel::Sigma(l + 1)));
            }
        }
    }
    let mut entries = Vec::new();
    for (label, branch, l) in strata {
        let representative = representative(branch, l, k, n)?;
        let found = classify(&representative)?.label;
        if found != label {
            return Err(Error::Inconsistent(format!("representative of {label} classified as {found}")));
        }
        let dim = orbit_dim(&representative)?;
        entries.push(AtlasEntry {
            label,
            branch,
            l,
            representative,
            dim,
            expected_projective_dim: expected_projective_dim(label, k, n),
        });
    }
    let atlas = Atlas { k, n, entries, arrows };
    for (a, b) in &atlas.arrows {
        let (da, db) = (atlas.entry(*a).expect("listed").dim, atlas.entry(*b).expect("listed").dim);
        if da.projective >= db.projective {
            return Err(Error::Inconsistent(format!("closure arrow {a} -> {b} does not raise the dimension")));
        }
    }
    Ok(atlas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::one;

    #[test]
    fn representatives_classify() {
        let (k, n) = (3, 7);
        assert_eq!(classify(&omega(k, n).unwrap()).unwrap().label, OrbitLabel::Grass);
        assert_eq!(classify(&representative(Branch::Secant, 2, k, n).unwrap()).unwrap().label, OrbitLabel::SigmaTheta2);
        assert_eq!(classify(&representative(Branch::Tangent, 2, k, n).unwrap()).unwrap().label, OrbitLabel::SigmaTheta2);
        assert_eq!(classify(&representative(Branch::Secant, 3, k, n).unwrap()).unwrap().label, OrbitLabel::Sigma(3));
        assert_eq!(classify(&representative(Branch::Tangent, 3, k, n).unwrap()).unwrap().label, OrbitLabel::Theta(3));
    }

    #[test]
    fn outside_example() {
        // e1 ∧ (e2e3 + e4e5 + e6e7) has a reduced 2-form of rank 6
        let t = &(&Multivector::monomial(7, &[0, 1, 2]) + &Multivector::monomial(7, &[0, 3, 4]))
            + &Multivector::monomial(7, &[0, 5, 6]);
        let r = classify(&t).unwrap();
        assert_eq!(r.label, OrbitLabel::OutsideSigma2);
        assert_eq!(r.witness, Witness::SkewRank(6));
    }

    #[test]
    fn k_two_ranks() {
        let t = &Multivector::monomial(6, &[0, 1]) + &Multivector::monomial(6, &[2, 3]);
        assert_eq!(classify(&t).unwrap().label, OrbitLabel::K2Rank(4));
        let u = &t + &Multivector::monomial(6, &[4, 5]);
        assert_eq!(classify(&u).unwrap().label, OrbitLabel::OutsideSigma2);
        assert_eq!(classify(&Multivector::monomial(6, &[0, 5])).unwrap().label, OrbitLabel::Grass);
    }

    #[test]
    fn q3_is_signed_theta3() {
        for k in 3..=5 {
            let n = 2 * k + 1;
            let sign = if (k - 1) % 2 == 0 { one() } else { -one() };
            let theta = representative(Branch::Tangent, 3, k, n).unwrap();
            assert_eq!(q3(k, n).unwrap(), theta.scale(&sign));
        }
    }

    #[test]
    fn atlas_for_gr_3_7() {
        let atlas = orbit_atlas(3, 7).unwrap();
        let dims: Vec<usize> = atlas.entries.iter().map(|e| e.dim.projective).collect();
        assert_eq!(dims, vec![12, 19, 24, 25]);
        assert_eq!(atlas.entries.len(), 4);
    }

    #[test]
    fn labels_round_trip() {
        for l in [
            OrbitLabel::Grass,
            OrbitLabel::SigmaTheta2,
            OrbitLabel::Sigma(4),
            OrbitLabel::Theta(3),
            OrbitLabel::K2Rank(4),
            OrbitLabel::OutsideSigma2,
            OrbitLabel::Zero,
        ] {
            assert_eq!(l.to_string().parse::<OrbitLabel>().unwrap(), l);
        }
        assert!("Sigma(x)".parse::<OrbitLabel>().is_err());
    }
}
