//! Command-line interface definition and command implementations.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use skewrank_core::apolarity::{perp_dim, sigma2_cone_dim, smoothness_certificate, stabilization_check, Verdict};
use skewrank_core::grassmann::{distance_chain, hamming_distance, orbit_tangent_vectors};
use skewrank_core::identifiability::{
    decompose_secant, tangent_witness, tangential_locus, terracini_pair, unident_family,
};
use skewrank_core::index_set::binomial;
use skewrank_core::orbits::{
    classify, dimension_formula, expected_projective_dim, orbit_atlas, orbit_dim, representative, Branch,
    ClassificationReport, OrbitLabel, Witness,
};
use skewrank_core::{Error, IndexSet, Multivector, RationalMatrix, Result};

use crate::io::{Input, TensorFile};
use crate::report::{
    decomposition_text, decomposition_value, point_value, rational_value, subspace_text, subspace_value,
    tangent_value, tensor_value, Report,
};

#[derive(Parser, Debug)]
#[command(name = "skewrank", version, about = "Secant orbits of Grassmannians over Q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for sampled computations.
    #[arg(long, global = true, env = "SKEWRANK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Also run slow brute-force cross-checks.
    #[arg(long, global = true)]
    pub oracle: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify a tensor into its orbit stratum.
    Classify(TensorArgs),
    /// Recover a secant decomposition (several for distance-2 points).
    Decompose(DecomposeArgs),
    /// Tangency points of a tangent tensor.
    Tangential(TensorArgs),
    /// Distance between two points of the Grassmannian.
    Distance(PairArgs),
    /// Whether the tangent spaces at two points meet.
    Terracini(PairArgs),
    /// Dimension of the orbit of a tensor.
    OrbitDim(TensorArgs),
    /// Dimension of the degree-k part of the squared annihilator, perped.
    PerpDim(TensorArgs),
    /// Smoothness of the secant variety at a tensor.
    Smooth(TensorArgs),
    /// All strata for given k and N.
    Atlas(KnArgs),
    /// Standard representative as a tensor file.
    Representative(RepArgs),
}

/// A tensor from `--input`, or a standard representative.
#[derive(Args, Debug, Clone)]
pub struct TensorArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub branch: Option<Branch>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub tensor: TensorArgs,
    /// Number of decompositions requested for distance-2 points.
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    /// Two files, each a decomposable tensor or a subspace.
    #[arg(long, num_args = 2, required = true)]
    pub input: Vec<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct KnArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug, Clone)]
pub struct RepArgs {
    #[arg(long)]
    pub branch: Branch,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub n: usize,
}

/// Process exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::WrongStratum { .. } | Error::NotSecant(_) | Error::NotTangent(_) | Error::ConjugateFactors { .. } => 4,
        Error::Inconsistent(_) | Error::SplitFailed(_) => 5,
        _ => 3,
    }
}

/// What a command writes to stdout and stderr, and its exit status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Runs a command. Reports go to stdout (with status 5 if a check failed);
/// errors go to stderr.
pub fn run(cli: &Cli) -> Outcome {
    match execute(cli) {
        Ok(report) => {
            let code = if report.all_passed() { 0 } else { 5 };
            let out = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => {
                    if let (Command::Representative(_), Some(t)) = (&cli.command, report.result.get("tensor")) {
                        format!("{}\n", serde_json::to_string(t).expect("serialisable"))
                    } else {
                        report.to_text()
                    }
                }
            };
            Outcome { stdout: out, stderr: String::new(), code }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: exit_code(&e) },
    }
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let seed = cli.seed;
    match &cli.command {
        Command::Classify(a) => cmd_classify(load_tensor(a, "classify", seed)?, cli.oracle),
        Command::Decompose(a) => {
            let (mut r, t) = load_tensor(&a.tensor, "decompose", seed)?;
            r.arg("samples", a.samples);
            cmd_decompose(r, t, a.tensor.l, a.samples, seed)
        }
        Command::Tangential(a) => cmd_tangential(load_tensor(a, "tangential", seed)?, a.l),
        Command::Distance(a) => cmd_distance(load_pair(a, "distance", seed)?),
        Command::Terracini(a) => cmd_terracini(load_pair(a, "terracini", seed)?),
        Command::OrbitDim(a) => cmd_orbit_dim(load_tensor(a, "orbit-dim", seed)?, cli.oracle),
        Command::PerpDim(a) => cmd_perp_dim(load_tensor(a, "perp-dim", seed)?),
        Command::Smooth(a) => cmd_smooth(load_tensor(a, "smooth", seed)?),
        Command::Atlas(a) => cmd_atlas(a, seed),
        Command::Representative(a) => cmd_representative(a, seed),
    }
}

fn load_tensor(a: &TensorArgs, command: &str, seed: u64) -> Result<(Report, Multivector)> {
    let mut r = Report::new(command, seed);
    let t = match (&a.input, a.branch, a.k, a.n) {
        (Some(path), _, _, _) => {
            r.arg("input", path.display());
            let input = Input::read(path)?;
            r.input_digests.push(input.digest());
            input.into_tensor()?
        }
        (None, Some(branch), Some(k), Some(n)) => {
            let l = a.l.ok_or_else(|| Error::Parse("--l is required with --branch".into()))?;
            r.arg("branch", branch);
            r.arg("l", l);
            r.arg("k", k);
            r.arg("n", n);
            let t = representative(branch, l, k, n)?;
            r.input_digests.push(Input::Tensor(t.clone()).digest());
            t
        }
        _ => return Err(Error::Parse("give --input FILE or --branch, --l, --k and --n".into())),
    };
    r.line(format!("tensor: {t}"));
    r.line(format!("k = {}, N = {}", t.grade(), t.dim()));
    Ok((r, t))
}

fn load_pair(a: &PairArgs, command: &str, seed: u64) -> Result<(Report, Input, Input)> {
    let mut r = Report::new(command, seed);
    let mut inputs = Vec::new();
    for path in &a.input {
        r.arg(&format!("input{}", inputs.len() + 1), path.display());
        let input = Input::read(path)?;
        r.input_digests.push(input.digest());
        inputs.push(input);
    }
    let q = inputs.pop().expect("two inputs");
    let p = inputs.pop().expect("two inputs");
    Ok((r, p, q))
}

fn witness_value(w: &Witness) -> Value {
    match w {
        Witness::Point { point, coeff } => json!({"kind": "point", "point": point_value(point), "coeff": rational_value(coeff)}),
        Witness::Secant(d) => json!({"kind": "secant", "decomposition": decomposition_value(d)}),
        Witness::ConjugateSecant(c) => json!({
            "kind": "conjugate-secant",
            "span": subspace_value(&c.span),
            "center": crate::report::matrix_value(&c.center),
            "trace_sum": rational_value(&c.trace_sum),
            "product": rational_value(&c.product),
            "discriminant": rational_value(&c.discriminant),
        }),
        Witness::Tangent(t) => json!({"kind": "tangent", "tangent": tangent_value(t)}),
        Witness::SkewRank(r) => json!({"kind": "skew-rank", "rank": r}),
        Witness::None => json!({"kind": "none"}),
    }
}

fn witness_text(w: &Witness) -> Vec<String> {
    match w {
        Witness::Point { point, coeff } => vec![format!(
            "witness: t = ({}) pl(p), p = {}",
            skewrank_core::rational::format(coeff),
            subspace_text(point.space())
        )],
        Witness::Secant(d) => {
            let mut v = vec!["witness: secant decomposition".to_string()];
            v.extend(decomposition_text(d));
            v
        }
        Witness::ConjugateSecant(c) => vec![format!(
            "witness: conjugate secant pair, Z^2 - ({})Z + ({}) = 0, discriminant {} (not a square)",
            skewrank_core::rational::format(&c.trace_sum),
            skewrank_core::rational::format(&c.product),
            skewrank_core::rational::format(&c.discriminant)
        )],
        Witness::Tangent(t) => vec![
            format!("witness: tangent at p = {}", subspace_text(t.point.space())),
            format!("  displacement rank {}", t.rank),
        ],
        Witness::SkewRank(r) => vec![format!("witness: reduced 2-form of rank {r} (> 4)")],
        Witness::None => vec!["witness: none (fails the secant and tangent tests)".to_string()],
    }
}

fn report_classification(r: &mut Report, c: &ClassificationReport) {
    r.result["classification"] = json!({
        "label": c.label.to_string(),
        "k": c.k,
        "n": c.n,
        "common_kernel": subspace_value(&c.common_kernel),
        "reduced_ambient": subspace_value(&c.reduced_ambient),
        "reduced_grade": c.reduced_grade,
        "k2_dim": c.k2_dim,
        "witness": witness_value(&c.witness),
        "checked": c.checked,
    });
    r.line(format!("label: {}", c.label));
    r.line(format!("dim H_t = {} (l = k - dim H_t = {})", c.common_kernel.dim(), c.reduced_grade));
    if let Some(k2) = c.k2_dim {
        r.line(format!("dim K2 = {k2} (l^2 = {})", c.reduced_grade * c.reduced_grade));
    }
    for l in witness_text(&c.witness) {
        r.line(l);
    }
}

/// Dense rank of a list of multivectors, by Gaussian elimination on the full
/// coefficient matrix.
fn dense_rank(vectors: &[Multivector]) -> usize {
    let mut keys: Vec<IndexSet> = vectors.iter().flat_map(|v| v.terms().keys().copied()).collect();
    keys.sort();
    keys.dedup();
    if keys.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<skewrank_core::Rational>> = vectors.iter().map(|v| keys.iter().map(|s| v.coeff(*s)).collect()).collect();
    RationalMatrix::from_rows(&rows).expect("rectangular").rank()
}

fn cmd_classify((mut r, t): (Report, Multivector), oracle: bool) -> Result<Report> {
    let c = classify(&t)?;
    report_classification(&mut r, &c);
    if c.label != OrbitLabel::OutsideSigma2 {
        r.check("re-synthesis", "witness reproduces t exactly", c.checked);
    }
    if oracle {
        let n = t.dim();
        let images: Vec<Multivector> = (0..n)
            .map(|i| Multivector::basis(n, IndexSet::singleton(i)).wedge(&t).expect("same ambient"))
            .collect();
        let rank = dense_rank(&images);
        r.check(
            "oracle: multiplication kernel",
            format!("N - rank(x -> x^t) = {} - {rank} = {} vs dim H_t = {}", n, n - rank, c.common_kernel.dim()),
            n - rank == c.common_kernel.dim(),
        );
    }
    Ok(r)
}

fn cmd_decompose(mut r: Report, t: Multivector, l: Option<usize>, samples: usize, seed: u64) -> Result<Report> {
    let c = classify(&t)?;
    r.line(format!("label: {}", c.label));
    if let Some(l) = l {
        if l != c.reduced_grade {
            return Err(Error::WrongStratum { expected: format!("distance {l}"), found: c.label.to_string() });
        }
    }
    match c.label {
        OrbitLabel::SigmaTheta2 | OrbitLabel::K2Rank(4) => {
            let family = unident_family(&t, samples.max(1), seed)?;
            r.line(format!("{} distinct decompositions (not identifiable)", family.len()));
            for (i, d) in family.iter().enumerate() {
                r.line(format!("decomposition {}:", i + 1));
                for l in decomposition_text(d) {
                    r.line(l);
                }
                r.check(
                    &format!("decomposition {}", i + 1),
                    "t = c_p pl(p) + c_q pl(q), d(p,q) = 2",
                    d.resynthesize() == t && d.distance() == 2,
                );
            }
            r.result["label"] = json!(c.label.to_string());
            r.result["decompositions"] = Value::Array(family.iter().map(decomposition_value).collect());
        }
        OrbitLabel::Sigma(l) => match &c.witness {
            Witness::ConjugateSecant(_) => {
                r.result["label"] = json!(c.label.to_string());
                r.result["classification"] = json!({"witness": witness_value(&c.witness)});
                for line in witness_text(&c.witness) {
                    r.line(line);
                }
                r.check("conjugate certificate", "rational eigen-relation holds", c.checked);
            }
            _ => {
                let d = decompose_secant(&t, l, &c.common_kernel)?;
                for line in decomposition_text(&d) {
                    r.line(line);
                }
                r.check("re-synthesis", "t = c_p pl(p) + c_q pl(q)", d.resynthesize() == t);
                r.check("distance", format!("d(p,q) = {} = l = {l}", d.distance()), d.distance() == l);
                r.result["label"] = json!(c.label.to_string());
                r.result["decompositions"] = json!([decomposition_value(&d)]);
            }
        },
        other => {
            return Err(Error::WrongStratum { expected: "a secant point".into(), found: other.to_string() });
        }
    }
    Ok(r)
}

fn cmd_tangential((mut r, t): (Report, Multivector), l: Option<usize>) -> Result<Report> {
    let c = classify(&t)?;
    r.line(format!("label: {}", c.label));
    let l_found = match c.label {
        OrbitLabel::SigmaTheta2 | OrbitLabel::K2Rank(4) => 2,
        OrbitLabel::Theta(l) => l,
        other => return Err(Error::WrongStratum { expected: "a tangent point".into(), found: other.to_string() }),
    };
    if let Some(l) = l {
        if l != l_found {
            return Err(Error::WrongStratum { expected: format!("Theta({l})"), found: c.label.to_string() });
        }
    }
    let locus = tangential_locus(&t, l_found)?;
    r.line(format!(
        "{} tangency point(s), complete = {}{}",
        locus.points.len(),
        locus.complete,
        locus.dimension_hint.map(|d| format!(", locus dimension {d}")).unwrap_or_default()
    ));
    for (i, p) in locus.points.iter().enumerate() {
        r.line(format!("  p{} = {}", i + 1, subspace_text(p.space())));
        let w = tangent_witness(&t, p)?;
        r.check(&format!("t in T_p{}", i + 1), "t in Λ^{k-1}H_p ∧ V", w.is_some());
    }
    r.result = json!({
        "label": c.label.to_string(),
        "points": locus.points.iter().map(point_value).collect::<Vec<_>>(),
        "complete": locus.complete,
        "dimension_hint": locus.dimension_hint,
    });
    Ok(r)
}

fn cmd_distance((mut r, p, q): (Report, Input, Input)) -> Result<Report> {
    let (p, q) = (p.into_point()?, q.into_point()?);
    let d = hamming_distance(&p, &q)?;
    let chain = distance_chain(&p, &q)?;
    r.line(format!("d(p,q) = k - dim(H_p ∩ H_q) = {} - {} = {d}", p.k(), p.k() - d));
    let steps_ok = chain.windows(2).all(|w| hamming_distance(&w[0], &w[1]).map(|x| x == 1).unwrap_or(false));
    r.check("chain", format!("{} steps of distance 1 from p to q", chain.len() - 1), steps_ok && chain.len() == d + 1);
    r.result = json!({
        "distance": d,
        "chain": chain.iter().map(|c| subspace_value(c.space())).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn cmd_terracini((mut r, p, q): (Report, Input, Input)) -> Result<Report> {
    let (p, q) = (p.into_point()?, q.into_point()?);
    let t = terracini_pair(&p, &q)?;
    let (k, n) = (p.k(), p.ambient_dim());
    r.line(format!(
        "dim span(T_p, T_q) = {} vs 2(k(N-k)+1) = {}; dim(T_p ∩ T_q) = {}",
        t.span_dim, t.expected_dim, t.intersection_dim
    ));
    r.line(format!("d(p,q) = {}, tangent spaces meet: {}", t.distance, t.in_terracini));
    r.check(
        "Terracini criterion",
        format!("tangent spaces meet iff d(p,q) <= 2 (d = {})", t.distance),
        t.in_terracini == (t.distance <= 2) || k < 3,
    );
    r.result = json!({
        "k": k,
        "n": n,
        "distance": t.distance,
        "span_dim": t.span_dim,
        "intersection_dim": t.intersection_dim,
        "expected_dim": t.expected_dim,
        "in_terracini": t.in_terracini,
    });
    Ok(r)
}

fn cmd_orbit_dim((mut r, t): (Report, Multivector), oracle: bool) -> Result<Report> {
    let d = orbit_dim(&t)?;
    let c = classify(&t)?;
    let (k, n) = (t.grade(), t.dim());
    r.line(format!("label: {}", c.label));
    r.line(format!("cone dim = rank{{E_ij t}} = {}, projective dim = {}", d.cone, d.projective));
    let expected = expected_projective_dim(c.label, k, n);
    if let Some(e) = expected {
        r.check(
            "closed form",
            format!("{} = {} at k={k}, N={n}; computed {}", dimension_formula(c.label), e, d.projective),
            e == d.projective,
        );
    }
    if oracle {
        let rank = dense_rank(&orbit_tangent_vectors(&t));
        r.check("oracle: dense rank", format!("{rank} vs {}", d.cone), rank == d.cone);
    }
    r.result = json!({
        "label": c.label.to_string(),
        "cone_dim": d.cone,
        "projective_dim": d.projective,
        "expected_projective_dim": expected,
    });
    Ok(r)
}

fn cmd_perp_dim((mut r, t): (Report, Multivector)) -> Result<Report> {
    let (k, n) = (t.grade(), t.dim());
    let perp = perp_dim(&t)?;
    let full = binomial(n, k);
    let cone = sigma2_cone_dim(k, n);
    let c = classify(&t)?;
    let stab = stabilization_check(&t)?;
    r.line(format!("label: {}", c.label));
    r.line(format!("dim (I^2)_k^perp = C(N,k) - dim (I^2)_k = {full} - {} = {perp}", full - perp));
    r.line(format!("I generated by Ann_1(t) and Ann_2(t); with all slices up to degree k-1: dim (I^2)_k = {}", stab.extended_dim));
    r.line(format!("dim of the cone over sigma_2 = {cone}"));
    if let OrbitLabel::Sigma(l) | OrbitLabel::Theta(l) = c.label {
        if l >= 3 {
            r.check("upper bound", format!("perp {perp} >= cone dim {cone}"), perp >= cone);
        }
    }
    r.result = json!({
        "label": c.label.to_string(),
        "perp_dim": perp,
        "squared_dim": full - perp,
        "ambient_dim": full,
        "sigma2_cone_dim": cone,
        "extended_squared_dim": stab.extended_dim,
        "stable": stab.stable,
    });
    Ok(r)
}

fn cmd_smooth((mut r, t): (Report, Multivector)) -> Result<Report> {
    let c = smoothness_certificate(&t)?;
    r.line(format!("label: {}", c.label));
    r.line(format!(
        "mandated tangent spaces span {}; cone over sigma_2 has dim {}",
        c.mandated_span_dim, c.sigma2_cone_dim
    ));
    r.line(format!(
        "{} <= dim T_t sigma_2 <= {}{}",
        c.lower_dim,
        c.upper_dim,
        if c.upper_bound_applies { " (apolarity bound)".to_string() } else { " (ambient)".to_string() }
    ));
    r.line(format!("dim (I^2)_k^perp = {}", c.perp_dim));
    r.line(format!("verdict: {}", c.verdict));
    r.check("sandwich", format!("{} <= {}", c.lower_dim, c.upper_dim), c.lower_dim <= c.upper_dim);
    if c.verdict == Verdict::Singular {
        r.check(
            "singular",
            format!("mandated span {} > dim sigma_2 cone {}", c.mandated_span_dim, c.sigma2_cone_dim),
            c.mandated_span_dim > c.sigma2_cone_dim,
        );
    }
    r.result = json!({
        "label": c.label.to_string(),
        "verdict": c.verdict.to_string(),
        "lower_dim": c.lower_dim,
        "upper_dim": c.upper_dim,
        "mandated_span_dim": c.mandated_span_dim,
        "perp_dim": c.perp_dim,
        "upper_bound_applies": c.upper_bound_applies,
        "sigma2_cone_dim": c.sigma2_cone_dim,
    });
    Ok(r)
}

fn cmd_atlas(a: &KnArgs, seed: u64) -> Result<Report> {
    let mut r = Report::new("atlas", seed);
    r.arg("k", a.k);
    r.arg("n", a.n);
    let atlas = orbit_atlas(a.k, a.n)?;
    let mut entries = Vec::new();
    for e in &atlas.entries {
        let formula = dimension_formula(e.label);
        r.line(format!(
            "{:<14} projective dim {:>3}   [{formula} = {}]",
            e.label.to_string(),
            e.dim.projective,
            e.expected_projective_dim.map(|d| d.to_string()).unwrap_or_else(|| "?".into())
        ));
        if let Some(x) = e.expected_projective_dim {
            r.check(&format!("dim {}", e.label), format!("{formula}: {x} = {}", e.dim.projective), x == e.dim.projective);
        }
        entries.push(json!({
            "label": e.label.to_string(),
            "branch": e.branch.to_string(),
            "l": e.l,
            "representative": tensor_value(&e.representative),
            "cone_dim": e.dim.cone,
            "projective_dim": e.dim.projective,
            "expected_projective_dim": e.expected_projective_dim,
        }));
    }
    for (from, to) in &atlas.arrows {
        r.line(format!("closure: {from} < {to}"));
    }
    r.result = json!({
        "k": atlas.k,
        "n": atlas.n,
        "strata": entries,
        "closure": atlas.arrows.iter().map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn cmd_representative(a: &RepArgs, seed: u64) -> Result<Report> {
    let mut r = Report::new("representative", seed);
    r.arg("branch", a.branch);
    r.arg("l", a.l);
    r.arg("k", a.k);
    r.arg("n", a.n);
    let t = representative(a.branch, a.l, a.k, a.n)?;
    r.line(format!("tensor: {t}"));
    r.result = json!({"tensor": serde_json::to_value(TensorFile::from_multivector(&t)).expect("serialisable")});
    Ok(r)
}
