mod common;

use common::oracle;
use num_traits::Zero;
use rand::Rng;
use skewrank_core::apolarity::{perp_dim, stabilization_check};
use skewrank_core::grassmann::{hamming_distance, multiplication_kernel, tangent_space_basis, tangent_span_pair};
use skewrank_core::identifiability::k2_kernel;
use skewrank_core::orbits::{omega, orbit_dim, q3, representative, Branch};
use skewrank_core::sampling::{random_pair_at_distance, random_unimodular, rng, SeededRng};
use skewrank_core::{IndexSet, Multivector, Rational, RationalMatrix};

fn random_tensor(n: usize, k: usize, terms: usize, r: &mut SeededRng) -> Multivector {
    let sets = oracle::subsets(n, k);
    let mut t = Multivector::zero(n, k);
    for _ in 0..terms {
        let s = &sets[r.gen_range(0..sets.len())];
        t.add_term(IndexSet::from_sorted(s).unwrap(), oracle::int(r.gen_range(-3..=3)));
    }
    t
}

fn random_vectors(n: usize, k: usize, r: &mut SeededRng) -> Vec<Vec<Rational>> {
    (0..k).map(|_| (0..n).map(|_| oracle::int(r.gen_range(-2..=2))).collect()).collect()
}

fn matrix_rows(g: &RationalMatrix) -> Vec<Vec<Rational>> {
    g.to_rows()
}

fn all_representatives(k: usize, n: usize) -> Vec<Multivector> {
    let mut out = vec![omega(k, n).unwrap(), representative(Branch::Secant, 2, k, n).unwrap()];
    for l in 3..=k {
        out.push(representative(Branch::Tangent, l, k, n).unwrap());
        out.push(representative(Branch::Secant, l, k, n).unwrap());
    }
    out
}

#[test]
fn wedge_matches_word_sorting() {
    let mut r = rng(1);
    for _ in 0..200 {
        let n = r.gen_range(2..=7);
        let a_deg = r.gen_range(0..=n);
        let b_deg = r.gen_range(0..=n - a_deg);
        let a = random_tensor(n, a_deg, 4, &mut r);
        let b = random_tensor(n, b_deg, 4, &mut r);
        let expected = oracle::wedge(&oracle::from_mv(&a), &oracle::from_mv(&b));
        assert_eq!(oracle::from_mv(&a.wedge(&b).unwrap()), expected);
    }
}

#[test]
fn wedge_of_vectors_matches_minors() {
    let mut r = rng(2);
    for _ in 0..100 {
        let n = r.gen_range(2..=7);
        let k = r.gen_range(1..=n.min(4));
        let vs = random_vectors(n, k, &mut r);
        assert_eq!(oracle::from_mv(&Multivector::wedge_vectors(n, &vs).unwrap()), oracle::pluecker(n, &vs));
    }
}

#[test]
fn contraction_matches_reference() {
    let mut r = rng(3);
    for _ in 0..200 {
        let n = r.gen_range(2..=7);
        let k = r.gen_range(1..=n);
        let d = r.gen_range(0..=k);
        let t = random_tensor(n, k, 5, &mut r);
        let x = random_tensor(n, d, 3, &mut r);
        let got = skewrank_core::DualForm::new(x.clone()).contract(&t).unwrap();
        assert_eq!(oracle::from_mv(&got), oracle::contract(&oracle::from_mv(&x), &oracle::from_mv(&t)));
    }
}

#[test]
fn matrix_action_matches_minors() {
    let mut r = rng(4);
    for _ in 0..60 {
        let n = r.gen_range(3..=6);
        let k = r.gen_range(1..=3.min(n));
        let t = random_tensor(n, k, 4, &mut r);
        let g = random_unimodular(n, 2 * n, &mut r);
        let expected = oracle::apply_matrix(n, &matrix_rows(&g), &oracle::from_mv(&t));
        assert_eq!(oracle::from_mv(&t.apply_matrix(&g).unwrap()), expected);
    }
}

#[test]
fn orbit_dimension_matches_brute_force() {
    let mut r = rng(5);
    for (k, n) in [(3, 6), (3, 7), (3, 8), (4, 8)] {
        for t in all_representatives(k, n) {
            let g = random_unimodular(n, 2 * n, &mut r);
            let moved = t.apply_matrix(&g).unwrap();
            let expected = oracle::orbit_cone_dim(n, &oracle::from_mv(&moved));
            assert_eq!(orbit_dim(&moved).unwrap().cone, expected, "k={k} N={n} t={t}");
            assert_eq!(orbit_dim(&t).unwrap().cone, expected);
        }
    }
}

#[test]
fn multiplication_kernel_matches_brute_force() {
    let mut r = rng(6);
    for _ in 0..80 {
        let n = r.gen_range(3..=7);
        let k = r.gen_range(1..=3.min(n));
        let t = random_tensor(n, k, 3, &mut r);
        if t.is_zero() {
            continue;
        }
        assert_eq!(multiplication_kernel(&t).dim(), oracle::multiplication_kernel_dim(n, &oracle::from_mv(&t)));
    }
}

#[test]
fn tangent_spaces_match_brute_force() {
    let mut r = rng(7);
    for _ in 0..30 {
        let (k, n) = [(2, 5), (3, 6), (3, 7)][r.gen_range(0..3)];
        let d = r.gen_range(0..=k.min(n - k));
        let (p, q) = random_pair_at_distance(k, n, d, 2 * n, &mut r).unwrap();
        let ours: Vec<_> = tangent_space_basis(&p).iter().map(oracle::from_mv).collect();
        let theirs = oracle::tangent_space(n, &p.space().basis_vectors());
        let mut both = ours.clone();
        both.extend(theirs.iter().cloned());
        let dim = oracle::tensor_rank(&ours);
        assert_eq!(dim, k * (n - k) + 1);
        assert_eq!(oracle::tensor_rank(&theirs), dim);
        assert_eq!(oracle::tensor_rank(&both), dim);

        let tq = oracle::tangent_space(n, &q.space().basis_vectors());
        let mut pair = theirs.clone();
        pair.extend(tq.iter().cloned());
        let span = oracle::tensor_rank(&pair);
        assert_eq!(tangent_span_pair(&p, &q).unwrap(), (span, 2 * dim - span));

        let inter = oracle::intersection_dim(&p.space().basis_vectors(), &q.space().basis_vectors());
        assert_eq!(hamming_distance(&p, &q).unwrap(), k - inter);
        assert_eq!(k - inter, d);
    }
}

#[test]
fn squared_ideal_perp_matches_brute_force() {
    for (k, n) in [(3, 6), (3, 7)] {
        for t in all_representatives(k, n) {
            let expected = oracle::squared_perp_dim(n, k, &oracle::from_mv(&t));
            assert_eq!(perp_dim(&t).unwrap(), expected, "k={k} N={n} t={t}");
        }
        let q = q3(k, n).unwrap();
        assert_eq!(perp_dim(&q).unwrap(), oracle::squared_perp_dim(n, k, &oracle::from_mv(&q)));
    }
}

#[test]
fn annihilators_match_brute_force() {
    let mut r = rng(8);
    for _ in 0..40 {
        let n = r.gen_range(3..=7);
        let k = r.gen_range(1..=3.min(n));
        let t = random_tensor(n, k, 3, &mut r);
        if t.is_zero() {
            continue;
        }
        for d in 1..=2.min(k) {
            let ours = skewrank_core::apolarity::annihilator(&t, d).unwrap().generators;
            let theirs = oracle::annihilator(n, d, &oracle::from_mv(&t));
            assert_eq!(ours.len(), theirs.len());
            let ours: Vec<_> = ours.iter().map(|x| oracle::from_mv(x.inner())).collect();
            let mut both = ours.clone();
            both.extend(theirs.iter().cloned());
            assert_eq!(oracle::tensor_rank(&both), theirs.len());
        }
    }
}

/// `dim K₂ = l²` at both `θ_l` and `s_l`.
#[test]
fn k2_dimension_table() {
    for l in 3..=5 {
        for n in [2 * l, 2 * l + 1] {
            for branch in [Branch::Tangent, Branch::Secant] {
                let t = representative(branch, l, l, n).unwrap();
                assert_eq!(k2_kernel(&t).len(), l * l, "{branch} l={l} N={n}");
            }
        }
    }
}

/// Squaring the whole annihilator ideal (all slices up to degree k-1) is not
/// stable against the degree <= 2 choice once k >= 4, and it undershoots.
#[test]
fn full_square_differs_for_k_at_least_4() {
    let at = |k, n| stabilization_check(&q3(k, n).unwrap()).unwrap();
    assert!(at(3, 7).stable);
    for (k, n, perp_full) in [(4, 8, 33), (4, 9, 40), (5, 10, 48)] {
        let s = at(k, n);
        assert!(!s.stable);
        let full = oracle::subsets(n, k).len();
        assert_eq!(full - s.extended_dim, perp_full);
        assert_eq!(full - s.base_dim, 2 * k * (n - k) + 2);
    }
}

#[test]
fn oracle_self_checks() {
    assert_eq!(oracle::permutations(4).len(), 24);
    assert_eq!(oracle::permutations(3).iter().map(|(_, s)| s).sum::<i32>(), 0);
    let id: Vec<Vec<Rational>> = (0..4).map(|i| oracle::unit(4, i)).collect();
    assert_eq!(oracle::det(&id), oracle::int(1));
    assert!(oracle::det(&[vec![oracle::int(1), oracle::int(2)], vec![oracle::int(2), oracle::int(4)]]).is_zero());
    assert_eq!(oracle::sort_word(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
    assert_eq!(oracle::sort_word(&[1, 0]), Some((vec![0, 1], -1)));
    assert_eq!(oracle::sort_word(&[1, 1]), None);
}
