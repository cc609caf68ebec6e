//! Seeded random group elements and point pairs.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grassmann::GrassPoint;
use crate::linalg::RationalMatrix;
use crate::rational::{int, Rational};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integer matrix of determinant ±1: a random coordinate permutation followed
/// by `steps` elementary transvections `row_i += c row_j`, `c ∈ {±1, ±2}`.
pub fn random_unimodular(n: usize, steps: usize, rng: &mut SeededRng) -> RationalMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut g = RationalMatrix::zeros(n, n);
    for (r, &c) in perm.iter().enumerate() {
        g[(r, c)] = int(1);
    }
    if n < 2 {
        return g;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = [-2, -1, 1, 2][rng.gen_range(0..4)];
        for col in 0..n {
            let v = &g[(j, col)] * int(c);
            if !v.is_zero() {
                g[(i, col)] += v;
            }
        }
    }
    g
}

/// Small nonzero rational `a/b` with `|a| <= 5`, `1 <= b <= 3`.
pub fn small_nonzero_rational(rng: &mut SeededRng) -> Rational {
    let mut a = rng.gen_range(-5i64..=4);
    if a >= 0 {
        a += 1;
    }
    Rational::new(a.into(), rng.gen_range(1i64..=3).into())
}

/// Coordinate pair `(⟨e_1..e_k⟩, ⟨e_1..e_{k-d}, e_{k+1}..e_{k+d}⟩)` moved by
/// a random unimodular matrix; the two points are at distance exactly `d`.
pub fn random_pair_at_distance(
    k: usize,
    n: usize,
    d: usize,
    steps: usize,
    rng: &mut SeededRng,
) -> Result<(GrassPoint, GrassPoint)> {
    if d > k || k + d > n {
        return Err(Error::OutOfRange(format!("no pair at distance {d} in Gr({k}, {n})")));
    }
    let g = random_unimodular(n, steps, rng);
    let p: Vec<usize> = (0..k).collect();
    let q: Vec<usize> = (0..k - d).chain(k..k + d).collect();
    Ok((GrassPoint::coordinate(n, &p)?.image(&g)?, GrassPoint::coordinate(n, &q)?.image(&g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::hamming_distance;

    #[test]
    fn unimodular_has_unit_determinant() {
        let mut r = rng(7);
        for n in 1..6 {
            let g = random_unimodular(n, 3 * n, &mut r);
            let d = g.determinant().unwrap();
            assert!(d == int(1) || d == int(-1));
        }
    }

    #[test]
    fn pairs_have_requested_distance() {
        let mut r = rng(1);
        for d in 0..=3 {
            let (p, q) = random_pair_at_distance(3, 7, d, 10, &mut r).unwrap();
            assert_eq!(hamming_distance(&p, &q).unwrap(), d);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let a = random_unimodular(5, 10, &mut rng(42));
        let b = random_unimodular(5, 10, &mut rng(42));
        assert_eq!(a, b);
    }
}
