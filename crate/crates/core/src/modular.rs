//! Kernels over Q by elimination modulo word-sized primes.
//!
//! The kernel is computed modulo several primes, lifted by Chinese
//! remaindering and rational reconstruction, and every lifted vector is
//! checked exactly. Since the kernel modulo `p` is never smaller than the
//! kernel over Q, a set of verified vectors with one vector per free column
//! modulo `p` is a basis of the rational kernel.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::{sub_scaled, SparseVec};
use crate::rational::Rational;

const MAX_PRIMES: usize = 48;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// The `MAX_PRIMES` largest primes below `2^31`.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| (1u64 << 20..1u64 << 31).rev().filter(|&n| is_prime(n)).take(MAX_PRIMES).collect())
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = (x.magnitude() % p).to_u64().expect("residue fits");
    if x.is_negative() && r != 0 {
        p - r
    } else {
        r
    }
}

/// Rows scaled to integer entries (scaling a row does not change the kernel).
fn integer_rows(rows: &[Vec<(usize, Rational)>]) -> Vec<Vec<(usize, BigInt)>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
            row.iter().map(|(j, x)| (*j, x.numer() * (&l / x.denom()))).collect()
        })
        .collect()
}

/// Kernel modulo `p`: pivot columns and one vector per free column (entry 1
/// at the free column).
fn kernel_mod_p(rows: &[Vec<(usize, BigInt)>], m: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|row| {
            let mut dense = vec![0u64; m];
            for (j, x) in row {
                dense[*j] = reduce(x, p);
            }
            dense
        })
        .filter(|row| row.iter().any(|&x| x != 0))
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m {
        let Some(pr) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u64; m];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - a[i][f]) % p;
            }
            v
        })
        .collect();
    (pivots, kernel)
}

/// `a/b ≡ x (mod m)` with `|a|, |b| <= sqrt(m/2)`.
fn reconstruct(x: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let s2 = &s0 - &q * &s1;
        r0 = std::mem::replace(&mut r1, r2);
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > bound || !r1.gcd(&s1).is_one() {
        return None;
    }
    Some(Rational::new(r1, s1))
}

/// Kernel of `j ↦ images[j]`, as candidate vectors verified exactly.
/// `None` if no verified lift was found within the prime budget.
pub fn kernel<K: Ord + Copy>(images: &[SparseVec<K>]) -> Option<Vec<SparseVec<usize>>> {
    let m = images.len();
    let mut by_key: BTreeMap<K, Vec<(usize, Rational)>> = BTreeMap::new();
    for (j, v) in images.iter().enumerate() {
        for (k, x) in v {
            by_key.entry(*k).or_default().push((j, x.clone()));
        }
    }
    let rows = integer_rows(&by_key.into_values().collect::<Vec<_>>());

    let mut state: Option<(Vec<usize>, Vec<BigInt>, BigInt)> = None;
    for &p in primes() {
        let (pivots, ker) = kernel_mod_p(&rows, m, p);
        let pb = BigInt::from(p);
        state = match state.take() {
            // more pivots means the previous primes were unlucky
            Some((old, res, modulus)) if old.len() == pivots.len() && old == pivots => {
                let minv = BigInt::from(inv_mod(reduce(&modulus, p), p));
                let res = res
                    .iter()
                    .zip(ker.iter().flatten())
                    .map(|(x, &y)| {
                        let delta = ((BigInt::from(y) - x) * &minv).mod_floor(&pb);
                        x + &modulus * delta
                    })
                    .collect();
                Some((old, res, modulus * pb))
            }
            Some(prev) if prev.0.len() > pivots.len() => Some(prev),
            _ => Some((pivots, ker.into_iter().flatten().map(BigInt::from).collect(), pb)),
        };
        let (pivots, res, modulus) = state.as_ref().expect("set above");
        let lifted: Option<Vec<Rational>> = res.iter().map(|x| reconstruct(x, modulus)).collect();
        let Some(lifted) = lifted else { continue };
        let nfree = m - pivots.len();
        let candidates: Vec<SparseVec<usize>> = (0..nfree)
            .map(|i| lifted[i * m..(i + 1) * m].iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        if candidates.iter().all(|c| in_kernel(images, c)) {
            return Some(candidates);
        }
    }
    None
}

fn in_kernel<K: Ord + Copy>(images: &[SparseVec<K>], c: &[(usize, Rational)]) -> bool {
    let mut acc: SparseVec<K> = Vec::new();
    for (j, x) in c {
        acc = sub_scaled(&acc, &-x.clone(), &images[*j]);
    }
    acc.is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{to_sparse, Echelon};
    use crate::rational::int;

    fn rref(vs: Vec<SparseVec<usize>>) -> Vec<SparseVec<usize>> {
        let mut e = Echelon::new();
        for v in vs {
            e.insert(v);
        }
        e.into_rref().into_rows()
    }

    #[test]
    fn reconstructs_small_fractions() {
        let m = BigInt::from(2147483647u64) * BigInt::from(2147483629u64);
        let x = Rational::new(BigInt::from(-22), BigInt::from(7));
        let big = (x.numer() * x.denom().modinv(&m).unwrap()).mod_floor(&m);
        assert_eq!(reconstruct(&big, &m), Some(x));
    }

    #[test]
    fn kernel_agrees_with_exact_elimination() {
        // columns: (1, 2, 3), (2, 4, 6), (1/3, 0, 1), (0, 1, 0)
        let images: Vec<SparseVec<usize>> = [
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![Rational::new(1.into(), 3.into()), int(0), int(1)],
            vec![int(0), int(1), int(0)],
        ]
        .iter()
        .map(|v| to_sparse(v))
        .collect();
        let got = rref(kernel(&images).unwrap());
        assert_eq!(got, crate::linalg::span_rank(&images).1);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn full_rank_has_empty_kernel() {
        let images: Vec<SparseVec<usize>> = (0..4).map(|i| vec![(i, int(i as i64 + 2))]).collect();
        assert_eq!(kernel(&images), Some(vec![]));
    }

    #[test]
    fn wide_dense_kernel_matches_elimination() {
        use crate::linalg::RationalMatrix;
        // 3 x 45 matrix with rank 3
        let rows: Vec<Vec<Rational>> = (0..3i64)
            .map(|i| (0..45i64).map(|j| Rational::new(((i + 1) * (j % 7) - j / 5).into(), (1 + (i + j) % 4).into())).collect())
            .collect();
        let m = RationalMatrix::from_rows(&rows).unwrap();
        let kernel = m.kernel();
        assert_eq!(kernel.len(), 45 - m.rank());
        for v in &kernel {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
        let columns: Vec<SparseVec<usize>> = (0..45).map(|c| to_sparse(&m.column(c))).collect();
        let exact = crate::linalg::span_rank(&columns).1;
        assert_eq!(rref(kernel.iter().map(|v| to_sparse(v)).collect()), exact);
    }
}
