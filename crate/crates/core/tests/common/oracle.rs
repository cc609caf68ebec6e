//! Naive dense exterior algebra used as an independent reference in tests.
//!
//! Tensors are maps from sorted 0-based index lists to coefficients. Signs are
//! computed by bubble-sorting index words, Plücker vectors by determinant
//! expansion over permutations, and ranks by plain Gaussian elimination.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use skewrank_core::{IndexSet, Multivector, Rational};

pub type Dense = BTreeMap<Vec<usize>, Rational>;

pub fn from_mv(t: &Multivector) -> Dense {
    t.terms().iter().map(|(s, c)| (s.to_vec(), c.clone())).collect()
}

pub fn to_mv(n: usize, k: usize, t: &Dense) -> Multivector {
    Multivector::from_terms(n, k, t.iter().map(|(s, c)| (IndexSet::from_sorted(s).unwrap(), c.clone()))).unwrap()
}

fn add_into(t: &mut Dense, key: Vec<usize>, c: Rational) {
    let e = t.entry(key.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&key);
    }
}

/// Sorts a word of indices; `None` if it has a repeat, else the sign of the sort.
pub fn sort_word(word: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut w = word.to_vec();
    let mut sign = 1;
    for i in 0..w.len() {
        for j in 0..w.len() - 1 - i {
            if w[j] == w[j + 1] {
                return None;
            }
            if w[j] > w[j + 1] {
                w.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if w.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((w, sign))
}

pub fn wedge(a: &Dense, b: &Dense) -> Dense {
    let mut out = Dense::new();
    for (i, x) in a {
        for (j, y) in b {
            let word: Vec<usize> = i.iter().chain(j).copied().collect();
            if let Some((key, s)) = sort_word(&word) {
                add_into(&mut out, key, Rational::from_integer(s.into()) * x * y);
            }
        }
    }
    out
}

/// `⟨α, t⟩` for `α` read as a dual tensor in the dual basis.
pub fn pairing(alpha: &Dense, t: &Dense) -> Rational {
    alpha.iter().filter_map(|(k, c)| t.get(k).map(|d| c * d)).fold(Rational::zero(), |a, b| a + b)
}

pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            // inserting the largest element at `pos` adds len - pos inversions
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

/// Leibniz expansion.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut total = Rational::zero();
    for (p, s) in permutations(n) {
        let mut term = Rational::from_integer(s.into());
        for (i, &j) in p.iter().enumerate() {
            term *= &m[i][j];
        }
        total += term;
    }
    total
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out.sort();
    out
}

/// `v_1 ∧ ... ∧ v_k` through its `k × k` minors.
pub fn pluecker(n: usize, vectors: &[Vec<Rational>]) -> Dense {
    let mut out = Dense::new();
    for rows in subsets(n, vectors.len()) {
        let m: Vec<Vec<Rational>> = rows.iter().map(|&r| vectors.iter().map(|v| v[r].clone()).collect()).collect();
        let d = det(&m);
        if !d.is_zero() {
            out.insert(rows, d);
        }
    }
    out
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= y * &f;
                }
            }
        }
        r += 1;
    }
    r
}

/// Rank of a family of tensors, as rows over the union of their supports.
pub fn tensor_rank(ts: &[Dense]) -> usize {
    let mut keys: Vec<&Vec<usize>> = ts.iter().flat_map(|t| t.keys()).collect();
    keys.sort();
    keys.dedup();
    let rows: Vec<Vec<Rational>> =
        ts.iter().map(|t| keys.iter().map(|k| t.get(*k).cloned().unwrap_or_else(Rational::zero)).collect()).collect();
    rank(&rows)
}

/// `E_ij · t`: the derivation sending `e_j` to `e_i`.
pub fn elementary_action(t: &Dense, i: usize, j: usize) -> Dense {
    let mut out = Dense::new();
    for (key, c) in t {
        if let Some(pos) = key.iter().position(|&x| x == j) {
            let mut word = key.clone();
            word[pos] = i;
            if let Some((k2, s)) = sort_word(&word) {
                add_into(&mut out, k2, Rational::from_integer(s.into()) * c);
            }
        }
    }
    out
}

/// Affine cone dimension of the `GL(N)` orbit.
pub fn orbit_cone_dim(n: usize, t: &Dense) -> usize {
    let images: Vec<Dense> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| elementary_action(t, i, j)).collect();
    tensor_rank(&images)
}

pub fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()
}

/// `dim {v : v ∧ t = 0}`.
pub fn multiplication_kernel_dim(n: usize, t: &Dense) -> usize {
    let images: Vec<Dense> = (0..n).map(|i| wedge(&BTreeMap::from([(vec![i], Rational::one())]), t)).collect();
    n - tensor_rank(&images)
}

/// Affine tangent space of the Grassmannian at `⟨v_1..v_k⟩`: all
/// `v_1 ∧ .. ∧ w ∧ .. ∧ v_k` with `w` a unit vector, plus the point itself.
pub fn tangent_space(n: usize, basis: &[Vec<Rational>]) -> Vec<Dense> {
    let mut out = vec![pluecker(n, basis)];
    for slot in 0..basis.len() {
        for w in 0..n {
            let mut vs = basis.to_vec();
            vs[slot] = unit(n, w);
            out.push(pluecker(n, &vs));
        }
    }
    out
}

/// `dim(⟨U⟩ ∩ ⟨W⟩)` for two families of vectors.
pub fn intersection_dim(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> usize {
    let both: Vec<Vec<Rational>> = a.iter().chain(b).cloned().collect();
    rank(a) + rank(b) - rank(&both)
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// Coefficient matrix for `apply`: image of `e_j` in column `j`.
pub fn apply_matrix(n: usize, g: &[Vec<Rational>], t: &Dense) -> Dense {
    let mut out = Dense::new();
    for (key, c) in t {
        let cols: Vec<Vec<Rational>> = key.iter().map(|&j| (0..n).map(|i| g[i][j].clone()).collect()).collect();
        for (k2, d) in pluecker(n, &cols) {
            add_into(&mut out, k2, d * c);
        }
    }
    out
}

/// `x_J ⌟ t` with `e_I = ± e_J ∧ e_{I∖J}`.
pub fn contract(x: &Dense, t: &Dense) -> Dense {
    let mut out = Dense::new();
    for (j, a) in x {
        for (i, b) in t {
            if !j.iter().all(|v| i.contains(v)) {
                continue;
            }
            let rest: Vec<usize> = i.iter().copied().filter(|v| !j.contains(v)).collect();
            let word: Vec<usize> = j.iter().chain(&rest).copied().collect();
            let (_, s) = sort_word(&word).expect("distinct");
            add_into(&mut out, rest, Rational::from_integer(s.into()) * a * b);
        }
    }
    out
}

/// Basis of `{x ∈ Λ^d V* : x ⌟ t = 0}` by brute-force kernel computation.
pub fn annihilator(n: usize, d: usize, t: &Dense) -> Vec<Dense> {
    let monos = subsets(n, d);
    let images: Vec<Dense> = monos.iter().map(|m| contract(&BTreeMap::from([(m.clone(), Rational::one())]), t)).collect();
    // kernel of the map monomial -> image, via elimination on [image | identity]
    let mut keys: Vec<&Vec<usize>> = images.iter().flat_map(|t| t.keys()).collect();
    keys.sort();
    keys.dedup();
    let width = keys.len();
    let mut rows: Vec<Vec<Rational>> = images
        .iter()
        .enumerate()
        .map(|(r, im)| {
            let mut row: Vec<Rational> = keys.iter().map(|k| im.get(*k).cloned().unwrap_or_else(Rational::zero)).collect();
            row.extend((0..monos.len()).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for j in 0..rows[i].len() {
                    let x = &rows[r][j] * &f;
                    rows[i][j] -= x;
                }
            }
        }
        r += 1;
    }
    rows[r..]
        .iter()
        .map(|row| {
            monos
                .iter()
                .enumerate()
                .filter(|(c, _)| !row[width + c].is_zero())
                .map(|(c, m)| (m.clone(), row[width + c].clone()))
                .collect()
        })
        .collect()
}

/// `dim ((I²)_k)^⊥` for `I` generated by `Ann_1(t)` and `Ann_2(t)`, built by
/// multiplying out every graded piece of `I` with every monomial.
pub fn squared_perp_dim(n: usize, k: usize, t: &Dense) -> usize {
    let ann1 = annihilator(n, 1, t);
    let ann2 = annihilator(n, 2, t);
    let monomial = |d: usize| -> Vec<Dense> { subsets(n, d).into_iter().map(|m| BTreeMap::from([(m, Rational::one())])).collect() };
    let piece = |d: usize| -> Vec<Dense> {
        let mut out = Vec::new();
        if d >= 1 {
            for a in &ann1 {
                for m in monomial(d - 1) {
                    out.push(wedge(a, &m));
                }
            }
        }
        if d >= 2 {
            for a in &ann2 {
                for m in monomial(d - 2) {
                    out.push(wedge(a, &m));
                }
            }
        }
        out
    };
    let mut products = Vec::new();
    for a in 1..k {
        for x in piece(a) {
            for y in piece(k - a) {
                let p = wedge(&x, &y);
                if !p.is_empty() {
                    products.push(p);
                }
            }
        }
    }
    subsets(n, k).len() - tensor_rank(&products)
}
