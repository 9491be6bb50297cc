//! Brute-force reference computations used to cross-check the fast paths.
//!
//! Everything here scans the full search space and is only practical for
//! the small instances exercised by the self-test.

use std::collections::HashSet;

use crate::ovic::{DistinguishedIndexer, SFunction};
use crate::ring::{increment_counter, FiniteRing, RMatrix};
use crate::wedderburn::AwEmbedding;

/// Flat product `a b` of row-major `n x n` tables, written into `out`.
fn mul_into(ring: &FiniteRing, a: &[usize], b: &[usize], n: usize, out: &mut [usize]) {
    for i in 0..n {
        for j in 0..n {
            let mut acc = ring.zero();
            for t in 0..n {
                acc = ring.add(acc, ring.mul(a[i * n + t], b[t * n + j]));
            }
            out[i * n + j] = acc;
        }
    }
}

fn is_identity_flat(ring: &FiniteRing, m: &[usize], n: usize) -> bool {
    m.iter().enumerate().all(|(p, &x)| x == if p / n == p % n { ring.one() } else { ring.zero() })
}

/// Two-sided inverse of a square matrix found by scanning every matrix.
pub fn brute_force_inverse(ring: &FiniteRing, m: &RMatrix) -> Option<RMatrix> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    let mut x = vec![ring.zero(); n * n];
    let mut buf = vec![0; n * n];
    loop {
        mul_into(ring, m.entries(), &x, n, &mut buf);
        if is_identity_flat(ring, &buf, n) {
            mul_into(ring, &x, m.entries(), n, &mut buf);
            return is_identity_flat(ring, &buf, n).then(|| RMatrix::new(n, n, x.clone()).expect("square"));
        }
        if !increment_counter(&mut x, ring.size()) {
            return None;
        }
    }
}

/// Number of invertible `n x n` matrices over `ring`.
pub fn count_invertible(ring: &FiniteRing, n: usize) -> usize {
    let mut m = vec![ring.zero(); n * n];
    let mut count = 0;
    loop {
        if brute_force_inverse(ring, &RMatrix::new(n, n, m.clone()).expect("square")).is_some() {
            count += 1;
        }
        if !increment_counter(&mut m, ring.size()) {
            return count;
        }
    }
}

/// All right `D`-linear combinations of `vectors`, with `D` given by its elements.
fn span(ring: &FiniteRing, scalars: &[usize], vectors: &[Vec<usize>], len: usize) -> HashSet<Vec<usize>> {
    let mut out = HashSet::new();
    let mut pick = vec![0usize; vectors.len()];
    loop {
        let mut v = vec![ring.zero(); len];
        for (vec, &c) in vectors.iter().zip(&pick) {
            for (x, &y) in v.iter_mut().zip(vec) {
                *x = ring.add(*x, ring.mul(y, scalars[c]));
            }
        }
        out.insert(v);
        if !increment_counter(&mut pick, scalars.len()) {
            return out;
        }
    }
}

/// Lexicographically first size-`r` subsets of `0..m`, in order.
fn subsets(m: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            go(i + 1, m, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, r, &mut Vec::new(), &mut out);
    out
}

/// S-function of a `d x n` matrix as the lexicographically least set of block
/// columns of the reduced Peirce matrix whose span has `|D_k|^(mu_k d)` elements.
pub fn s_function_bruteforce(h: &RMatrix, aw: &AwEmbedding) -> Option<SFunction> {
    let q = aw.quotient();
    let bar = q.quotient();
    let phi = aw.phi_matrix(h);
    let rows_idx = DistinguishedIndexer::new(aw, h.rows());
    let cols_idx = DistinguishedIndexer::new(aw, h.cols());
    let mut sets = Vec::new();
    for k in 0..aw.q() {
        let scalars = &aw.field(k).elements;
        let r = rows_idx.block_len(k);
        let column = |j: usize| -> Vec<usize> {
            let c = cols_idx.standard(k, j);
            (0..r).map(|i| q.project(phi.get(rows_idx.standard(k, i), c))).collect()
        };
        let full = (scalars.len() as u128).pow(r as u32);
        let found = subsets(cols_idx.block_len(k), r).into_iter().find(|set| {
            let vecs: Vec<Vec<usize>> = set.iter().map(|&j| column(j)).collect();
            span(bar, scalars, &vecs, r).len() as u128 == full
        })?;
        sets.push(found);
    }
    Some(SFunction { sets })
}

/// Column-adaptedness straight from the definition: surjective, with each
/// pivot column of `Phi(h)` equal to the matching unit vector `e_1^k w(k)_i`.
pub fn column_adapted_bruteforce(h: &RMatrix, aw: &AwEmbedding) -> Option<SFunction> {
    let s = s_function_bruteforce(h, aw)?;
    let phi = aw.phi_matrix(h);
    let rows_idx = DistinguishedIndexer::new(aw, h.rows());
    let cols_idx = DistinguishedIndexer::new(aw, h.cols());
    let ring = aw.ring();
    for (k, set) in s.sets.iter().enumerate() {
        for (i, &j) in set.iter().enumerate() {
            let c = cols_idx.standard(k, j);
            let row = rows_idx.standard(k, i);
            let ok = (0..phi.rows()).all(|p| {
                let want = if p == row { aw.unit_at(p % aw.mu()) } else { ring.zero() };
                phi.get(p, c) == want
            });
            if !ok {
                return None;
            }
        }
    }
    Some(s)
}

fn all_matrices(ring: &FiniteRing, rows: usize, cols: usize) -> Vec<RMatrix> {
    let mut v = vec![ring.zero(); rows * cols];
    let mut out = Vec::new();
    loop {
        out.push(RMatrix::new(rows, cols, v.clone()).expect("shape"));
        if !increment_counter(&mut v, ring.size()) {
            return out;
        }
    }
}

/// `|Hom_VIC(R^d, R^n)|` and `|Hom_OVIC(R^d, R^n)|` by scanning all pairs `(f', f'')`.
pub fn vic_ovic_counts_bruteforce(aw: &AwEmbedding, d: usize, n: usize) -> (usize, usize) {
    let ring = aw.ring();
    let splittings = all_matrices(ring, n, d);
    let (mut vic, mut ovic) = (0, 0);
    for fd in all_matrices(ring, d, n) {
        let sections =
            splittings.iter().filter(|fp| ring.mat_mul(&fd, fp).map(|p| ring.is_identity(&p)).unwrap_or(false)).count();
        vic += sections;
        if sections > 0 && column_adapted_bruteforce(&fd, aw).is_some() {
            ovic += sections;
        }
    }
    (vic, ovic)
}

/// `s <= t` in the subword order, by trying every strictly increasing map.
pub fn word_leq_bruteforce<T: Eq>(s: &[T], t: &[T]) -> bool {
    if s.len() > t.len() {
        return false;
    }
    subsets(t.len(), s.len()).iter().any(|f| {
        let matched = f.iter().enumerate().all(|(i, &fi)| {
            let letter_ok = s[i] == t[fi];
            let skipped_ok = (if i == 0 { 0 } else { f[i - 1] + 1 }..fi).all(|j| s[..i].contains(&t[j]));
            letter_ok && skipped_ok
        });
        let tail = f.last().map_or(0, |&x| x + 1);
        matched && (tail..t.len()).all(|j| s.contains(&t[j]))
    })
}
