use serde::{Deserialize, Serialize};

use super::{FiniteRing, QuotientData};
use crate::error::{Error, Result};

/// A dense matrix of ring element indices, stored row-major.
///
/// The matrix does not own a ring; arithmetic goes through the ring it is
/// interpreted over (see the `mat_*` methods on [`FiniteRing`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<usize>,
}

impl RMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<usize>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::BadShape(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(RMatrix { rows, cols, entries })
    }

    pub fn filled(rows: usize, cols: usize, value: usize) -> Self {
        RMatrix { rows, cols, entries: vec![value; rows * cols] }
    }

    pub fn zeros(ring: &FiniteRing, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, ring.zero())
    }

    pub fn identity(ring: &FiniteRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Builds a matrix from nested rows. `cols` is needed for matrices with no rows.
    pub fn from_rows(rows: &[Vec<usize>], cols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::BadShape(format!("ragged rows, expected {cols} columns")));
        }
        Ok(RMatrix { rows: rows.len(), cols, entries: rows.concat() })
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: usize) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<usize> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Inserts `col` so that it becomes column `at` (0-based).
    pub fn insert_column(&self, at: usize, col: &[usize]) -> Self {
        assert!(at <= self.cols && col.len() == self.rows);
        let mut entries = Vec::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            let r = self.row(i);
            entries.extend_from_slice(&r[..at]);
            entries.push(col[i]);
            entries.extend_from_slice(&r[at..]);
        }
        RMatrix { rows: self.rows, cols: self.cols + 1, entries }
    }

    /// Inserts `row` so that it becomes row `at` (0-based).
    pub fn insert_row(&self, at: usize, row: &[usize]) -> Self {
        assert!(at <= self.rows && row.len() == self.cols);
        let mut entries = self.entries.clone();
        let pos = at * self.cols;
        entries.splice(pos..pos, row.iter().copied());
        RMatrix { rows: self.rows + 1, cols: self.cols, entries }
    }

    pub fn map(&self, f: impl Fn(usize) -> usize) -> Self {
        RMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|&x| f(x)).collect() }
    }
}

impl FiniteRing {
    pub fn mat_mul(&self, a: &RMatrix, b: &RMatrix) -> Result<RMatrix> {
        if a.cols != b.rows {
            return Err(Error::BadShape(format!("cannot multiply {}x{} by {}x{}", a.rows, a.cols, b.rows, b.cols)));
        }
        let mut out = RMatrix::zeros(self, a.rows, b.cols);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let mut acc = self.zero();
                for t in 0..a.cols {
                    acc = self.add(acc, self.mul(a.get(i, t), b.get(t, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mat_add(&self, a: &RMatrix, b: &RMatrix) -> Result<RMatrix> {
        self.zip_with(a, b, |x, y| self.add(x, y))
    }

    pub fn mat_sub(&self, a: &RMatrix, b: &RMatrix) -> Result<RMatrix> {
        self.zip_with(a, b, |x, y| self.sub(x, y))
    }

    fn zip_with(&self, a: &RMatrix, b: &RMatrix, f: impl Fn(usize, usize) -> usize) -> Result<RMatrix> {
        if a.rows != b.rows || a.cols != b.cols {
            return Err(Error::BadShape(format!("{}x{} vs {}x{}", a.rows, a.cols, b.rows, b.cols)));
        }
        Ok(RMatrix {
            rows: a.rows,
            cols: a.cols,
            entries: a.entries.iter().zip(&b.entries).map(|(&x, &y)| f(x, y)).collect(),
        })
    }

    pub fn is_identity(&self, m: &RMatrix) -> bool {
        m.rows == m.cols
            && (0..m.rows).all(|i| (0..m.cols).all(|j| m.get(i, j) == if i == j { self.one() } else { self.zero() }))
    }

    /// Applies the matrix to a column vector.
    pub fn mat_vec(&self, a: &RMatrix, v: &[usize]) -> Vec<usize> {
        (0..a.rows)
            .map(|i| (0..a.cols).fold(self.zero(), |acc, t| self.add(acc, self.mul(a.get(i, t), v[t]))))
            .collect()
    }
}

/// Outcome of [`matrix_invertible`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invertibility {
    pub invertible: bool,
    /// Verified two-sided inverse over the source ring.
    pub inverse: Option<RMatrix>,
    /// Inverse of the reduction over the quotient ring.
    pub reduced_inverse: Option<RMatrix>,
}

/// Budget on `|quotient|^n` when solving for columns of the reduced inverse.
const COLUMN_SEARCH_BUDGET: u128 = 1 << 24;

/// Decides invertibility of a square matrix through its reduction modulo the
/// radical, then lifts the reduced inverse to the source ring.
///
/// The lift corrects a preimage `X0` of the reduced inverse: `M X0 = I - E`
/// with `E` over the radical, hence nilpotent, so `X0 (I + E + E^2 + ...)` is
/// a right inverse. The result is checked on both sides before it is returned.
pub fn matrix_invertible(m: &RMatrix, q: &QuotientData) -> Result<Invertibility> {
    if m.rows() != m.cols() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let src = q.source();
    let bar = q.quotient();
    let n = m.rows();
    let reduced = m.map(|x| q.project(x));
    let Some(xbar) = solve_inverse_by_columns(bar, &reduced)? else {
        return Ok(Invertibility { invertible: false, inverse: None, reduced_inverse: None });
    };

    let x0 = xbar.map(|x| q.section(x));
    let id = RMatrix::identity(src, n);
    let e = src.mat_sub(&id, &src.mat_mul(m, &x0)?)?;
    let mut series = id.clone();
    let mut power = e.clone();
    // E^k = 0 once k reaches the nilpotency index of the radical.
    for _ in 0..=src.size() {
        if power.entries().iter().all(|&x| x == src.zero()) {
            break;
        }
        series = src.mat_add(&series, &power)?;
        power = src.mat_mul(&power, &e)?;
    }
    let inv = src.mat_mul(&x0, &series)?;
    if !src.is_identity(&src.mat_mul(m, &inv)?) || !src.is_identity(&src.mat_mul(&inv, m)?) {
        return Err(Error::CounterexampleFound("lifted inverse failed the two-sided check".into()));
    }
    Ok(Invertibility { invertible: true, inverse: Some(inv), reduced_inverse: Some(xbar) })
}

/// Searches, column by column, for `X` with `A X = I` over `ring`; verifies `X A = I`.
pub(crate) fn solve_inverse_by_columns(ring: &FiniteRing, a: &RMatrix) -> Result<Option<RMatrix>> {
    let n = a.rows();
    let needed = (ring.size() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > COLUMN_SEARCH_BUDGET {
        return Err(Error::BudgetExceeded { needed, budget: COLUMN_SEARCH_BUDGET });
    }
    let mut x = RMatrix::zeros(ring, n, n);
    for j in 0..n {
        let target: Vec<usize> = (0..n).map(|i| if i == j { ring.one() } else { ring.zero() }).collect();
        let mut v = vec![0usize; n];
        let mut found = false;
        loop {
            if ring.mat_vec(a, &v) == target {
                found = true;
                break;
            }
            if !increment(&mut v, ring.size()) {
                break;
            }
        }
        if !found {
            return Ok(None);
        }
        for i in 0..n {
            x.set(i, j, v[i]);
        }
    }
    if !ring.is_identity(&ring.mat_mul(&x, a)?) {
        return Ok(None);
    }
    Ok(Some(x))
}

/// Advances a mixed-radix counter (last coordinate fastest); false on wraparound.
pub(crate) fn increment(v: &mut [usize], base: usize) -> bool {
    for slot in v.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{quotient_by_radical, zmod};

    #[test]
    fn identity_is_invertible() {
        let r = zmod(4).unwrap();
        let q = quotient_by_radical(&r).unwrap();
        let res = matrix_invertible(&RMatrix::identity(&r, 2), &q).unwrap();
        assert!(res.invertible);
        assert_eq!(res.inverse.unwrap(), RMatrix::identity(&r, 2));
    }

    #[test]
    fn unipotent_over_z4() {
        let r = zmod(4).unwrap();
        let q = quotient_by_radical(&r).unwrap();
        let m = RMatrix::new(2, 2, vec![1, 2, 0, 1]).unwrap();
        let res = matrix_invertible(&m, &q).unwrap();
        assert!(res.invertible);
        assert_eq!(res.inverse.unwrap(), RMatrix::new(2, 2, vec![1, 2, 0, 1]).unwrap());
    }

    #[test]
    fn singular_reduction_over_z4() {
        let r = zmod(4).unwrap();
        let q = quotient_by_radical(&r).unwrap();
        let m = RMatrix::new(2, 2, vec![2, 0, 0, 1]).unwrap();
        assert!(!matrix_invertible(&m, &q).unwrap().invertible);
    }

    #[test]
    fn non_square_is_rejected() {
        let r = zmod(4).unwrap();
        let q = quotient_by_radical(&r).unwrap();
        let m = RMatrix::zeros(&r, 1, 2);
        assert!(matches!(matrix_invertible(&m, &q), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn lifting_needs_a_correction_term() {
        // 3 reduces to 1, whose preimage under the section is 1, not 3^-1 = 3.
        let r = zmod(4).unwrap();
        let q = quotient_by_radical(&r).unwrap();
        let m = RMatrix::new(1, 1, vec![3]).unwrap();
        assert_eq!(matrix_invertible(&m, &q).unwrap().inverse.unwrap().entries(), &[3]);
    }

    #[test]
    fn row_and_column_insertion() {
        let m = RMatrix::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        assert_eq!(m.insert_column(1, &[9, 8]).entries(), &[1, 9, 2, 3, 8, 4]);
        assert_eq!(m.insert_row(2, &[7, 7]).entries(), &[1, 2, 3, 4, 7, 7]);
        let empty = RMatrix::new(0, 3, vec![]).unwrap();
        assert_eq!(empty.insert_row(0, &[1, 2, 3]).rows(), 1);
    }
}
