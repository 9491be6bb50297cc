//! Morphisms of VIC(R) and the ordered subcategory OVIC(R).
//!
//! A morphism `R^d -> R^n` is a pair `(f', f'')` with `f'` an `n x d` matrix,
//! `f''` a `d x n` matrix and `f'' f' = I_d`. Matrices act on column vectors.
//! Distinguished indices and S-function entries are 0-based throughout.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{matrix_invertible, FiniteRing, RMatrix};
use crate::wedderburn::AwEmbedding;

/// Converts between standard positions of `R^(mu m)` and distinguished
/// coordinates `(k, j)`, where `v(k)_j` runs through the positions of block `k`
/// in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishedIndexer {
    mu: usize,
    mu_blocks: Vec<usize>,
    block_start: Vec<usize>,
    block_of: Vec<usize>,
    size: usize,
}

impl DistinguishedIndexer {
    pub fn new(aw: &AwEmbedding, size: usize) -> Self {
        DistinguishedIndexer {
            mu: aw.mu(),
            mu_blocks: aw.mu_blocks().to_vec(),
            block_start: (0..aw.q()).map(|k| aw.block_start(k)).collect(),
            block_of: (0..aw.mu()).map(|o| aw.block_of(o)).collect(),
            size,
        }
    }

    /// The rank `m` of the ambient `R^(mu m)`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of distinguished vectors in block `k`, namely `mu_k m`.
    pub fn block_len(&self, k: usize) -> usize {
        self.mu_blocks[k] * self.size
    }

    pub fn standard(&self, k: usize, j: usize) -> usize {
        let mk = self.mu_blocks[k];
        (j / mk) * self.mu + self.block_start[k] + j % mk
    }

    pub fn distinguished(&self, p: usize) -> (usize, usize) {
        let (t, o) = (p / self.mu, p % self.mu);
        let k = self.block_of[o];
        (k, t * self.mu_blocks[k] + o - self.block_start[k])
    }

    pub fn block_of_position(&self, p: usize) -> usize {
        self.block_of[p % self.mu]
    }
}

/// A VIC(R) morphism `R^d -> R^n`.
#[derive(Debug, Clone)]
pub struct VicMorphism {
    ring: Arc<FiniteRing>,
    d: usize,
    n: usize,
    f_prime: RMatrix,
    f_dprime: RMatrix,
}

impl PartialEq for VicMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.f_prime == other.f_prime
            && self.f_dprime == other.f_dprime
            && (Arc::ptr_eq(&self.ring, &other.ring) || self.ring.name() == other.ring.name())
    }
}

impl Eq for VicMorphism {}

impl VicMorphism {
    pub fn new(ring: Arc<FiniteRing>, f_prime: RMatrix, f_dprime: RMatrix) -> Result<Self> {
        let (n, d) = (f_prime.rows(), f_prime.cols());
        if f_dprime.rows() != d || f_dprime.cols() != n {
            return Err(Error::BadShape(format!("f' is {n}x{d} but f'' is {}x{}", f_dprime.rows(), f_dprime.cols())));
        }
        let bound = ring.size();
        if f_prime.entries().iter().chain(f_dprime.entries()).any(|&x| x >= bound) {
            return Err(Error::InvalidInput("matrix entry outside the ring".into()));
        }
        if !ring.is_identity(&ring.mat_mul(&f_dprime, &f_prime)?) {
            return Err(Error::InvalidInput("f'' f' is not the identity".into()));
        }
        Ok(VicMorphism { ring, d, n, f_prime, f_dprime })
    }

    pub fn identity(ring: Arc<FiniteRing>, n: usize) -> Self {
        let id = RMatrix::identity(&ring, n);
        VicMorphism { ring, d: n, n, f_prime: id.clone(), f_dprime: id }
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f_prime(&self) -> &RMatrix {
        &self.f_prime
    }

    pub fn f_dprime(&self) -> &RMatrix {
        &self.f_dprime
    }
}

/// `S(h, k)` for each block `k`, as sorted 0-based distinguished indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SFunction {
    pub sets: Vec<Vec<usize>>,
}

impl SFunction {
    /// The sets with 1-based indices, as used in reports.
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.sets.iter().map(|s| s.iter().map(|j| j + 1).collect()).collect()
    }

    /// Standard positions of all pivot columns, sorted.
    pub fn pivot_positions(&self, idx: &DistinguishedIndexer) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.sets.iter().enumerate().flat_map(|(k, s)| s.iter().map(move |&j| idx.standard(k, j))).collect();
        out.sort_unstable();
        out
    }
}

/// Greedy pivot columns of each block of the reduced Peirce matrix of `h`.
///
/// `h` is `d x n`. Block `k` of the reduction has entries in the field `D_k`;
/// column `v(k)_j` is selected when it is independent of the columns
/// selected before it. Fails unless every block reaches rank `mu_k d`.
pub fn s_function(h: &RMatrix, aw: &AwEmbedding) -> Result<SFunction> {
    let (d, n) = (h.rows(), h.cols());
    let q = aw.quotient();
    let bar = q.quotient();
    let phi = aw.phi_matrix(h);
    let rows_idx = DistinguishedIndexer::new(aw, d);
    let cols_idx = DistinguishedIndexer::new(aw, n);
    let mut sets = Vec::with_capacity(aw.q());
    for k in 0..aw.q() {
        let field = aw.field(k);
        let len = rows_idx.block_len(k);
        let rows: Vec<usize> = (0..len).map(|i| rows_idx.standard(k, i)).collect();
        // reduced basis vectors, each normalized to 1 at its pivot row
        let mut basis: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut chosen = Vec::new();
        for j in 0..cols_idx.block_len(k) {
            if chosen.len() == len {
                break;
            }
            let c = cols_idx.standard(k, j);
            let mut v: Vec<usize> = rows.iter().map(|&r| q.project(phi.get(r, c))).collect();
            for (pr, b) in &basis {
                let coef = v[*pr];
                if coef != bar.zero() {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = bar.sub(*x, bar.mul(y, coef));
                    }
                }
            }
            if let Some(pr) = v.iter().position(|&x| x != bar.zero()) {
                let inv = field
                    .inverse(v[pr])
                    .ok_or_else(|| Error::CounterexampleFound(format!("{} has no inverse in D_{k}", v[pr])))?;
                for x in v.iter_mut() {
                    *x = bar.mul(*x, inv);
                }
                basis.push((pr, v));
                chosen.push(j);
            }
        }
        if chosen.len() < len {
            return Err(Error::NotSurjective { block: k, rank: chosen.len(), expected: len });
        }
        sets.push(chosen);
    }
    Ok(SFunction { sets })
}

/// Returns the S-function of `h` when `h` is column-adapted.
///
/// The greedy choice of pivots already places every non-pivot column in the
/// span of the pivots before it, so what remains is the exact condition:
/// the column of `Phi(h)` at `v(k)_{j_i}` is `w(k)_i`, the unit vector carrying
/// `e_1^k` in row `w(k)_i`.
pub fn column_adapted_s(h: &RMatrix, aw: &AwEmbedding) -> Option<SFunction> {
    let s = s_function(h, aw).ok()?;
    let phi = aw.phi_matrix(h);
    let zero = aw.ring().zero();
    let rows_idx = DistinguishedIndexer::new(aw, h.rows());
    let cols_idx = DistinguishedIndexer::new(aw, h.cols());
    for (k, set) in s.sets.iter().enumerate() {
        let unit = aw.unit_at(aw.block_start(k));
        for (i, &j) in set.iter().enumerate() {
            let c = cols_idx.standard(k, j);
            let r0 = rows_idx.standard(k, i);
            for r in 0..phi.rows() {
                let want = if r == r0 { unit } else { zero };
                if phi.get(r, c) != want {
                    return None;
                }
            }
        }
    }
    Some(s)
}

pub fn is_column_adapted(h: &RMatrix, aw: &AwEmbedding) -> bool {
    column_adapted_s(h, aw).is_some()
}

/// Sort key realizing the total order on OVIC morphisms with a fixed source.
///
/// Fields compare in declaration order: target rank, S-function tuple,
/// columns of `Phi(f'')`, free rows of `Phi(f')`. Vectors of `R^(mu d)`
/// compare lexicographically by element index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderKey {
    pub n: usize,
    pub s: SFunction,
    /// `Phi(f'')` read column by column.
    pub phi_columns: Vec<usize>,
    /// The free rows of `Phi(f')`, top to bottom.
    pub free_rows: Vec<usize>,
}

/// A VIC morphism whose splitting `f''` is column-adapted.
#[derive(Debug, Clone)]
pub struct OvicMorphism {
    vic: VicMorphism,
    key: OrderKey,
}

impl PartialEq for OvicMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.vic == other.vic
    }
}

impl Eq for OvicMorphism {}

impl PartialOrd for OvicMorphism {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OvicMorphism {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.vic.d, &self.key).cmp(&(other.vic.d, &other.key))
    }
}

impl OvicMorphism {
    pub fn new(vic: VicMorphism, aw: &AwEmbedding) -> Result<Self> {
        let s = column_adapted_s(&vic.f_dprime, aw).ok_or(Error::NotColumnAdapted)?;
        Ok(Self::with_s(vic, s, aw))
    }

    fn with_s(vic: VicMorphism, s: SFunction, aw: &AwEmbedding) -> Self {
        let phi_dp = aw.phi_matrix(&vic.f_dprime);
        let phi_columns = (0..phi_dp.cols()).flat_map(|c| phi_dp.column(c)).collect();
        let phi_p = aw.phi_matrix(&vic.f_prime);
        let idx = DistinguishedIndexer::new(aw, vic.n);
        let dependent = s.pivot_positions(&idx);
        let free_rows = (0..phi_p.rows())
            .filter(|p| dependent.binary_search(p).is_err())
            .flat_map(|p| phi_p.row(p).to_vec())
            .collect();
        let key = OrderKey { n: vic.n, s, phi_columns, free_rows };
        OvicMorphism { vic, key }
    }

    pub fn identity(aw: &AwEmbedding, n: usize) -> Self {
        let vic = VicMorphism::identity(aw.ring_arc().clone(), n);
        Self::new(vic, aw).expect("identity is column-adapted")
    }

    pub fn vic(&self) -> &VicMorphism {
        &self.vic
    }

    pub fn into_vic(self) -> VicMorphism {
        self.vic
    }

    pub fn d(&self) -> usize {
        self.vic.d
    }

    pub fn n(&self) -> usize {
        self.vic.n
    }

    pub fn f_prime(&self) -> &RMatrix {
        &self.vic.f_prime
    }

    pub fn f_dprime(&self) -> &RMatrix {
        &self.vic.f_dprime
    }

    pub fn s(&self) -> &SFunction {
        &self.key.s
    }

    pub fn key(&self) -> &OrderKey {
        &self.key
    }
}

/// `g o f = (g' f', f'' g'')` for `f: d -> n` and `g: n -> l`.
pub fn compose_vic(g: &VicMorphism, f: &VicMorphism) -> Result<VicMorphism> {
    if g.d != f.n {
        return Err(Error::RankMismatch(format!("cannot compose {}->{} after {}->{}", g.d, g.n, f.d, f.n)));
    }
    let r = &f.ring;
    let f_prime = r.mat_mul(&g.f_prime, &f.f_prime)?;
    let f_dprime = r.mat_mul(&f.f_dprime, &g.f_dprime)?;
    if !r.is_identity(&r.mat_mul(&f_dprime, &f_prime)?) {
        return Err(Error::CounterexampleFound("composite fails the splitting identity".into()));
    }
    Ok(VicMorphism { ring: f.ring.clone(), d: f.d, n: g.n, f_prime, f_dprime })
}

/// Composes ordered morphisms; the S-function of the composite is
/// `{ j_{j'_i} }` with `j = S(g'')` and `j' = S(f'')`, which is checked.
pub fn compose_ovic(g: &OvicMorphism, f: &OvicMorphism, aw: &AwEmbedding) -> Result<OvicMorphism> {
    let vic = compose_vic(&g.vic, &f.vic)?;
    let expected = SFunction {
        sets: g.s().sets.iter().zip(&f.s().sets).map(|(j, jp)| jp.iter().map(|&i| j[i]).collect()).collect(),
    };
    let s = column_adapted_s(&vic.f_dprime, aw)
        .ok_or_else(|| Error::CounterexampleFound("composite of column-adapted maps is not column-adapted".into()))?;
    if s != expected {
        return Err(Error::CounterexampleFound(format!(
            "composite S-function {:?} differs from {:?}",
            s.sets, expected.sets
        )));
    }
    Ok(OvicMorphism::with_s(vic, s, aw))
}

/// The canonical splitting `g: R^n -> R^m` (an `m x n` matrix) attached to
/// pivot sets `S(k)` of size `mu_k n` inside `0..mu_k m`.
pub fn canonical_splitting(s: &SFunction, aw: &AwEmbedding, m: usize, n: usize) -> Result<RMatrix> {
    let big = DistinguishedIndexer::new(aw, m);
    let small = DistinguishedIndexer::new(aw, n);
    if s.sets.len() != aw.q() {
        return Err(Error::BadShape(format!("{} pivot sets for {} blocks", s.sets.len(), aw.q())));
    }
    let mu = aw.mu();
    let mut g = RMatrix::zeros(aw.ring(), mu * m, mu * n);
    for (k, set) in s.sets.iter().enumerate() {
        if set.len() != small.block_len(k)
            || set.iter().any(|&j| j >= big.block_len(k))
            || set.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::BadShape(format!("pivot set {k} does not fit {m} -> {n}")));
        }
        let unit = aw.unit_at(aw.block_start(k));
        for (i, &j) in set.iter().enumerate() {
            g.set(big.standard(k, j), small.standard(k, i), unit);
        }
    }
    aw.recover(&g)
}

/// Result of [`factor_vic`]: `f = f2 o f1` with `f1 = (g^-1, g)`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub g: RMatrix,
    pub g_inverse: RMatrix,
    pub f1: VicMorphism,
    pub f2: OvicMorphism,
}

/// Factors a VIC morphism through an automorphism of `R^d` followed by an
/// ordered morphism.
///
/// `G` sends `w(k)_i` to the pivot column of `Phi(f'')` at `v(k)_{j(k)_i}`;
/// `g = Phi^-1(G)` is invertible because its reduction has a basis of columns.
pub fn factor_vic(f: &VicMorphism, aw: &AwEmbedding) -> Result<Factorization> {
    let r = &*f.ring;
    let s = s_function(&f.f_dprime, aw)?;
    let phi = aw.phi_matrix(&f.f_dprime);
    let dom = DistinguishedIndexer::new(aw, f.n);
    let cod = DistinguishedIndexer::new(aw, f.d);
    let mu = aw.mu();
    let mut big = RMatrix::zeros(r, mu * f.d, mu * f.d);
    for (k, set) in s.sets.iter().enumerate() {
        for (i, &j) in set.iter().enumerate() {
            let src = dom.standard(k, j);
            let dst = cod.standard(k, i);
            for row in 0..mu * f.d {
                big.set(row, dst, phi.get(row, src));
            }
        }
    }
    let g = aw.recover(&big)?;
    let inv = matrix_invertible(&g, aw.quotient())?;
    let g_inverse = inv.inverse.ok_or_else(|| Error::CounterexampleFound("factor g is not invertible".into()))?;
    let f1 = VicMorphism { ring: f.ring.clone(), d: f.d, n: f.d, f_prime: g_inverse.clone(), f_dprime: g.clone() };
    let f2_vic = VicMorphism::new(f.ring.clone(), r.mat_mul(&f.f_prime, &g)?, r.mat_mul(&g_inverse, &f.f_dprime)?)?;
    let f2 = OvicMorphism::new(f2_vic, aw)?;
    if compose_vic(&f2.vic, &f1)? != *f {
        return Err(Error::CounterexampleFound("f2 o f1 differs from f".into()));
    }
    Ok(Factorization { g, g_inverse, f1, f2 })
}

/// Free and dependent rows of `Phi(f')`, as standard row positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowPartition {
    pub free: Vec<usize>,
    pub dependent: Vec<usize>,
}

pub fn free_rows(f: &OvicMorphism, aw: &AwEmbedding) -> RowPartition {
    let idx = DistinguishedIndexer::new(aw, f.n());
    let dependent = f.s().pivot_positions(&idx);
    let free = (0..aw.mu() * f.n()).filter(|p| dependent.binary_search(p).is_err()).collect();
    RowPartition { free, dependent }
}

/// Values of the free rows of `Phi(f')`, top to bottom.
pub fn free_row_values(f: &OvicMorphism, aw: &AwEmbedding) -> Vec<Vec<usize>> {
    let phi = aw.phi_matrix(f.f_prime());
    free_rows(f, aw).free.iter().map(|&p| phi.row(p).to_vec()).collect()
}

/// Rebuilds the ordered morphism with splitting `f_dprime` whose `Phi(f')`
/// has the given free rows. Each dependent row sits at a pivot column `p`
/// whose unit lies in row `r`; row `r` of `Phi(f'') Phi(f') = Phi(I)` then
/// solves for it.
pub fn reconstruct_from_free(f_dprime: &RMatrix, free_values: &[Vec<usize>], aw: &AwEmbedding) -> Result<OvicMorphism> {
    let s = column_adapted_s(f_dprime, aw).ok_or(Error::NotColumnAdapted)?;
    let r = aw.ring();
    let (d, n) = (f_dprime.rows(), f_dprime.cols());
    let mu = aw.mu();
    let dom = DistinguishedIndexer::new(aw, n);
    let cod = DistinguishedIndexer::new(aw, d);
    let dependent = s.pivot_positions(&dom);
    let free: Vec<usize> = (0..mu * n).filter(|p| dependent.binary_search(p).is_err()).collect();
    if free_values.len() != free.len() || free_values.iter().any(|row| row.len() != mu * d) {
        return Err(Error::BadShape(format!("expected {} free rows of length {}", free.len(), mu * d)));
    }
    if free_values.iter().flatten().any(|&x| x >= r.size()) {
        return Err(Error::InvalidInput("free row entry outside the ring".into()));
    }
    let phi_dp = aw.phi_matrix(f_dprime);
    let mut phi_p = RMatrix::zeros(r, mu * n, mu * d);
    for (&p, row) in free.iter().zip(free_values) {
        for (c, &x) in row.iter().enumerate() {
            phi_p.set(p, c, x);
        }
    }
    for (k, set) in s.sets.iter().enumerate() {
        for (i, &j) in set.iter().enumerate() {
            let p = dom.standard(k, j);
            let row = cod.standard(k, i);
            for c in 0..mu * d {
                let mut x = if c == row { aw.unit_at(row % mu) } else { r.zero() };
                for &fp in &free {
                    let t = r.mul(phi_dp.get(row, fp), phi_p.get(fp, c));
                    x = r.sub(x, t);
                }
                phi_p.set(p, c, x);
            }
        }
    }
    let f_prime = aw.recover(&phi_p).map_err(|_| Error::NoSolution)?;
    let vic = VicMorphism::new(aw.ring_arc().clone(), f_prime, f_dprime.clone()).map_err(|_| Error::NoSolution)?;
    let out = OvicMorphism::with_s(vic, s, aw);
    if out.key.free_rows != free_values.concat() {
        return Err(Error::NoSolution);
    }
    Ok(out)
}

fn count_matrices(ring: &FiniteRing, rows: usize, cols: usize) -> u128 {
    (ring.size() as u128).checked_pow((rows * cols) as u32).unwrap_or(u128::MAX)
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// Calls `visit` on every `rows x cols` matrix over the ring, in index order.
fn for_each_matrix(ring: &FiniteRing, rows: usize, cols: usize, mut visit: impl FnMut(&RMatrix)) {
    let mut entries = vec![0usize; rows * cols];
    loop {
        visit(&RMatrix::new(rows, cols, entries.clone()).expect("shape"));
        if !crate::ring::increment_counter(&mut entries, ring.size()) {
            break;
        }
    }
}

/// All column-adapted `d x n` matrices with their S-functions, in index order.
pub fn column_adapted_maps(aw: &AwEmbedding, d: usize, n: usize, budget: u128) -> Result<Vec<(RMatrix, SFunction)>> {
    let ring = aw.ring();
    check_budget(count_matrices(ring, d, n), budget)?;
    let mut out = Vec::new();
    for_each_matrix(ring, d, n, |h| {
        if let Some(s) = column_adapted_s(h, aw) {
            out.push((h.clone(), s));
        }
    });
    Ok(out)
}

/// Allowed values at each free position of `Phi(f')`, row-major over free rows.
fn free_slot_choices<'a>(aw: &'a AwEmbedding, s: &SFunction, d: usize, n: usize) -> Vec<&'a [usize]> {
    let dom = DistinguishedIndexer::new(aw, n);
    let dependent = s.pivot_positions(&dom);
    let mu = aw.mu();
    let mut slots = Vec::new();
    for p in (0..mu * n).filter(|p| dependent.binary_search(p).is_err()) {
        for c in 0..mu * d {
            slots.push(aw.corner(aw.block_of(p % mu), aw.block_of(c % mu)).members.as_slice());
        }
    }
    slots
}

/// `|Hom_OVIC(R^d, R^n)|`, counted without listing the splittings.
pub fn count_ovic(aw: &AwEmbedding, d: usize, n: usize, budget: u128) -> Result<u128> {
    let mut total: u128 = 0;
    for (_, s) in column_adapted_maps(aw, d, n, budget)? {
        let per: u128 = free_slot_choices(aw, &s, d, n).iter().map(|c| c.len() as u128).product();
        total = total.saturating_add(per);
    }
    Ok(total)
}

/// `Hom_OVIC(R^d, R^n)` sorted by the total order. `budget` bounds both the
/// number of candidate splittings scanned and the number of morphisms listed.
pub fn enumerate_ovic(aw: &AwEmbedding, d: usize, n: usize, budget: u128) -> Result<Vec<OvicMorphism>> {
    let maps = column_adapted_maps(aw, d, n, budget)?;
    let mut plans = Vec::with_capacity(maps.len());
    let mut total: u128 = 0;
    for (h, s) in maps {
        let slots = free_slot_choices(aw, &s, d, n);
        let per: u128 = slots.iter().map(|c| c.len() as u128).product();
        total = total.saturating_add(per);
        plans.push((h, slots));
    }
    check_budget(total, budget)?;
    let mut out = Vec::with_capacity(total as usize);
    let mu = aw.mu();
    for (h, slots) in plans {
        let mut choice = vec![0usize; slots.len()];
        loop {
            let values: Vec<usize> = choice.iter().zip(&slots).map(|(&i, c)| c[i]).collect();
            let rows: Vec<Vec<usize>> =
                if d == 0 { vec![Vec::new(); mu * n] } else { values.chunks(mu * d).map(|c| c.to_vec()).collect() };
            out.push(reconstruct_from_free(&h, &rows, aw)?);
            if !advance(&mut choice, &slots) {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

fn advance(choice: &mut [usize], slots: &[&[usize]]) -> bool {
    for (c, s) in choice.iter_mut().zip(slots).rev() {
        *c += 1;
        if *c < s.len() {
            return true;
        }
        *c = 0;
    }
    false
}

/// `Hom_VIC(R^d, R^n)` sorted by `(f'', f')`.
pub fn enumerate_vic(aw: &AwEmbedding, d: usize, n: usize, budget: u128) -> Result<Vec<VicMorphism>> {
    let ring = aw.ring_arc();
    let scan = count_matrices(ring, d, n).saturating_mul(count_matrices(ring, n, 1).max(1));
    check_budget(scan, budget)?;
    let mut out = Vec::new();
    let mut failure = None;
    for_each_matrix(ring, d, n, |h| {
        if failure.is_some() {
            return;
        }
        let mut per_column: Vec<Vec<Vec<usize>>> = vec![Vec::new(); d];
        for_each_matrix(ring, n, 1, |x| {
            let image = ring.mat_vec(h, x.entries());
            for (j, sols) in per_column.iter_mut().enumerate() {
                if image.iter().enumerate().all(|(i, &y)| y == if i == j { ring.one() } else { ring.zero() }) {
                    sols.push(x.entries().to_vec());
                }
            }
        });
        if per_column.iter().any(|s| s.is_empty()) {
            return;
        }
        let slots: Vec<Vec<usize>> = per_column.iter().map(|s| (0..s.len()).collect()).collect();
        let slot_refs: Vec<&[usize]> = slots.iter().map(|s| s.as_slice()).collect();
        let mut choice = vec![0usize; d];
        loop {
            if out.len() as u128 >= budget {
                failure = Some(Error::BudgetExceeded { needed: budget + 1, budget });
                return;
            }
            let mut fp = RMatrix::zeros(ring, n, d);
            for (j, &c) in choice.iter().enumerate() {
                for (i, &x) in per_column[j][c].iter().enumerate() {
                    fp.set(i, j, x);
                }
            }
            out.push(VicMorphism { ring: ring.clone(), d, n, f_prime: fp, f_dprime: h.clone() });
            if !advance(&mut choice, &slot_refs) {
                break;
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    out.sort_by(|a, b| (&a.f_dprime, &a.f_prime).cmp(&(&b.f_dprime, &b.f_prime)));
    Ok(out)
}

type Stratum = Arc<Vec<OvicMorphism>>;

/// Memoized `Hom_OVIC(R^d, R^n)` strata, each listed once in sorted order.
#[derive(Debug)]
pub struct HomCache {
    budget: u128,
    strata: Mutex<HashMap<(usize, usize), Stratum>>,
}

impl HomCache {
    pub fn new(budget: u128) -> Self {
        HomCache { budget, strata: Mutex::new(HashMap::new()) }
    }

    pub fn budget(&self) -> u128 {
        self.budget
    }

    pub fn get(&self, aw: &AwEmbedding, d: usize, n: usize) -> Result<Arc<Vec<OvicMorphism>>> {
        if let Some(hit) = self.strata.lock().expect("hom cache lock").get(&(d, n)) {
            return Ok(hit.clone());
        }
        let list = Arc::new(enumerate_ovic(aw, d, n, self.budget)?);
        self.strata.lock().expect("hom cache lock").insert((d, n), list.clone());
        Ok(list)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{builtin, zmod};
    use crate::wedderburn::build_aw_embedding;

    fn aw(name: &str) -> AwEmbedding {
        build_aw_embedding(&builtin(name).unwrap()).unwrap()
    }

    fn mat(rows: &[&[usize]], cols: usize) -> RMatrix {
        RMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols).unwrap()
    }

    #[test]
    fn indexer_interleaves_blocks() {
        let t = aw("T2F2");
        let idx = DistinguishedIndexer::new(&t, 3);
        assert_eq!((0..3).map(|j| idx.standard(0, j)).collect::<Vec<_>>(), vec![0, 2, 4]);
        assert_eq!((0..3).map(|j| idx.standard(1, j)).collect::<Vec<_>>(), vec![1, 3, 5]);
        for p in 0..6 {
            let (k, j) = idx.distinguished(p);
            assert_eq!(idx.standard(k, j), p);
        }
        let m = aw("M2F2");
        let idx = DistinguishedIndexer::new(&m, 2);
        assert_eq!((0..4).map(|j| idx.standard(0, j)).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn s_function_examples() {
        let f2 = aw("F2");
        assert_eq!(s_function(&mat(&[&[1, 1]], 2), &f2).unwrap().sets, vec![vec![0]]);
        let h = mat(&[&[0, 1, 0], &[1, 0, 1]], 3);
        assert_eq!(s_function(&h, &f2).unwrap().sets, vec![vec![0, 1]]);
        let z4 = aw("Z4");
        assert_eq!(s_function(&mat(&[&[2, 3]], 2), &z4).unwrap().sets, vec![vec![1]]);
        assert!(matches!(
            s_function(&mat(&[&[2, 0]], 2), &z4),
            Err(Error::NotSurjective { block: 0, rank: 0, expected: 1 })
        ));
    }

    #[test]
    fn column_adapted_examples() {
        let z4 = aw("Z4");
        let r = z4.ring();
        for d in 0..3 {
            assert!(is_column_adapted(&RMatrix::identity(r, d), &z4));
        }
        assert!(!is_column_adapted(&mat(&[&[3, 0]], 2), &z4));
        assert!(is_column_adapted(&mat(&[&[1, 0]], 2), &z4));
        let f2 = aw("F2");
        assert!(is_column_adapted(&mat(&[&[1, 1]], 2), &f2));
        assert!(!is_column_adapted(&mat(&[&[0, 0]], 2), &f2));
    }

    #[test]
    fn composition_example() {
        let f2 = aw("F2");
        let ring = f2.ring_arc().clone();
        let f = VicMorphism::new(ring.clone(), mat(&[&[1], &[0]], 1), mat(&[&[1, 0]], 2)).unwrap();
        let g = VicMorphism::new(ring.clone(), mat(&[&[1, 0], &[0, 1], &[0, 0]], 2), mat(&[&[1, 0, 0], &[0, 1, 0]], 3))
            .unwrap();
        let fo = OvicMorphism::new(f.clone(), &f2).unwrap();
        let go = OvicMorphism::new(g.clone(), &f2).unwrap();
        let c = compose_ovic(&go, &fo, &f2).unwrap();
        assert_eq!(c.f_dprime(), &mat(&[&[1, 0, 0]], 3));
        assert_eq!(c.s().sets, vec![vec![0]]);
        let id = VicMorphism::identity(ring.clone(), 2);
        assert_eq!(compose_vic(&id, &f).unwrap(), f);
        assert!(matches!(compose_vic(&f, &f), Err(Error::RankMismatch(_))));
    }

    #[test]
    fn canonical_splitting_examples() {
        let f2 = aw("F2");
        let s = SFunction { sets: vec![vec![0]] };
        assert_eq!(canonical_splitting(&s, &f2, 2, 1).unwrap(), mat(&[&[1], &[0]], 1));
        let s = SFunction { sets: vec![vec![0, 2]] };
        assert_eq!(canonical_splitting(&s, &f2, 3, 2).unwrap(), mat(&[&[1, 0], &[0, 0], &[0, 1]], 2));
        let full = SFunction { sets: vec![vec![0, 1]] };
        assert_eq!(canonical_splitting(&full, &f2, 2, 2).unwrap(), RMatrix::identity(f2.ring(), 2));
        let bad = SFunction { sets: vec![vec![3]] };
        assert!(matches!(canonical_splitting(&bad, &f2, 2, 1), Err(Error::BadShape(_))));
    }

    #[test]
    fn factor_examples() {
        let f3 = aw("F3");
        let ring = f3.ring_arc().clone();
        let f = VicMorphism::new(ring, mat(&[&[2], &[0]], 1), mat(&[&[2, 0]], 2)).unwrap();
        let fac = factor_vic(&f, &f3).unwrap();
        assert_eq!(fac.g, mat(&[&[2]], 1));
        assert_eq!(fac.f1.f_prime(), &mat(&[&[2]], 1));
        assert_eq!(fac.f2.f_prime(), &mat(&[&[1], &[0]], 1));
        assert_eq!(fac.f2.f_dprime(), &mat(&[&[1, 0]], 2));

        let z4 = aw("Z4");
        let f = VicMorphism::new(z4.ring_arc().clone(), mat(&[&[3], &[2]], 1), mat(&[&[3, 2]], 2)).unwrap();
        let fac = factor_vic(&f, &z4).unwrap();
        assert_eq!(fac.g, mat(&[&[3]], 1));
        assert_eq!(fac.f2.f_dprime(), &mat(&[&[1, 2]], 2));

        let o = OvicMorphism::identity(&z4, 2);
        let fac = factor_vic(o.vic(), &z4).unwrap();
        assert!(z4.ring().is_identity(&fac.g));
    }

    #[test]
    fn free_row_examples() {
        let f2 = aw("F2");
        let ring = f2.ring_arc().clone();
        let id = OvicMorphism::identity(&f2, 3);
        assert!(free_rows(&id, &f2).free.is_empty());
        let f =
            OvicMorphism::new(VicMorphism::new(ring.clone(), mat(&[&[1], &[0]], 1), mat(&[&[1, 0]], 2)).unwrap(), &f2)
                .unwrap();
        assert_eq!(free_rows(&f, &f2), RowPartition { free: vec![1], dependent: vec![0] });
        let zero = OvicMorphism::new(
            VicMorphism::new(ring, RMatrix::new(2, 0, vec![]).unwrap(), RMatrix::new(0, 2, vec![]).unwrap()).unwrap(),
            &f2,
        )
        .unwrap();
        assert_eq!(free_rows(&zero, &f2).free, vec![0, 1]);
    }

    #[test]
    fn reconstruct_examples() {
        let f2 = aw("F2");
        let h = mat(&[&[1, 0]], 2);
        let a = reconstruct_from_free(&h, &[vec![0]], &f2).unwrap();
        assert_eq!(a.f_prime(), &mat(&[&[1], &[0]], 1));
        let b = reconstruct_from_free(&h, &[vec![1]], &f2).unwrap();
        assert_eq!(b.f_prime(), &mat(&[&[1], &[1]], 1));
        let id = reconstruct_from_free(&RMatrix::identity(f2.ring(), 2), &[], &f2).unwrap();
        assert_eq!(id, OvicMorphism::identity(&f2, 2));
        assert_eq!(reconstruct_from_free(&mat(&[&[0, 1]], 2), &[vec![0]], &f2).map(|_| ()), Ok(()));
        assert_eq!(
            reconstruct_from_free(&mat(&[&[0, 0]], 2), &[vec![0]], &f2).map(|_| ()),
            Err(Error::NotColumnAdapted)
        );
    }

    #[test]
    fn ovic_counts_over_f2() {
        let f2 = aw("F2");
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_ovic(&f2, 1, n, 1 << 20).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 6, 28, 120]);
        for n in 1..=4 {
            assert_eq!(count_ovic(&f2, 1, n, 1 << 20).unwrap(), counts[n - 1] as u128);
        }
        assert_eq!(enumerate_vic(&f2, 2, 2, 1 << 20).unwrap().len(), 6);
        assert_eq!(enumerate_ovic(&f2, 0, 3, 1 << 20).unwrap().len(), 1);
        assert_eq!(enumerate_vic(&f2, 0, 2, 1 << 20).unwrap().len(), 1);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let z4 = aw("Z4");
        let all = enumerate_ovic(&z4, 1, 2, 1 << 20).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for f in &all {
            let rebuilt = reconstruct_from_free(f.f_dprime(), &free_row_values(f, &z4), &z4).unwrap();
            assert_eq!(&rebuilt, f);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f2 = aw("F2");
        assert!(matches!(enumerate_ovic(&f2, 2, 4, 100), Err(Error::BudgetExceeded { .. })));
        assert!(zmod(4).is_ok());
    }
}
