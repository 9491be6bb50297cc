//! Artin-Wedderburn data for a finite ring and its Peirce embedding.
//!
//! Pipeline: radical, quotient `R/J`, decomposition of the semisimple quotient
//! into blocks of orthogonal primitive idempotents, lifting of that system to
//! `R`, conjugators identifying each `e_i^k R` with `e_1^k R`, and finally the
//! embedding `x -> (a_i^h x b_j^k)` into `mu x mu` matrices whose block
//! `(h, k)` entries lie in `L_hk = e_1^h R e_1^k`.
//!
//! The Peirce matrix ring has identity `diag(e_1^{k(o)})`, not the identity
//! matrix of `Mat_mu(R)`; [`AwEmbedding::unit_at`] gives the diagonal entry
//! at each offset. Everything downstream that says "identity" or "unit
//! vector" on the embedded side means this identity.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ring::{jacobson_radical, FiniteRing, QuotientData, RMatrix};

/// Output of [`semisimple_decompose`]: blocks of orthogonal primitive idempotents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub q: usize,
    pub mu: Vec<usize>,
    pub field_orders: Vec<usize>,
    /// `idempotents[k][i]`, indices in the semisimple ring.
    pub idempotents: Vec<Vec<usize>>,
}

impl Decomposition {
    pub fn mu_total(&self) -> usize {
        self.mu.iter().sum()
    }

    /// `prod_k |D_k|^(mu_k^2)`, the order of `prod_k Mat_{mu_k}(D_k)`.
    pub fn product_count(&self) -> u128 {
        self.mu.iter().zip(&self.field_orders).map(|(&m, &f)| (f as u128).pow((m * m) as u32)).product()
    }

    /// `sum_k |D_k|^(mu_k^2)`.
    pub fn sum_count(&self) -> u128 {
        self.mu.iter().zip(&self.field_orders).map(|(&m, &f)| (f as u128).pow((m * m) as u32)).sum()
    }
}

fn corner(ring: &FiniteRing, e: usize, f: usize) -> Vec<usize> {
    let mut seen = vec![false; ring.size()];
    for x in ring.elements() {
        seen[ring.mul(ring.mul(e, x), f)] = true;
    }
    (0..ring.size()).filter(|&y| seen[y]).collect()
}

/// Finds `a` in `f R e` and `b` in `e R f` with `b a = e` and `a b = f`,
/// i.e. an isomorphism `eR -> fR` of right modules given by `x -> a x`.
fn conjugator_pair(ring: &FiniteRing, e: usize, f: usize) -> Option<(usize, usize)> {
    let fre = corner(ring, f, e);
    let erf = corner(ring, e, f);
    for &a in &fre {
        for &b in &erf {
            if ring.mul(b, a) == e && ring.mul(a, b) == f {
                return Some((a, b));
            }
        }
    }
    None
}

/// Decomposes a semisimple finite ring into matrix blocks over fields.
///
/// Blocks come from the primitive central idempotents; inside a block,
/// primitive idempotents are taken greedily by smallest index below the
/// remaining block identity. Blocks are sorted by `(|D_k|, mu_k, smallest
/// idempotent index)` and idempotents inside a block by index.
pub fn semisimple_decompose(ring: &FiniteRing) -> Result<Decomposition> {
    let rad = jacobson_radical(ring)?;
    if !rad.ideal.is_zero(ring) {
        return Err(Error::NotSemisimple { ring: ring.name().to_string(), radical_size: rad.ideal.len() });
    }
    let zero = ring.zero();
    let idems: Vec<usize> = ring.elements().filter(|&e| ring.is_idempotent(e)).collect();
    let below = |f: usize, e: usize| ring.mul(e, f) == f && ring.mul(f, e) == f;
    let primitive: Vec<usize> = idems
        .iter()
        .copied()
        .filter(|&e| e != zero && !idems.iter().any(|&f| f != zero && f != e && below(f, e)))
        .collect();
    let central: Vec<usize> =
        idems.iter().copied().filter(|&c| ring.elements().all(|x| ring.mul(c, x) == ring.mul(x, c))).collect();
    let blocks: Vec<usize> = central
        .iter()
        .copied()
        .filter(|&c| c != zero && !central.iter().any(|&d| d != zero && d != c && below(d, c)))
        .collect();

    let mut found = Vec::new();
    for &c in &blocks {
        let mut remaining = c;
        let mut list = Vec::new();
        while remaining != zero {
            let e = primitive
                .iter()
                .copied()
                .find(|&e| below(e, remaining))
                .ok_or_else(|| Error::DecompositionFailed(format!("no primitive idempotent below {remaining}")))?;
            list.push(e);
            remaining = ring.sub(remaining, e);
            if list.len() > ring.size() {
                return Err(Error::DecompositionFailed("runaway idempotent search".into()));
            }
        }
        list.sort_unstable();
        let field = corner(ring, list[0], list[0]);
        let e1 = list[0];
        let is_field = field.iter().all(|&x| field.iter().all(|&y| ring.mul(x, y) == ring.mul(y, x)))
            && field.iter().filter(|&&x| x != zero).all(|&x| field.iter().any(|&y| ring.mul(x, y) == e1));
        if !is_field {
            return Err(Error::DecompositionFailed(format!("corner ring of idempotent {e1} is not a field")));
        }
        let block_size = ring.elements().filter(|&x| ring.mul(c, x) == x).count() as u128;
        let expected = (field.len() as u128).pow((list.len() * list.len()) as u32);
        if block_size != expected {
            return Err(Error::DecompositionFailed(format!(
                "block {c} has {block_size} elements, expected {expected}"
            )));
        }
        found.push((field.len(), list));
    }
    found.sort_by_key(|(f, list)| (*f, list.len(), list[0]));

    let dec = Decomposition {
        q: found.len(),
        mu: found.iter().map(|(_, l)| l.len()).collect(),
        field_orders: found.iter().map(|(f, _)| *f).collect(),
        idempotents: found.into_iter().map(|(_, l)| l).collect(),
    };

    let flat: Vec<usize> = dec.idempotents.iter().flatten().copied().collect();
    let total = flat.iter().fold(zero, |acc, &e| ring.add(acc, e));
    if total != ring.one() {
        return Err(Error::DecompositionFailed("idempotents do not sum to 1".into()));
    }
    for (s, &e) in flat.iter().enumerate() {
        for &f in &flat[s + 1..] {
            if ring.mul(e, f) != zero || ring.mul(f, e) != zero {
                return Err(Error::DecompositionFailed(format!("{e} and {f} not orthogonal")));
            }
        }
    }
    // eR ~ fR exactly when e and f sit in the same block.
    for (k, ek) in dec.idempotents.iter().enumerate() {
        for (l, el) in dec.idempotents.iter().enumerate() {
            for &e in ek {
                for &f in el {
                    if conjugator_pair(ring, e, f).is_some() != (k == l) {
                        return Err(Error::DecompositionFailed(format!(
                            "module isomorphism pattern broken for {e}, {f}"
                        )));
                    }
                }
            }
        }
    }
    if dec.product_count() != ring.size() as u128 {
        return Err(Error::DecompositionFailed("block orders do not multiply to |R|".into()));
    }
    Ok(dec)
}

/// Lifts an idempotent of `R/J` to `R`, starting from its section.
pub fn lift_idempotent(q: &QuotientData, ebar: usize) -> Result<usize> {
    let bar = q.quotient();
    if !bar.is_idempotent(ebar) {
        return Err(Error::NotIdempotent(ebar));
    }
    lift_idempotent_from(q, q.section(ebar))
}

/// Newton iteration `x <- 3x^2 - 2x^3` from an arbitrary preimage `x0`.
///
/// Each step keeps the residue mod `J` and doubles the power of `J` that
/// contains `x^2 - x`, so it stops within `ceil(log2 k) + 1` steps when `J^k = 0`.
pub fn lift_idempotent_from(q: &QuotientData, x0: usize) -> Result<usize> {
    let r = q.source();
    if !q.quotient().is_idempotent(q.project(x0)) {
        return Err(Error::NotIdempotent(q.project(x0)));
    }
    let k = q.radical().nilpotency_index;
    let bound = (usize::BITS - (k.max(1) - 1).leading_zeros()) as usize + 1;
    let mut x = x0;
    for _ in 0..=bound {
        if r.is_idempotent(x) {
            return Ok(x);
        }
        let x2 = r.mul(x, x);
        let x3 = r.mul(x2, x);
        x = r.sub(r.times(3, x2), r.times(2, x3));
    }
    if r.is_idempotent(x) {
        Ok(x)
    } else {
        Err(Error::NoConvergence(bound))
    }
}

/// Lifts a complete orthogonal system of idempotents of `R/J`.
///
/// Each idempotent is lifted inside the corner `uRu`, where `u` is one minus
/// the sum of the idempotents already lifted, so the lifts come out orthogonal.
pub fn lift_system(q: &QuotientData, idempotents_bar: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
    let r = q.source();
    let bar = q.quotient();
    let flat: Vec<usize> = idempotents_bar.iter().flatten().copied().collect();
    for &e in &flat {
        if !bar.is_idempotent(e) {
            return Err(Error::NotIdempotent(e));
        }
    }
    let mut u = r.one();
    let mut lifted = Vec::with_capacity(flat.len());
    for &ebar in &flat {
        let x0 = r.mul(r.mul(u, q.section(ebar)), u);
        let e = lift_idempotent_from(q, x0)?;
        lifted.push(e);
        u = r.sub(u, e);
    }
    if u != r.zero() {
        return Err(Error::DecompositionFailed("lifted idempotents do not sum to 1".into()));
    }
    for (s, &e) in lifted.iter().enumerate() {
        if q.project(e) != flat[s] {
            return Err(Error::DecompositionFailed(format!("lift of {} reduces wrongly", flat[s])));
        }
        for &f in &lifted[s + 1..] {
            if r.mul(e, f) != r.zero() || r.mul(f, e) != r.zero() {
                return Err(Error::DecompositionFailed(format!("lifts {e}, {f} not orthogonal")));
            }
        }
    }
    let mut out = Vec::new();
    let mut it = lifted.into_iter();
    for block in idempotents_bar {
        out.push(it.by_ref().take(block.len()).collect());
    }
    Ok(out)
}

/// The field `D_k = e R/J e` inside the quotient ring.
#[derive(Debug, Clone)]
pub struct CornerField {
    pub identity: usize,
    pub elements: Vec<usize>,
    inverse: BTreeMap<usize, usize>,
}

impl CornerField {
    fn new(bar: &FiniteRing, e: usize) -> Self {
        let elements = corner(bar, e, e);
        let inverse =
            elements.iter().filter_map(|&x| elements.iter().find(|&&y| bar.mul(x, y) == e).map(|&y| (x, y))).collect();
        CornerField { identity: e, elements, inverse }
    }

    pub fn inverse(&self, x: usize) -> Option<usize> {
        self.inverse.get(&x).copied()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// An element subset with a membership mask.
#[derive(Debug, Clone)]
pub struct ElementSet {
    pub members: Vec<usize>,
    mask: Vec<bool>,
}

impl ElementSet {
    fn new(size: usize, members: Vec<usize>) -> Self {
        let mut mask = vec![false; size];
        for &m in &members {
            mask[m] = true;
        }
        ElementSet { members, mask }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }
}

/// Flags for the verified properties of an embedding.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AwChecks {
    pub idempotents_complete: bool,
    pub idempotents_lift: bool,
    pub conjugators: bool,
    pub block_fields: bool,
    pub block_count: bool,
    pub unital: bool,
    pub additive: bool,
    pub multiplicative: bool,
    pub injective: bool,
    pub block_pattern: bool,
    pub off_diagonal_in_radical: bool,
    pub module_action: bool,
    /// Whether additivity and multiplicativity were checked on all pairs.
    pub exhaustive: bool,
}

impl AwChecks {
    pub fn all_pass(&self) -> bool {
        self.idempotents_complete
            && self.idempotents_lift
            && self.conjugators
            && self.block_fields
            && self.block_count
            && self.unital
            && self.additive
            && self.multiplicative
            && self.injective
            && self.block_pattern
            && self.off_diagonal_in_radical
            && self.module_action
    }
}

/// The Artin-Wedderburn embedding `R -> Mat_mu(R)` and its supporting data.
#[derive(Debug, Clone)]
pub struct AwEmbedding {
    ring: Arc<FiniteRing>,
    quotient: QuotientData,
    decomposition: Decomposition,
    idempotents: Vec<Vec<usize>>,
    /// Per offset `o` (flattened `(k, i)`): `(a_i^k, b_i^k)`.
    conjugators: Vec<(usize, usize)>,
    block_of: Vec<usize>,
    block_start: Vec<usize>,
    corners: Vec<Vec<ElementSet>>,
    fields: Vec<CornerField>,
    phi_table: Vec<usize>,
}

/// Pairs checked for additivity and multiplicativity above this ring size are sampled.
const EXHAUSTIVE_HOMOMORPHISM_LIMIT: usize = 64;
const SAMPLED_PAIRS: usize = 4096;

pub fn build_aw_embedding(ring: &FiniteRing) -> Result<AwEmbedding> {
    AwEmbedding::new(Arc::new(ring.clone()))
}

impl AwEmbedding {
    pub fn new(ring: Arc<FiniteRing>) -> Result<Self> {
        let quotient = QuotientData::new(ring.clone())?;
        Self::from_quotient(quotient)
    }

    pub fn from_quotient(quotient: QuotientData) -> Result<Self> {
        let ring = quotient.source_arc().clone();
        let r = &*ring;
        let decomposition = semisimple_decompose(quotient.quotient())?;
        let idempotents = lift_system(&quotient, &decomposition.idempotents)?;

        let mut conjugators = Vec::new();
        let mut block_of = Vec::new();
        let mut block_start = Vec::new();
        for (k, block) in idempotents.iter().enumerate() {
            block_start.push(block_of.len());
            let e1 = block[0];
            for (i, &ei) in block.iter().enumerate() {
                block_of.push(k);
                if i == 0 {
                    conjugators.push((e1, e1));
                    continue;
                }
                // a in e1 R ei, b in ei R e1, a b = e1, b a = ei
                let (b, a) = conjugator_pair(r, e1, ei).ok_or(Error::ConjugatorNotFound { block: k, index: i })?;
                conjugators.push((a, b));
            }
        }
        let q = idempotents.len();
        let corners = (0..q)
            .map(|h| {
                (0..q).map(|k| ElementSet::new(r.size(), corner(r, idempotents[h][0], idempotents[k][0]))).collect()
            })
            .collect();
        let fields = decomposition.idempotents.iter().map(|b| CornerField::new(quotient.quotient(), b[0])).collect();
        let mu = conjugators.len();
        let mut phi_table = Vec::with_capacity(r.size() * mu * mu);
        for x in r.elements() {
            for o1 in 0..mu {
                for o2 in 0..mu {
                    phi_table.push(r.mul(r.mul(conjugators[o1].0, x), conjugators[o2].1));
                }
            }
        }
        let emb = AwEmbedding {
            ring,
            quotient,
            decomposition,
            idempotents,
            conjugators,
            block_of,
            block_start,
            corners,
            fields,
            phi_table,
        };
        let checks = emb.verify(0);
        if !checks.all_pass() {
            return Err(Error::CounterexampleFound(format!(
                "embedding of {} failed its checks: {checks:?}",
                emb.ring.name()
            )));
        }
        Ok(emb)
    }

    pub fn ring(&self) -> &FiniteRing {
        &self.ring
    }

    pub fn ring_arc(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn quotient(&self) -> &QuotientData {
        &self.quotient
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    /// Number of blocks `q`.
    pub fn q(&self) -> usize {
        self.idempotents.len()
    }

    /// `mu_k` for each block.
    pub fn mu_blocks(&self) -> &[usize] {
        &self.decomposition.mu
    }

    /// `mu = mu_1 + ... + mu_q`.
    pub fn mu(&self) -> usize {
        self.block_of.len()
    }

    pub fn idempotents(&self) -> &[Vec<usize>] {
        &self.idempotents
    }

    pub fn conjugators(&self) -> &[(usize, usize)] {
        &self.conjugators
    }

    /// Block of the offset `o` inside a `mu`-band.
    pub fn block_of(&self, o: usize) -> usize {
        self.block_of[o]
    }

    /// First offset of block `k` inside a `mu`-band.
    pub fn block_start(&self, k: usize) -> usize {
        self.block_start[k]
    }

    /// `L_hk = e_1^h R e_1^k`.
    pub fn corner(&self, h: usize, k: usize) -> &ElementSet {
        &self.corners[h][k]
    }

    pub fn field(&self, k: usize) -> &CornerField {
        &self.fields[k]
    }

    /// Identity of the Peirce matrix ring at diagonal offset `o`: `e_1^{k(o)}`.
    pub fn unit_at(&self, o: usize) -> usize {
        self.idempotents[self.block_of[o]][0]
    }

    #[inline]
    pub fn phi_entry(&self, x: usize, o1: usize, o2: usize) -> usize {
        let mu = self.mu();
        self.phi_table[x * mu * mu + o1 * mu + o2]
    }

    pub fn phi(&self, x: usize) -> RMatrix {
        let mu = self.mu();
        RMatrix::new(mu, mu, self.phi_table[x * mu * mu..(x + 1) * mu * mu].to_vec()).expect("phi block shape")
    }

    /// Entrywise embedding of an `n x m` matrix into a `mu n x mu m` matrix.
    pub fn phi_matrix(&self, m: &RMatrix) -> RMatrix {
        let mu = self.mu();
        let (rows, cols) = (m.rows() * mu, m.cols() * mu);
        let mut entries = vec![0; rows * cols];
        for t in 0..m.rows() {
            for s in 0..m.cols() {
                let x = m.get(t, s);
                for o1 in 0..mu {
                    for o2 in 0..mu {
                        entries[(t * mu + o1) * cols + s * mu + o2] = self.phi_entry(x, o1, o2);
                    }
                }
            }
        }
        RMatrix::new(rows, cols, entries).expect("phi shape")
    }

    /// `Phi(I_n)`, the identity of `mu n x mu n` Peirce matrices.
    pub fn peirce_identity(&self, n: usize) -> RMatrix {
        let mu = self.mu();
        let mut m = RMatrix::zeros(&self.ring, mu * n, mu * n);
        for p in 0..mu * n {
            m.set(p, p, self.unit_at(p % mu));
        }
        m
    }

    /// Inverse of `phi` on a single `mu x mu` block, if the block is in the image.
    pub fn recover_element(&self, block: &[usize]) -> Option<usize> {
        let r = &*self.ring;
        let mu = self.mu();
        let mut x = r.zero();
        for o1 in 0..mu {
            for o2 in 0..mu {
                let term = r.mul(r.mul(self.conjugators[o1].1, block[o1 * mu + o2]), self.conjugators[o2].0);
                x = r.add(x, term);
            }
        }
        (self.phi_table[x * mu * mu..(x + 1) * mu * mu] == *block).then_some(x)
    }

    /// Inverse of [`phi_matrix`](Self::phi_matrix) on its image.
    pub fn recover(&self, m: &RMatrix) -> Result<RMatrix> {
        let mu = self.mu();
        if !m.rows().is_multiple_of(mu) || !m.cols().is_multiple_of(mu) {
            return Err(Error::BadShape(format!("{}x{} is not a multiple of mu = {mu}", m.rows(), m.cols())));
        }
        let (n, c) = (m.rows() / mu, m.cols() / mu);
        let mut out = RMatrix::zeros(&self.ring, n, c);
        let mut block = vec![0; mu * mu];
        for t in 0..n {
            for s in 0..c {
                for o1 in 0..mu {
                    for o2 in 0..mu {
                        block[o1 * mu + o2] = m.get(t * mu + o1, s * mu + o2);
                    }
                }
                out.set(t, s, self.recover_element(&block).ok_or(Error::RecoverOutsideImage)?);
            }
        }
        Ok(out)
    }

    /// `psi(y)_o = a_o y`: the coordinates of `y` in `R_R = (+) e_i R`,
    /// transported to `e_1^k R`.
    pub fn psi(&self, y: usize) -> Vec<usize> {
        self.conjugators.iter().map(|&(a, _)| self.ring.mul(a, y)).collect()
    }

    /// Checks every structural property. Additivity and multiplicativity are
    /// checked on all pairs for rings of at most 64 elements, otherwise on
    /// seeded random pairs.
    pub fn verify(&self, seed: u64) -> AwChecks {
        let r = &*self.ring;
        let q = &self.quotient;
        let mu = self.mu();
        let flat: Vec<usize> = self.idempotents.iter().flatten().copied().collect();
        let flat_bar: Vec<usize> = self.decomposition.idempotents.iter().flatten().copied().collect();

        let idempotents_complete = flat.iter().fold(r.zero(), |acc, &e| r.add(acc, e)) == r.one()
            && flat.iter().all(|&e| r.is_idempotent(e))
            && flat
                .iter()
                .enumerate()
                .all(|(s, &e)| flat.iter().enumerate().all(|(t, &f)| s == t || r.mul(e, f) == r.zero()));
        let idempotents_lift = flat.iter().zip(&flat_bar).all(|(&e, &eb)| q.project(e) == eb);
        let conjugators = (0..mu).all(|o| {
            let (a, b) = self.conjugators[o];
            let k = self.block_of[o];
            let e1 = self.idempotents[k][0];
            let ei = flat[o];
            r.mul(a, b) == e1 && r.mul(b, a) == ei && r.mul(r.mul(e1, a), ei) == a && r.mul(r.mul(ei, b), e1) == b
        });
        let block_fields = (0..self.q()).all(|k| {
            let f = &self.fields[k];
            f.order() == self.decomposition.field_orders[k]
                && f.elements.iter().filter(|&&x| x != q.quotient().zero()).all(|&x| f.inverse(x).is_some())
        }) && (0..self.q()).all(|h| {
            (0..self.q()).all(|k| h == k || self.corners[h][k].members.iter().all(|&x| q.ideal().contains(x)))
        });
        let block_count = self.decomposition.product_count() == q.quotient().size() as u128;

        let unital = self.phi(r.one()) == self.peirce_identity(1);
        let block_pattern = r.elements().all(|x| {
            (0..mu).all(|o1| {
                (0..mu).all(|o2| self.corners[self.block_of[o1]][self.block_of[o2]].contains(self.phi_entry(x, o1, o2)))
            })
        });
        let off_diagonal_in_radical = r.elements().all(|x| {
            (0..mu).all(|o1| {
                (0..mu)
                    .all(|o2| self.block_of[o1] == self.block_of[o2] || q.ideal().contains(self.phi_entry(x, o1, o2)))
            })
        });
        let mut seen = std::collections::HashSet::new();
        let injective = r.elements().all(|x| seen.insert(self.phi(x)))
            && r.elements().all(|x| self.recover_element(self.phi(x).entries()) == Some(x));

        let exhaustive = r.size() <= EXHAUSTIVE_HOMOMORPHISM_LIMIT;
        let pairs: Vec<(usize, usize)> = if exhaustive {
            r.elements().flat_map(|x| r.elements().map(move |y| (x, y))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..r.size()), rng.gen_range(0..r.size()))).collect()
        };
        let mut additive = true;
        let mut multiplicative = true;
        let mut module_action = true;
        for &(x, y) in &pairs {
            let (px, py) = (self.phi(x), self.phi(y));
            additive &= r.mat_add(&px, &py).ok() == Some(self.phi(r.add(x, y)));
            multiplicative &= r.mat_mul(&px, &py).ok() == Some(self.phi(r.mul(x, y)));
            module_action &= r.mat_vec(&px, &self.psi(y)) == self.psi(r.mul(x, y));
        }
        AwChecks {
            idempotents_complete,
            idempotents_lift,
            conjugators,
            block_fields,
            block_count,
            unital,
            additive,
            multiplicative,
            injective,
            block_pattern,
            off_diagonal_in_radical,
            module_action,
            exhaustive,
        }
    }

    pub fn report(&self) -> AwReport {
        let d = &self.decomposition;
        AwReport {
            ring: self.ring.name().to_string(),
            size: self.ring.size(),
            radical: self.quotient.ideal().members().to_vec(),
            nilpotency_index: self.quotient.radical().nilpotency_index,
            quotient_size: self.quotient.quotient().size(),
            q: d.q,
            mu_blocks: d.mu.clone(),
            mu: self.mu(),
            field_orders: d.field_orders.clone(),
            idempotents_bar: d.idempotents.clone(),
            idempotents: self.idempotents.clone(),
            conjugators: self.conjugators.clone(),
            checks: self.verify(0),
        }
    }
}

/// The `aw-report` JSON payload.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AwReport {
    pub ring: String,
    pub size: usize,
    pub radical: Vec<usize>,
    pub nilpotency_index: usize,
    pub quotient_size: usize,
    pub q: usize,
    pub mu_blocks: Vec<usize>,
    pub mu: usize,
    pub field_orders: Vec<usize>,
    pub idempotents_bar: Vec<Vec<usize>>,
    pub idempotents: Vec<Vec<usize>>,
    pub conjugators: Vec<(usize, usize)>,
    pub checks: AwChecks,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{builtin, matrix_ring, quotient_by_radical, zmod};

    #[test]
    fn z4_quotient_is_one_block() {
        let r = zmod(4).unwrap();
        let q = quotient_by_radical(&r).unwrap();
        let d = semisimple_decompose(q.quotient()).unwrap();
        assert_eq!((d.q, d.mu.clone(), d.field_orders.clone()), (1, vec![1], vec![2]));
    }

    #[test]
    fn t2f2_quotient_is_two_fields() {
        let r = builtin("T2F2").unwrap();
        let q = quotient_by_radical(&r).unwrap();
        let d = semisimple_decompose(q.quotient()).unwrap();
        assert_eq!((d.q, d.mu.clone(), d.field_orders.clone()), (2, vec![1, 1], vec![2, 2]));
        // images of E11 = (1,0,0) and E22 = (0,0,1)
        let e11 = q.project(4);
        let e22 = q.project(1);
        assert_eq!(d.idempotents, vec![vec![e22.min(e11)], vec![e22.max(e11)]]);
    }

    #[test]
    fn m2f2_is_a_single_matrix_block() {
        let r = builtin("M2F2").unwrap();
        let d = semisimple_decompose(&r).unwrap();
        assert_eq!((d.q, d.mu.clone(), d.field_orders.clone()), (1, vec![2], vec![2]));
        assert_eq!(d.product_count(), 16);
    }

    #[test]
    fn decompose_rejects_nonsemisimple() {
        let r = zmod(4).unwrap();
        assert!(matches!(semisimple_decompose(&r), Err(Error::NotSemisimple { .. })));
    }

    #[test]
    fn trivial_lifts() {
        let r = zmod(4).unwrap();
        let q = quotient_by_radical(&r).unwrap();
        assert_eq!(lift_idempotent(&q, q.project(1)).unwrap(), 1);
        assert_eq!(lift_idempotent(&q, q.project(0)).unwrap(), 0);
        assert_eq!(lift_system(&q, &[vec![q.project(1)]]).unwrap(), vec![vec![1]]);
    }

    #[test]
    fn lift_from_non_idempotent_preimage() {
        let z4 = zmod(4).unwrap();
        let m = matrix_ring(&z4, 2).unwrap();
        let q = quotient_by_radical(&m).unwrap();
        // 3*E11 = coordinates (3,0,0,0); its square is E11.
        let x0 = 3 * 64;
        assert!(!m.is_idempotent(x0));
        let e = lift_idempotent_from(&q, x0).unwrap();
        assert!(m.is_idempotent(e));
        assert_eq!(q.project(e), q.project(x0));
        // oracle: e lies among the idempotents of the coset x0 + Mat(J)
        let coset_idems: Vec<usize> =
            m.elements().filter(|&y| q.project(y) == q.project(x0) && m.is_idempotent(y)).collect();
        assert!(coset_idems.contains(&e));
    }

    #[test]
    fn lift_rejects_non_idempotent() {
        let z9 = zmod(9).unwrap();
        let q9 = quotient_by_radical(&z9).unwrap();
        assert!(matches!(lift_idempotent(&q9, q9.project(2)), Err(Error::NotIdempotent(_))));
        assert!(matches!(lift_idempotent_from(&q9, 2), Err(Error::NotIdempotent(_))));
    }

    #[test]
    fn semisimple_lift_is_section() {
        let r = builtin("M2F2").unwrap();
        let q = quotient_by_radical(&r).unwrap();
        let d = semisimple_decompose(q.quotient()).unwrap();
        let lifted = lift_system(&q, &d.idempotents).unwrap();
        let sec: Vec<Vec<usize>> = d.idempotents.iter().map(|b| b.iter().map(|&e| q.section(e)).collect()).collect();
        assert_eq!(lifted, sec);
    }

    #[test]
    fn embeddings_of_small_rings() {
        for name in ["F2", "Z4"] {
            let emb = build_aw_embedding(&builtin(name).unwrap()).unwrap();
            assert_eq!(emb.mu(), 1);
            for x in emb.ring().elements() {
                assert_eq!(emb.phi(x).entries(), &[x]);
            }
        }
    }

    #[test]
    fn t2f2_embedding_places_e12_off_diagonal() {
        let r = builtin("T2F2").unwrap();
        let emb = build_aw_embedding(&r).unwrap();
        assert_eq!(emb.mu(), 2);
        let e12 = 2;
        let p = emb.phi(e12);
        let nonzero: Vec<(usize, usize)> =
            (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).filter(|&(i, j)| p.get(i, j) != r.zero()).collect();
        assert_eq!(nonzero.len(), 1);
        let (i, j) = nonzero[0];
        assert_ne!(emb.block_of(i), emb.block_of(j));
        assert!(emb.quotient().ideal().contains(p.get(i, j)));
    }

    #[test]
    fn every_builtin_embeds() {
        for r in crate::ring::builtin_rings().unwrap() {
            let emb = build_aw_embedding(&r).unwrap();
            let checks = emb.verify(1);
            assert!(checks.all_pass(), "{}: {checks:?}", r.name());
        }
    }

    #[test]
    fn recover_rejects_outside_image() {
        let r = builtin("T2F2").unwrap();
        let emb = build_aw_embedding(&r).unwrap();
        // the all-ones Peirce matrix puts a unit in a corner that cannot hold it
        let m = RMatrix::filled(2, 2, r.one());
        assert_eq!(emb.recover(&m), Err(Error::RecoverOutsideImage));
        let bad_shape = RMatrix::zeros(&r, 3, 2);
        assert!(matches!(emb.recover(&bad_shape), Err(Error::BadShape(_))));
    }
}
