//! Orders on `P(d)`, the ordered morphisms out of `R^d`: the total order, the
//! insertion partial order, the word embedding and the morphisms `phi`
//! realizing `f <= g` as `g = phi o f`.
//!
//! Insertion moves use 1-based `(a, b)` with `1 <= a <= b <= n`: column `a`
//! of `f''` is copied to just after column `b`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ovic::{
    canonical_splitting, compose_ovic, compose_vic, reconstruct_from_free, DistinguishedIndexer, HomCache,
    OvicMorphism, VicMorphism,
};
use crate::ring::RMatrix;
use crate::wedderburn::AwEmbedding;

/// Default node cap for [`partial_leq`].
pub const DEFAULT_NODE_CAP: usize = 1_000_000;

pub fn total_compare(f: &OvicMorphism, g: &OvicMorphism) -> Result<Ordering> {
    if f.d() != g.d() {
        return Err(Error::SourceMismatch(f.d(), g.d()));
    }
    Ok(f.key().cmp(g.key()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InsertionMove {
    pub a: usize,
    pub b: usize,
}

impl InsertionMove {
    pub fn new(a: usize, b: usize) -> Self {
        InsertionMove { a, b }
    }
}

/// Checks range and that the `mu` columns of `Phi(h'')` under column `a`
/// avoid every pivot column.
pub fn validate_move(h: &OvicMorphism, mv: InsertionMove, aw: &AwEmbedding) -> Result<()> {
    let n = h.n();
    let invalid = Error::InvalidMove { a: mv.a, b: mv.b, n };
    if mv.a < 1 || mv.a > mv.b || mv.b > n {
        return Err(invalid);
    }
    let mu = aw.mu();
    let idx = DistinguishedIndexer::new(aw, n);
    let band = (mv.a - 1) * mu..mv.a * mu;
    if h.s().pivot_positions(&idx).iter().any(|p| band.contains(p)) {
        return Err(invalid);
    }
    Ok(())
}

/// All valid moves out of `h`, ascending in `(a, b)`.
pub fn valid_moves(h: &OvicMorphism, aw: &AwEmbedding) -> Vec<InsertionMove> {
    let n = h.n();
    (1..=n)
        .flat_map(|a| (a..=n).map(move |b| InsertionMove::new(a, b)))
        .filter(|&mv| validate_move(h, mv, aw).is_ok())
        .collect()
}

/// One insertion step `h -> h_1` of rank one higher.
pub fn insert_successor(h: &OvicMorphism, mv: InsertionMove, aw: &AwEmbedding) -> Result<OvicMorphism> {
    validate_move(h, mv, aw)?;
    let (a, b) = (mv.a - 1, mv.b);
    let col = h.f_dprime().column(a);
    let g_dprime = h.f_dprime().insert_column(b, &col);
    let g_prime = h.f_prime().insert_row(b, h.f_prime().row(a));
    let n1 = h.n() + 1;
    let s = crate::ovic::column_adapted_s(&g_dprime, aw).ok_or(Error::NotColumnAdapted)?;
    let dependent = s.pivot_positions(&DistinguishedIndexer::new(aw, n1));
    let phi = aw.phi_matrix(&g_prime);
    let free: Vec<Vec<usize>> =
        (0..aw.mu() * n1).filter(|p| dependent.binary_search(p).is_err()).map(|p| phi.row(p).to_vec()).collect();
    reconstruct_from_free(&g_dprime, &free, aw)
}

/// True when the columns of `small` occur, in order, among those of `big`.
fn columns_embed(small: &RMatrix, big: &RMatrix) -> bool {
    let mut j = 0;
    for c in 0..small.cols() {
        let col = small.column(c);
        while j < big.cols() && big.column(j) != col {
            j += 1;
        }
        if j == big.cols() {
            return false;
        }
        j += 1;
    }
    true
}

/// Decides `f <= g` in the insertion order, returning a witnessing chain of
/// moves. Search is depth-first over moves in ascending order with failed
/// states memoized; more than `node_cap` expansions gives `SearchBudgetExceeded`.
pub fn partial_leq(
    f: &OvicMorphism,
    g: &OvicMorphism,
    aw: &AwEmbedding,
    node_cap: usize,
) -> Result<Option<Vec<InsertionMove>>> {
    if f.d() != g.d() {
        return Err(Error::SourceMismatch(f.d(), g.d()));
    }
    if f.n() > g.n() {
        return Ok(None);
    }
    let mut dead = HashSet::new();
    let mut nodes = 0usize;
    let mut chain = Vec::new();
    if search(f, g, aw, node_cap, &mut nodes, &mut dead, &mut chain)? {
        Ok(Some(chain))
    } else {
        Ok(None)
    }
}

fn search(
    h: &OvicMorphism,
    g: &OvicMorphism,
    aw: &AwEmbedding,
    cap: usize,
    nodes: &mut usize,
    dead: &mut HashSet<(RMatrix, RMatrix)>,
    chain: &mut Vec<InsertionMove>,
) -> Result<bool> {
    if h.n() == g.n() {
        return Ok(h == g);
    }
    let state = (h.f_prime().clone(), h.f_dprime().clone());
    if dead.contains(&state) || !columns_embed(h.f_dprime(), g.f_dprime()) {
        return Ok(false);
    }
    *nodes += 1;
    if *nodes > cap {
        return Err(Error::SearchBudgetExceeded(cap));
    }
    for mv in valid_moves(h, aw) {
        let next = insert_successor(h, mv, aw)?;
        chain.push(mv);
        if search(&next, g, aw, cap, nodes, dead, chain)? {
            return Ok(true);
        }
        chain.pop();
    }
    dead.insert(state);
    Ok(false)
}

/// A letter `(M1, M2)`: a `mu x mu d` band of `Phi(f')` with dependent rows
/// masked (`None`), and a column of `f''`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub rows: usize,
    pub cols: usize,
    pub m1: Vec<Option<usize>>,
    pub m2: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// JSON form with the string `"club"` at masked entries.
    pub fn to_json(&self) -> Value {
        let letters: Vec<Value> = self
            .letters
            .iter()
            .map(|l| {
                let m1: Vec<Vec<Value>> = (0..l.rows)
                    .map(|i| {
                        l.m1[i * l.cols..(i + 1) * l.cols]
                            .iter()
                            .map(|e| e.map_or_else(|| json!("club"), |x| json!(x)))
                            .collect()
                    })
                    .collect();
                json!({ "m1": m1, "m2": l.m2 })
            })
            .collect();
        Value::Array(letters)
    }
}

pub fn iota(f: &OvicMorphism, aw: &AwEmbedding) -> Word {
    let mu = aw.mu();
    let d = f.d();
    let phi = aw.phi_matrix(f.f_prime());
    let dependent = f.s().pivot_positions(&DistinguishedIndexer::new(aw, f.n()));
    let letters = (0..f.n())
        .map(|t| {
            let mut m1 = Vec::with_capacity(mu * mu * d);
            for p in t * mu..(t + 1) * mu {
                let masked = dependent.binary_search(&p).is_ok();
                m1.extend(phi.row(p).iter().map(|&x| (!masked).then_some(x)));
            }
            Letter { rows: mu, cols: mu * d, m1, m2: f.f_dprime().column(t) }
        })
        .collect();
    Word { letters }
}

/// The word order: `s <= t` when some strictly increasing `f` has
/// `s_i = t_{f(i)}` and every `t_j` equals a matched letter at or before `j`.
///
/// After matching `s_1..s_i` the letters matched so far are exactly
/// `{s_1, .., s_i}`, so a position `t_j` may be skipped iff it is among them.
pub fn word_leq<T: Eq>(s: &[T], t: &[T]) -> bool {
    let n = s.len();
    // reach[i]: first i letters of s matched after the current prefix of t
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for tj in t {
        let mut next = vec![false; n + 1];
        for i in 0..=n {
            if !reach[i] {
                continue;
            }
            if i < n && s[i] == *tj {
                next[i + 1] = true;
            }
            if s[..i].contains(tj) {
                next[i] = true;
            }
        }
        reach = next;
    }
    reach[n]
}

/// The single-step `phi: R^n -> R^(n+1)` for a move `(a, b)` out of `f`.
///
/// With `psi` the canonical splitting of `f''` and `c_hat = psi(c)` for the
/// column `c` of `f''` at `a`: `phi''` is `I_n` with `c_hat` inserted after
/// column `b`; `phi'` is `I_n` with column `a` replaced by `e_a - c_hat`,
/// then the row `e_a^T` inserted after row `b`.
pub fn elementary_phi(f: &OvicMorphism, mv: InsertionMove, aw: &AwEmbedding) -> Result<OvicMorphism> {
    validate_move(f, mv, aw)?;
    let r = aw.ring();
    let (n, d) = (f.n(), f.d());
    let psi = canonical_splitting(f.s(), aw, n, d)?;
    let c = f.f_dprime().column(mv.a - 1);
    let c_hat = r.mat_vec(&psi, &c);
    let id = RMatrix::identity(r, n);
    let phi_dprime = id.insert_column(mv.b, &c_hat);
    let mut phi_prime = id;
    for (i, &x) in c_hat.iter().enumerate() {
        phi_prime.set(i, mv.a - 1, r.sub(phi_prime.get(i, mv.a - 1), x));
    }
    let mut unit = vec![r.zero(); n];
    unit[mv.a - 1] = r.one();
    let phi_prime = phi_prime.insert_row(mv.b, &unit);
    let vic = VicMorphism::new(aw.ring_arc().clone(), phi_prime, phi_dprime)?;
    OvicMorphism::new(vic, aw)
}

/// Output of [`build_phi`].
#[derive(Debug, Clone)]
pub struct PhiConstruction {
    pub phi: OvicMorphism,
    pub target: OvicMorphism,
    pub steps: Vec<OvicMorphism>,
}

/// Composes one elementary step per move, checking after each step that the
/// step carries the current morphism to its insertion successor.
pub fn build_phi(f: &OvicMorphism, chain: &[InsertionMove], aw: &AwEmbedding) -> Result<PhiConstruction> {
    let mut current = f.clone();
    let mut phi = OvicMorphism::identity(aw, f.n());
    let mut steps = Vec::with_capacity(chain.len());
    for (i, &mv) in chain.iter().enumerate() {
        let step = elementary_phi(&current, mv, aw)
            .map_err(|e| Error::InvalidChain(format!("move {i} ({}, {}): {e}", mv.a, mv.b)))?;
        let next = insert_successor(&current, mv, aw)?;
        if compose_vic(step.vic(), current.vic())? != *next.vic() {
            return Err(Error::CounterexampleFound(format!("step {i} does not reach the successor")));
        }
        phi = compose_ovic(&step, &phi, aw)?;
        steps.push(step);
        current = next;
    }
    if compose_vic(phi.vic(), f.vic())? != *current.vic() {
        return Err(Error::CounterexampleFound("phi o f differs from the chain target".into()));
    }
    Ok(PhiConstruction { phi, target: current, steps })
}

/// Lazily enumerated strata of `P(d)`.
#[derive(Debug)]
pub struct GeneratorPool<'a> {
    aw: &'a AwEmbedding,
    d: usize,
    cache: Arc<HomCache>,
}

impl<'a> GeneratorPool<'a> {
    pub fn new(aw: &'a AwEmbedding, d: usize, cache: Arc<HomCache>) -> Self {
        GeneratorPool { aw, d, cache }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn stratum(&self, n: usize) -> Result<Arc<Vec<OvicMorphism>>> {
        self.cache.get(self.aw, self.d, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::builtin;
    use crate::wedderburn::build_aw_embedding;

    fn aw(name: &str) -> AwEmbedding {
        build_aw_embedding(&builtin(name).unwrap()).unwrap()
    }

    fn mat(rows: &[&[usize]], cols: usize) -> RMatrix {
        RMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), cols).unwrap()
    }

    fn ovic(aw: &AwEmbedding, fp: RMatrix, fd: RMatrix) -> OvicMorphism {
        OvicMorphism::new(VicMorphism::new(aw.ring_arc().clone(), fp, fd).unwrap(), aw).unwrap()
    }

    #[test]
    fn total_order_examples() {
        let f2 = aw("F2");
        let a = ovic(&f2, mat(&[&[1]], 1), mat(&[&[1]], 1));
        let b = ovic(&f2, mat(&[&[1], &[0]], 1), mat(&[&[1, 0]], 2));
        let c = ovic(&f2, mat(&[&[0], &[1]], 1), mat(&[&[0, 1]], 2));
        assert_eq!(total_compare(&a, &b).unwrap(), Ordering::Less);
        assert_eq!(total_compare(&b, &c).unwrap(), Ordering::Less);
        assert_eq!(total_compare(&b, &b).unwrap(), Ordering::Equal);
        let z = OvicMorphism::identity(&f2, 0);
        assert!(matches!(total_compare(&z, &a), Err(Error::SourceMismatch(0, 1))));
    }

    #[test]
    fn insertion_examples() {
        let f2 = aw("F2");
        let h = ovic(&f2, mat(&[&[1], &[0]], 1), mat(&[&[1, 0]], 2));
        let g = insert_successor(&h, InsertionMove::new(2, 2), &f2).unwrap();
        assert_eq!(g.f_dprime(), &mat(&[&[1, 0, 0]], 3));
        assert_eq!(g.f_prime(), &mat(&[&[1], &[0], &[0]], 1));
        assert!(matches!(
            insert_successor(&h, InsertionMove::new(1, 2), &f2),
            Err(Error::InvalidMove { a: 1, b: 2, n: 2 })
        ));
        assert!(matches!(insert_successor(&h, InsertionMove::new(2, 3), &f2), Err(Error::InvalidMove { .. })));
        let z = ovic(&f2, RMatrix::new(2, 0, vec![]).unwrap(), RMatrix::new(0, 2, vec![]).unwrap());
        let up = insert_successor(&z, InsertionMove::new(1, 2), &f2).unwrap();
        assert_eq!((up.d(), up.n()), (0, 3));
    }

    #[test]
    fn partial_order_examples() {
        let f2 = aw("F2");
        let f = ovic(&f2, mat(&[&[1], &[0]], 1), mat(&[&[1, 0]], 2));
        let g = ovic(&f2, mat(&[&[0], &[1]], 1), mat(&[&[0, 1]], 2));
        assert_eq!(partial_leq(&f, &f, &f2, DEFAULT_NODE_CAP).unwrap(), Some(vec![]));
        assert_eq!(partial_leq(&f, &g, &f2, DEFAULT_NODE_CAP).unwrap(), None);
        let mv = InsertionMove::new(2, 2);
        let up = insert_successor(&f, mv, &f2).unwrap();
        assert_eq!(partial_leq(&f, &up, &f2, DEFAULT_NODE_CAP).unwrap(), Some(vec![mv]));
        assert_eq!(partial_leq(&up, &f, &f2, DEFAULT_NODE_CAP).unwrap(), None);
    }

    #[test]
    fn iota_examples() {
        let f2 = aw("F2");
        let f = ovic(&f2, mat(&[&[1], &[1]], 1), mat(&[&[1, 0]], 2));
        let w = iota(&f, &f2);
        assert_eq!(w.letters[0].m1, vec![None]);
        assert_eq!(w.letters[0].m2, vec![1]);
        assert_eq!(w.letters[1].m1, vec![Some(1)]);
        assert_eq!(w.letters[1].m2, vec![0]);
        let id = iota(&OvicMorphism::identity(&f2, 3), &f2);
        assert_eq!(id.len(), 3);
        assert!(id.letters.iter().all(|l| l.m1.iter().all(Option::is_none)));
        let z = ovic(&f2, RMatrix::new(2, 0, vec![]).unwrap(), RMatrix::new(0, 2, vec![]).unwrap());
        assert!(iota(&z, &f2).letters.iter().all(|l| l.m2.is_empty()));
        assert_eq!(w.to_json()[0]["m1"][0][0], json!("club"));
    }

    #[test]
    fn word_order_examples() {
        let w = |s: &str| s.chars().collect::<Vec<_>>();
        assert!(word_leq(&w("ab"), &w("aab")));
        assert!(!word_leq(&w("a"), &w("ba")));
        assert!(word_leq(&w(""), &w("")));
        assert!(!word_leq(&w(""), &w("a")));
        assert!(word_leq(&w("ab"), &w("abab")));
        assert!(!word_leq(&w("ab"), &w("ba")));
    }

    #[test]
    fn worked_phi_example() {
        let z4 = aw("Z4");
        let fd = mat(&[&[1, 0, 3, 0, 0, 0, 0]], 7);
        let fp = mat(&[&[1], &[0], &[0], &[0], &[0], &[0], &[0]], 1);
        let f = ovic(&z4, fp, fd);
        let mv = InsertionMove::new(3, 4);
        let phi = elementary_phi(&f, mv, &z4).unwrap();
        let r = z4.ring();
        let c_hat = vec![3, 0, 0, 0, 0, 0, 0];
        assert_eq!((phi.f_dprime().rows(), phi.f_dprime().cols()), (7, 8));
        assert_eq!(phi.f_dprime().column(4), c_hat);
        for i in 0..7 {
            for j in 0..8 {
                if j != 4 {
                    let jj = if j < 4 { j } else { j - 1 };
                    assert_eq!(phi.f_dprime().get(i, j), if i == jj { 1 } else { 0 });
                }
            }
        }
        assert_eq!((phi.f_prime().rows(), phi.f_prime().cols()), (8, 7));
        assert_eq!(phi.f_prime().row(4), &[0, 0, 1, 0, 0, 0, 0]);
        for i in 0..8 {
            if i == 4 {
                continue;
            }
            let ii = if i < 4 { i } else { i - 1 };
            for j in 0..7 {
                let base = if ii == j { 1 } else { 0 };
                let want = if j == 2 { r.sub(base, c_hat[ii]) } else { base };
                assert_eq!(phi.f_prime().get(i, j), want, "entry ({i}, {j})");
            }
        }
        let built = build_phi(&f, &[mv], &z4).unwrap();
        assert_eq!(built.phi, phi);
        assert_eq!(built.target, insert_successor(&f, mv, &z4).unwrap());
    }

    #[test]
    fn empty_chain_gives_identity() {
        let f2 = aw("F2");
        let f = ovic(&f2, mat(&[&[1], &[0]], 1), mat(&[&[1, 0]], 2));
        let built = build_phi(&f, &[], &f2).unwrap();
        assert_eq!(built.phi, OvicMorphism::identity(&f2, 2));
        assert_eq!(built.target, f);
    }

    #[test]
    fn phi_is_monotone_on_small_stratum() {
        let f2 = aw("F2");
        let cache = Arc::new(HomCache::new(1 << 20));
        let pool = GeneratorPool::new(&f2, 1, cache);
        let stratum = pool.stratum(2).unwrap();
        let f = ovic(&f2, mat(&[&[1], &[0]], 1), mat(&[&[1, 0]], 2));
        let built = build_phi(&f, &[InsertionMove::new(2, 2)], &f2).unwrap();
        let image = compose_ovic(&built.phi, &f, &f2).unwrap();
        for h in stratum.iter().filter(|h| *h < &f) {
            assert!(compose_ovic(&built.phi, h, &f2).unwrap() < image);
        }
    }
}
