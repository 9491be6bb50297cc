//! Acceptance suites: one runner per criterion, each cross-checking the
//! library against the brute-force references in [`crate::oracle`].

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::noether::{check_endo_generation, span_to_degree, CoefficientField, ModuleElement, SubmoduleState};
use crate::oracle;
use crate::ordering::{build_phi, iota, partial_leq, total_compare, word_leq, DEFAULT_NODE_CAP};
use crate::ovic::{
    canonical_splitting, column_adapted_maps, compose_ovic, enumerate_ovic, enumerate_vic, factor_vic, free_row_values,
    reconstruct_from_free, HomCache, OvicMorphism, SFunction,
};
use crate::ring::{
    builtin, builtin_rings, increment_counter, jacobson_radical, jacobson_radical_definitional, matrix_invertible,
    quotient_by_radical, BuildOptions, FiniteRing, QuotientData, RMatrix, RingFile,
};
use crate::wedderburn::{build_aw_embedding, AwEmbedding};

pub const DEFAULT_BUDGET: u128 = 1 << 22;

/// Failure notes kept per criterion.
const NOTE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            other => Err(Error::InvalidInput(format!("unknown profile {other:?}"))),
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
        })
    }
}

/// A ring file added to the ring-level suites (criteria 1 and 2).
#[derive(Debug, Clone)]
pub struct ExtraRing {
    pub label: String,
    pub file: RingFile,
}

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub profile: Profile,
    pub seed: u64,
    pub budget: u128,
    pub extra_rings: Vec<ExtraRing>,
}

impl SelftestConfig {
    pub fn new(profile: Profile) -> Self {
        SelftestConfig { profile, seed: 0, budget: DEFAULT_BUDGET, extra_rings: Vec::new() }
    }

    fn full(&self) -> bool {
        self.profile == Profile::Full
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionResult {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub instances: u64,
    pub failures: u64,
    pub notes: Vec<String>,
    pub data: Value,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl CriterionResult {
    /// One summary line: `criterion <id> <title>: PASS|FAIL (...)`.
    pub fn line(&self) -> String {
        format!(
            "criterion {} {}: {} ({} instances, {} failures, {} ms)",
            self.id,
            self.title,
            if self.passed { "PASS" } else { "FAIL" },
            self.instances,
            self.failures,
            self.elapsed_ms
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub profile: Profile,
    pub seed: u64,
    pub passed: bool,
    pub criteria: Vec<CriterionResult>,
}

/// Instance and failure counter for one criterion.
struct Tally {
    instances: u64,
    failures: u64,
    notes: Vec<String>,
    data: BTreeMap<String, Value>,
}

impl Tally {
    fn new() -> Self {
        Tally { instances: 0, failures: 0, notes: Vec::new(), data: BTreeMap::new() }
    }

    fn check(&mut self, ok: bool, note: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.fail(note());
        }
    }

    fn fail(&mut self, note: String) {
        self.failures += 1;
        if self.notes.len() < NOTE_LIMIT {
            self.notes.push(note);
        }
    }

    /// Records an error from a library call as a failure.
    fn ok<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.instances += 1;
                self.fail(format!("{what}: {} ({e})", e.kind()));
                None
            }
        }
    }

    fn record(&mut self, key: impl Into<String>, v: Value) {
        self.data.insert(key.into(), v);
    }

    fn finish(self, id: &str, title: &str, start: Instant) -> CriterionResult {
        CriterionResult {
            id: id.into(),
            title: title.into(),
            passed: self.failures == 0,
            instances: self.instances,
            failures: self.failures,
            notes: self.notes,
            data: Value::Object(self.data.into_iter().collect()),
            elapsed_ms: start.elapsed().as_millis(),
        }
    }
}

/// Built-in rings for the profile followed by the extra ring files. Extra
/// rings that fail to build are returned as errors under their labels.
fn suite_rings(cfg: &SelftestConfig) -> Vec<(String, Result<FiniteRing>)> {
    let mut out: Vec<(String, Result<FiniteRing>)> = if cfg.full() {
        match builtin_rings() {
            Ok(rings) => rings.into_iter().map(|r| (r.name().to_string(), Ok(r))).collect(),
            Err(e) => vec![("builtin".into(), Err(e))],
        }
    } else {
        ["F2", "Z4"].iter().map(|n| (n.to_string(), builtin(n))).collect()
    };
    for extra in &cfg.extra_rings {
        out.push((extra.label.clone(), FiniteRing::from_file(&extra.file, &BuildOptions::default())));
    }
    out
}

/// Smallest additive subgroup containing `gens`.
fn additive_closure(r: &FiniteRing, gens: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = gens.clone();
    set.insert(r.zero());
    loop {
        let mut grown = set.clone();
        for &a in &set {
            for &b in gens {
                grown.insert(r.add(a, b));
            }
        }
        if grown.len() == set.len() {
            return set;
        }
        set = grown;
    }
}

/// Least `k` with `J^k = 0`, computing ideal powers as additive spans of products.
fn nilpotency_by_powers(r: &FiniteRing, j: &[usize]) -> Option<usize> {
    let j_set: BTreeSet<usize> = j.iter().copied().collect();
    let mut power = additive_closure(r, &j_set);
    for k in 1..=r.size() {
        if power.iter().all(|&x| x == r.zero()) {
            return Some(k);
        }
        let products: BTreeSet<usize> = power.iter().flat_map(|&a| j.iter().map(move |&b| r.mul(a, b))).collect();
        power = additive_closure(r, &products);
    }
    None
}

/// Radical correctness against the triple-scan oracle, and nilpotency.
pub fn criterion_1(cfg: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut per_ring = BTreeMap::new();
    for (label, ring) in suite_rings(cfg) {
        let Some(r) = t.ok(&label, ring) else { continue };
        let Some(rad) = t.ok(&label, jacobson_radical(&r)) else { continue };
        let oracle = jacobson_radical_definitional(&r);
        t.check(rad.ideal.members() == oracle.as_slice(), || {
            format!("{label}: radical {:?} differs from oracle {:?}", rad.ideal.members(), oracle)
        });
        let k = nilpotency_by_powers(&r, &oracle);
        t.check(k.is_some_and(|k| k <= r.size()), || format!("{label}: radical is not nilpotent"));
        t.check(k == Some(rad.nilpotency_index), || {
            format!("{label}: nilpotency index {} but powers give {k:?}", rad.nilpotency_index)
        });
        if let Some(q) = t.ok(&label, quotient_by_radical(&r)) {
            let bar = q.quotient();
            t.check(jacobson_radical_definitional(bar) == vec![bar.zero()], || {
                format!("{label}: quotient has a nonzero radical")
            });
        }
        per_ring.insert(label, json!({ "radical_size": oracle.len(), "nilpotency_index": k }));
    }
    t.record("rings", json!(per_ring));
    t.finish("1", "radical correctness", start)
}

fn lifted_system_ok(r: &FiniteRing, aw: &AwEmbedding) -> bool {
    let all: Vec<usize> = aw.idempotents().iter().flatten().copied().collect();
    let mut sum = r.zero();
    for (i, &e) in all.iter().enumerate() {
        if !r.is_idempotent(e) {
            return false;
        }
        for (j, &f) in all.iter().enumerate() {
            if i != j && r.mul(e, f) != r.zero() {
                return false;
            }
        }
        sum = r.add(sum, e);
    }
    sum == r.one()
}

fn field_orders(aw: &AwEmbedding) -> Vec<usize> {
    (0..aw.q()).map(|k| aw.field(k).order()).collect()
}

/// Artin-Wedderburn integrity: lifted idempotents, the product count,
/// and `Phi` as a unital ring monomorphism with off-diagonal blocks in `J`.
pub fn criterion_2(cfg: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut per_ring = BTreeMap::new();
    for (label, ring) in suite_rings(cfg) {
        let Some(r) = t.ok(&label, ring) else { continue };
        let Some(aw) = t.ok(&label, build_aw_embedding(&r)) else { continue };
        let qsize = aw.quotient().quotient().size() as u128;
        t.check(lifted_system_ok(&r, &aw), || format!("{label}: lifted system is not complete orthogonal idempotent"));
        let orders = field_orders(&aw);
        let product: u128 = orders.iter().zip(aw.mu_blocks()).map(|(&o, &m)| (o as u128).pow((m * m) as u32)).product();
        t.check(product == qsize, || format!("{label}: product count {product} != |R/J| = {qsize}"));

        let phis: Vec<RMatrix> = r.elements().map(|x| aw.phi(x)).collect();
        t.check(phis[r.one()] == aw.peirce_identity(1), || format!("{label}: Phi(1) is not the Peirce identity"));
        let distinct: HashSet<&RMatrix> = phis.iter().collect();
        t.check(distinct.len() == r.size(), || format!("{label}: Phi is not injective"));
        let exhaustive = r.size() <= 64;
        let pairs: Vec<(usize, usize)> = if exhaustive {
            r.elements().flat_map(|x| r.elements().map(move |y| (x, y))).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..4096).map(|_| (rng.gen_range(0..r.size()), rng.gen_range(0..r.size()))).collect()
        };
        let mut hom_ok = true;
        for &(x, y) in &pairs {
            let add = r.mat_add(&phis[x], &phis[y]).is_ok_and(|s| s == phis[r.add(x, y)]);
            let mul = r.mat_mul(&phis[x], &phis[y]).is_ok_and(|p| p == phis[r.mul(x, y)]);
            hom_ok &= add && mul;
        }
        t.check(hom_ok, || format!("{label}: Phi fails additivity or multiplicativity"));
        let q = aw.quotient();
        let mu = aw.mu();
        let off_ok = r.elements().all(|x| {
            (0..mu).all(|o1| {
                (0..mu).all(|o2| aw.block_of(o1) == aw.block_of(o2) || q.project(aw.phi_entry(x, o1, o2)) == 0)
            })
        });
        t.check(off_ok, || format!("{label}: an off-diagonal block of Phi is not in J"));
        per_ring.insert(
            label,
            json!({
                "q": aw.q(),
                "mu": aw.mu_blocks(),
                "field_orders": orders,
                "quotient_size": qsize,
                "pairs_checked": pairs.len(),
                "exhaustive": exhaustive,
            }),
        );
    }
    t.record("rings", json!(per_ring));
    t.finish("2", "Artin-Wedderburn integrity", start)
}

/// The sum form `sum_k |D_k|^(mu_k^2) = |R/J|` checked literally on every ring.
pub fn criterion_2_sum(cfg: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut per_ring = BTreeMap::new();
    for (label, ring) in suite_rings(cfg) {
        let Some(r) = t.ok(&label, ring) else { continue };
        let Some(aw) = t.ok(&label, build_aw_embedding(&r)) else { continue };
        let qsize = aw.quotient().quotient().size() as u128;
        let sum: u128 =
            field_orders(&aw).iter().zip(aw.mu_blocks()).map(|(&o, &m)| (o as u128).pow((m * m) as u32)).sum();
        t.check(sum == qsize, || format!("{label}: sum {sum} != |R/J| = {qsize}"));
        per_ring.insert(label, json!({ "sum": sum, "quotient_size": qsize }));
    }
    t.record("rings", json!(per_ring));
    t.finish("2-sum", "literal sum count", start)
}

fn invertibility_scan(t: &mut Tally, label: &str, r: &FiniteRing) -> Value {
    let Some(q) = t.ok(label, QuotientData::new(Arc::new(r.clone()))) else { return Value::Null };
    let bar = q.quotient();
    let mut entries = vec![r.zero(); 4];
    let (mut total, mut invertible) = (0u64, 0u64);
    loop {
        let m = RMatrix::new(2, 2, entries.clone()).expect("2 x 2");
        total += 1;
        if let Some(inv) = t.ok(label, matrix_invertible(&m, &q)) {
            let oracle = oracle::brute_force_inverse(r, &m);
            let reduced = m.map(|x| q.project(x));
            let reduced_oracle = oracle::brute_force_inverse(bar, &reduced);
            t.check(inv.invertible == oracle.is_some(), || format!("{label}: {:?} disagrees with oracle", m.entries()));
            t.check(oracle.is_some() == reduced_oracle.is_some(), || {
                format!("{label}: {:?} invertible but reduction is not, or conversely", m.entries())
            });
            t.check(inv.reduced_inverse.is_some() == reduced_oracle.is_some(), || {
                format!("{label}: {:?} reduced inverse mismatch", m.entries())
            });
            if inv.invertible {
                invertible += 1;
                let witness = inv.inverse.as_ref().is_some_and(|x| {
                    r.mat_mul(&m, x).is_ok_and(|p| r.is_identity(&p))
                        && r.mat_mul(x, &m).is_ok_and(|p| r.is_identity(&p))
                });
                t.check(witness, || format!("{label}: {:?} has no verified two-sided inverse", m.entries()));
            }
        }
        if !increment_counter(&mut entries, r.size()) {
            break;
        }
    }
    json!({ "matrices": total, "invertible": invertible })
}

/// Invertibility of `2 x 2` matrices decided through the reduction.
pub fn criterion_3(cfg: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let names: &[&str] = if cfg.full() { &["Z4", "T2F2"] } else { &["Z4"] };
    for name in names {
        let Some(r) = t.ok(name, builtin(name)) else { continue };
        let data = invertibility_scan(&mut t, name, &r);
        t.record(*name, data);
    }
    t.finish("3", "invertibility through the reduction", start)
}

/// `(ring, d_max, n_max)` instances of criteria 4 and 5.
fn calculus_instances(cfg: &SelftestConfig) -> Vec<(&'static str, usize, usize)> {
    if cfg.full() {
        vec![("F2", 2, 3), ("Z4", 1, 3)]
    } else {
        vec![("F2", 1, 3), ("Z4", 1, 2)]
    }
}

/// `S(h2 h1)` predicted from `S(h1)` and `S(h2)`.
fn composite_s(inner: &SFunction, outer: &SFunction) -> SFunction {
    SFunction { sets: inner.sets.iter().zip(&outer.sets).map(|(j, jp)| jp.iter().map(|&i| j[i]).collect()).collect() }
}

fn calculus_instance(t: &mut Tally, cfg: &SelftestConfig, name: &str, d_max: usize, n_max: usize) -> Value {
    let Some(r) = t.ok(name, builtin(name)) else { return Value::Null };
    let Some(aw) = t.ok(name, build_aw_embedding(&r)) else { return Value::Null };
    let r = aw.ring();

    // column-adapted maps of every shape rows <= cols <= n_max, checked against the oracle
    let mut maps: BTreeMap<(usize, usize), Vec<(RMatrix, SFunction)>> = BTreeMap::new();
    for rows in 0..=n_max {
        for cols in rows..=n_max {
            let Some(found) = t.ok(name, column_adapted_maps(&aw, rows, cols, cfg.budget)) else { continue };
            let mut oracle_found = Vec::new();
            let mut entries = vec![r.zero(); rows * cols];
            loop {
                let h = RMatrix::new(rows, cols, entries.clone()).expect("shape");
                if let Some(s) = oracle::column_adapted_bruteforce(&h, &aw) {
                    oracle_found.push((h, s));
                }
                if !increment_counter(&mut entries, r.size()) {
                    break;
                }
            }
            t.check(found == oracle_found, || {
                format!("{name}: column-adapted {rows} x {cols} maps differ from oracle")
            });
            maps.insert((rows, cols), found);
        }
    }

    // composition closure with the predicted S-function
    let mut compositions = 0u64;
    for l in 0..=d_max.min(n_max) {
        for n in l..=n_max {
            for m in n..=n_max {
                for (h1, s1) in &maps[&(n, m)] {
                    for (h2, s2) in &maps[&(l, n)] {
                        compositions += 1;
                        let Some(c) = t.ok(name, r.mat_mul(h2, h1)) else { continue };
                        let s = oracle::column_adapted_bruteforce(&c, &aw);
                        t.check(s.as_ref() == Some(&composite_s(s1, s2)), || {
                            format!("{name}: composite {l}<-{n}<-{m} not column-adapted with the predicted S")
                        });
                    }
                }
            }
        }
    }

    // canonical splitting universality
    let mut splittings = 0u64;
    for n in 0..=d_max.min(n_max) {
        for m in n..=n_max {
            let mut by_s: BTreeMap<&SFunction, Vec<&RMatrix>> = BTreeMap::new();
            for (h, s) in &maps[&(n, m)] {
                by_s.entry(s).or_default().push(h);
            }
            for (s, hs) in by_s {
                let Some(g) = t.ok(name, canonical_splitting(s, &aw, m, n)) else { continue };
                splittings += 1;
                for h in hs {
                    t.check(r.mat_mul(h, &g).is_ok_and(|p| r.is_identity(&p)), || {
                        format!("{name}: canonical splitting fails for a {n} x {m} map")
                    });
                }
            }
        }
    }

    // the identity is the only column-adapted endomorphism
    for n in 0..=n_max {
        let endo = &maps[&(n, n)];
        t.check(endo.len() == 1 && r.is_identity(&endo[0].0), || {
            format!("{name}: {} column-adapted maps R^{n} -> R^{n}", endo.len())
        });
    }

    // free-row roundtrip and counts against the pair scan
    let mut roundtrips = 0u64;
    let mut counts = BTreeMap::new();
    for d in 0..=d_max {
        for n in d..=n_max {
            let Some(list) = t.ok(name, enumerate_ovic(&aw, d, n, cfg.budget)) else { continue };
            for f in &list {
                roundtrips += 1;
                let back = reconstruct_from_free(f.f_dprime(), &free_row_values(f, &aw), &aw);
                t.check(back.as_ref().is_ok_and(|b| b == f), || {
                    format!("{name}: roundtrip fails for a {d}->{n} morphism")
                });
            }
            let (_, brute) = oracle::vic_ovic_counts_bruteforce(&aw, d, n);
            t.check(list.len() == brute, || {
                format!("{name}: {} ordered {d}->{n} morphisms, oracle {brute}", list.len())
            });
            counts.insert(format!("{d}->{n}"), list.len());
        }
    }
    json!({
        "compositions": compositions,
        "splitting_classes": splittings,
        "roundtrips": roundtrips,
        "ovic_counts": counts,
    })
}

/// Column-adapted calculus: closure, canonical splittings, endomorphisms, roundtrip.
pub fn criterion_4(cfg: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for (name, d_max, n_max) in calculus_instances(cfg) {
        let data = calculus_instance(&mut t, cfg, name, d_max, n_max);
        t.record(name, data);
    }
    t.finish("4", "column-adapted calculus", start)
}

/// Factorization of every VIC morphism, with the count identity as data.
pub fn criterion_5(cfg: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for (name, d_max, n_max) in calculus_instances(cfg) {
        let Some(r) = t.ok(name, builtin(name)) else { continue };
        let Some(aw) = t.ok(name, build_aw_embedding(&r)) else { continue };
        let r = aw.ring();
        let mut rows = Vec::new();
        for d in 0..=d_max {
            let gl = oracle::count_invertible(r, d);
            for n in d..=n_max {
                let Some(vic) = t.ok(name, enumerate_vic(&aw, d, n, cfg.budget)) else { continue };
                for f in &vic {
                    let Some(fac) = t.ok(name, factor_vic(f, &aw)) else { continue };
                    let f1 = &fac.f1;
                    let pair_inverse = r.mat_mul(f1.f_dprime(), f1.f_prime()).is_ok_and(|p| r.is_identity(&p))
                        && r.mat_mul(f1.f_prime(), f1.f_dprime()).is_ok_and(|p| r.is_identity(&p));
                    let adapted = oracle::column_adapted_bruteforce(fac.f2.f_dprime(), &aw).is_some();
                    let composite = crate::ovic::compose_vic(fac.f2.vic(), f1).is_ok_and(|c| c == *f);
                    t.check(pair_inverse && adapted && composite, || {
                        format!("{name}: factorization of a {d}->{n} morphism fails")
                    });
                }
                let (brute_vic, brute_ovic) = oracle::vic_ovic_counts_bruteforce(&aw, d, n);
                t.check(vic.len() == brute_vic, || {
                    format!("{name}: {} VIC {d}->{n} morphisms, oracle {brute_vic}", vic.len())
                });
                rows.push(json!({
                    "d": d,
                    "n": n,
                    "vic": vic.len(),
                    "gl_d": gl,
                    "ovic": brute_ovic,
                    "product": gl * brute_ovic,
                    "identity_holds": vic.len() == gl * brute_ovic,
                }));
            }
        }
        t.record(name, json!(rows));
    }
    t.finish("5", "factorization", start)
}

/// Total order, insertion order, the word embedding and `build_phi` over `F2`, `d = 1`.
pub fn criterion_6(cfg: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let (n_max, m_max) = if cfg.full() { (3, 4) } else { (2, 3) };
    let Some(r) = t.ok("F2", builtin("F2")) else { return t.finish("6", "ordering", start) };
    let Some(aw) = t.ok("F2", build_aw_embedding(&r)) else { return t.finish("6", "ordering", start) };
    let cache = HomCache::new(cfg.budget);
    let mut strata = Vec::new();
    for n in 0..=m_max {
        match cache.get(&aw, 1, n) {
            Ok(s) => strata.push(s),
            Err(e) => {
                t.ok::<()>("F2", Err(e));
                return t.finish("6", "ordering", start);
            }
        }
    }
    let small: Vec<&OvicMorphism> = strata[..=n_max].iter().flat_map(|s| s.iter()).collect();

    for a in &small {
        for b in &small {
            let ab = total_compare(a, b);
            let ba = total_compare(b, a);
            let ok = match (&ab, &ba) {
                (Ok(x), Ok(y)) => *x == y.reverse() && (x.is_eq() == (a == b)),
                _ => false,
            };
            t.check(ok, || "total order trichotomy fails".into());
        }
    }
    let mut transitive = true;
    for &a in &small {
        for &b in small.iter().filter(|&&b| a < b) {
            for &c in small.iter().filter(|&&c| b < c) {
                transitive &= a < c;
            }
        }
    }
    t.check(transitive, || "total order is not transitive".into());

    let words: Vec<Vec<_>> = strata.iter().map(|s| s.iter().map(|f| iota(f, &aw)).collect()).collect();
    for (n, ws) in words.iter().enumerate() {
        let distinct: HashSet<_> = ws.iter().collect();
        t.check(distinct.len() == ws.len(), || format!("iota is not injective on stratum {n}"));
    }

    let mut related = 0u64;
    let mut word_only = 0u64;
    for n in 0..=n_max {
        for m in n..=m_max {
            for (fi, f) in strata[n].iter().enumerate() {
                for (gi, g) in strata[m].iter().enumerate() {
                    let Some(chain) = t.ok("F2", partial_leq(f, g, &aw, DEFAULT_NODE_CAP)) else { continue };
                    let words_related = word_leq(&words[n][fi].letters, &words[m][gi].letters);
                    let Some(chain) = chain else {
                        word_only += u64::from(words_related);
                        continue;
                    };
                    related += 1;
                    t.check(f <= g, || format!("insertion-related pair {n}->{m} out of total order"));
                    t.check(words_related, || format!("iota does not preserve an insertion pair {n}->{m}"));
                    let built = build_phi(f, &chain, &aw);
                    t.check(
                        built
                            .as_ref()
                            .is_ok_and(|p| crate::ovic::compose_vic(p.phi.vic(), f.vic()).is_ok_and(|c| c == *g.vic())),
                        || format!("build_phi does not carry f to g for a {n}->{m} pair"),
                    );
                }
            }
        }
    }

    // phi o h < phi o f for every h < f at n = 2, m = 3
    let mut monotone = 0u64;
    let (n2, m3) = (2, 3);
    for f in strata[n2].iter() {
        for g in strata[m3].iter() {
            let Some(Some(chain)) = t.ok("F2", partial_leq(f, g, &aw, DEFAULT_NODE_CAP)) else { continue };
            let Some(built) = t.ok("F2", build_phi(f, &chain, &aw)) else { continue };
            let Some(pf) = t.ok("F2", compose_ovic(&built.phi, f, &aw)) else { continue };
            for h in strata[n2].iter().filter(|h| *h < f) {
                monotone += 1;
                let ph = compose_ovic(&built.phi, h, &aw);
                t.check(ph.as_ref().is_ok_and(|ph| *ph < pf), || "phi o h < phi o f fails".into());
            }
        }
    }
    t.record("morphisms_n_le_max", json!(small.len()));
    t.record("insertion_pairs", json!(related));
    t.record("word_related_not_insertion_related", json!(word_only));
    t.record("monotonicity_checks", json!(monotone));
    t.finish("6", "ordering", start)
}

fn all_words(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let next: Vec<Vec<u8>> = frontier
            .iter()
            .flat_map(|w: &Vec<u8>| {
                b"ab".iter().copied().map(move |c| {
                    let mut v = w.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// The word order: reflexive, transitive, and equal to the brute-force order.
pub fn criterion_7(cfg: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let words = all_words(if cfg.full() { 5 } else { 4 });
    let n = words.len();
    let table: Vec<Vec<bool>> = words.iter().map(|s| words.iter().map(|w| word_leq(s, w)).collect()).collect();
    for i in 0..n {
        t.check(table[i][i], || format!("{:?} is not <= itself", String::from_utf8_lossy(&words[i])));
        for j in 0..n {
            t.check(table[i][j] == oracle::word_leq_bruteforce(&words[i], &words[j]), || {
                format!(
                    "word_leq({}, {}) disagrees with the oracle",
                    String::from_utf8_lossy(&words[i]),
                    String::from_utf8_lossy(&words[j])
                )
            });
        }
    }
    let mut transitive = true;
    for i in 0..n {
        for j in (0..n).filter(|&j| table[i][j]) {
            for k in (0..n).filter(|&k| table[j][k]) {
                transitive &= table[i][k];
            }
        }
    }
    t.check(transitive, || "word order is not transitive".into());
    t.check(word_leq(b"ab", b"aab"), || "ab <= aab fails".into());
    t.check(!word_leq(b"a", b"ba"), || "a <= ba holds".into());
    t.record("words", json!(n));
    t.record("related_pairs", json!(table.iter().flatten().filter(|&&x| x).count()));
    t.finish("7", "word order", start)
}

fn random_element(
    rng: &mut ChaCha8Rng,
    field: &CoefficientField,
    stratum: &[OvicMorphism],
    d: usize,
    n: usize,
) -> Result<ModuleElement> {
    let mut x = ModuleElement::zero(d, n);
    while x.is_zero() {
        for f in stratum {
            if rng.gen_bool(0.4) {
                x.add_term(field, f.clone(), field.one())?;
            }
        }
    }
    Ok(x)
}

fn random_combination(
    rng: &mut ChaCha8Rng,
    field: &CoefficientField,
    rows: &[ModuleElement],
    d: usize,
    n: usize,
) -> Result<ModuleElement> {
    let mut x = ModuleElement::zero(d, n);
    for row in rows {
        if rng.gen_bool(0.5) {
            x = x.add(field, row)?;
        }
    }
    Ok(x)
}

/// One random pair `N <= M`; returns whether the initial sets agree and whether the claim holds.
fn claim_pair(
    rng: &mut ChaCha8Rng,
    aw: &AwEmbedding,
    field: CoefficientField,
    horizon: usize,
    cache: &HomCache,
) -> Result<(bool, bool)> {
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let n = rng.gen_range(1..=horizon.min(3));
        gens.push(random_element(rng, &field, &cache.get(aw, 1, n)?, 1, n)?);
    }
    let m = span_to_degree(aw, field, 1, &gens, horizon, cache)?;
    let mut sub = Vec::new();
    if rng.gen_bool(0.5) {
        // perturb every generator inside M: usually the same module
        for g in &gens {
            let rows = m.degree(g.degree())?.rows(&field);
            sub.push(g.add(&field, &random_combination(rng, &field, &rows, 1, g.degree())?)?);
        }
    } else {
        let mut picked = gens.clone();
        picked.shuffle(rng);
        picked.truncate(rng.gen_range(0..gens.len().max(1)));
        sub = picked;
    }
    let n = span_to_degree(aw, field, 1, &sub, horizon, cache)?;
    for deg in 0..=horizon {
        for row in n.degree(deg)?.rows(&field) {
            if !crate::noether::membership(&m, &row)?.is_member() {
                return Err(Error::CounterexampleFound("random N is not inside M".into()));
            }
        }
    }
    let same_init = same_initial_sets(&n, &m, horizon)?;
    Ok((same_init, !same_init || n.same_bases(&m, horizon)))
}

fn same_initial_sets(a: &SubmoduleState, b: &SubmoduleState, horizon: usize) -> Result<bool> {
    for deg in 0..=horizon {
        let mut x = a.degree(deg)?.leading();
        let mut y = b.degree(deg)?.leading();
        x.sort();
        y.sort();
        if x != y {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Engine witnesses: the representable module, endomorphism generation,
/// and the equal-initial-module claim on random pairs.
pub fn criterion_8(cfg: &SelftestConfig) -> CriterionResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let field = CoefficientField::Prime(2);
    let horizon = if cfg.full() { 4 } else { 3 };
    let cache = HomCache::new(cfg.budget);

    if let Some(aw) = t.ok("F2", builtin("F2").and_then(|r| build_aw_embedding(&r))) {
        let id = ModuleElement::monomial(&field, OvicMorphism::identity(&aw, 1), field.one());
        if let Some(span) = t.ok("F2", span_to_degree(&aw, field, 1, &[id], horizon, &cache)) {
            let dims = span.dims();
            let mut expected = Vec::new();
            for n in 0..=horizon {
                let (_, brute) = oracle::vic_ovic_counts_bruteforce(&aw, 1, n);
                expected.push(brute);
                t.check(dims[n] == brute && span.ambient_dims()[n] == brute, || {
                    format!("span of the identity has dimension {} at degree {n}, expected {brute}", dims[n])
                });
            }
            t.record("identity_span_dims", json!(dims));
            t.record("ovic_counts_by_oracle", json!(expected));
        }

        let trials = if cfg.full() { 100 } else { 20 };
        let claim_horizon = if cfg.full() { 4 } else { 3 };
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut equal_init = 0u64;
        for _ in 0..trials {
            if let Some((same, holds)) = t.ok("claim", claim_pair(&mut rng, &aw, field, claim_horizon, &cache)) {
                equal_init += u64::from(same);
                t.check(holds, || "equal initial sets but different bases".into());
            }
        }
        t.record("claim_pairs", json!(trials));
        t.record("claim_pairs_with_equal_initial_sets", json!(equal_init));
    }

    let endo: &[(&str, usize)] = if cfg.full() { &[("F2", 1), ("F2", 2), ("Z4", 1)] } else { &[("F2", 1), ("Z4", 1)] };
    let mut reports = BTreeMap::new();
    for &(name, d) in endo {
        let Some(aw) = t.ok(name, builtin(name).and_then(|r| build_aw_embedding(&r))) else { continue };
        if let Some(rep) = t.ok(name, check_endo_generation(&aw, d, 3, cfg.budget)) {
            t.check(rep.counterexamples == 0, || format!("{name}: endomorphism generation counterexample"));
            reports.insert(format!("{name}/d={d}"), serde_json::to_value(&rep).unwrap_or(Value::Null));
        }
    }
    t.record("endo_generation", json!(reports));
    t.finish("8", "engine witnesses", start)
}

pub type CriterionFn = fn(&SelftestConfig) -> CriterionResult;

/// Runners in report order.
pub const CRITERIA: &[(&str, CriterionFn)] = &[
    ("1", criterion_1),
    ("2", criterion_2),
    ("2-sum", criterion_2_sum),
    ("3", criterion_3),
    ("4", criterion_4),
    ("5", criterion_5),
    ("6", criterion_6),
    ("7", criterion_7),
    ("8", criterion_8),
];

/// Runs every criterion, in parallel, collecting results in order.
pub fn run(cfg: &SelftestConfig) -> SelftestReport {
    let criteria: Vec<CriterionResult> = std::thread::scope(|scope| {
        let handles: Vec<_> = CRITERIA.iter().map(|(_, f)| scope.spawn(move || f(cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread")).collect()
    });
    SelftestReport { profile: cfg.profile, seed: cfg.seed, passed: criteria.iter().all(|c| c.passed), criteria }
}
