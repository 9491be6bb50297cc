//! Representable OVIC-modules `P(d)` with `P(d)_n = k[Hom_OVIC(R^d, R^n)]`,
//! truncated at an explicit degree horizon.
//!
//! Coefficients live in a prime field `F_p` (`p <= 97`) or in `Q`. Each degree
//! of a submodule is kept as a fully reduced echelon basis whose pivot is the
//! largest morphism of each row in the total order, so pivots are exactly the
//! initial terms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ovic::{compose_ovic, count_ovic, enumerate_vic, factor_vic, HomCache, OvicMorphism};
use crate::wedderburn::AwEmbedding;

pub type Coeff = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoefficientField {
    Prime(u32),
    Rational,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|i| i * i <= p).all(|i| !p.is_multiple_of(i))
}

impl FromStr for CoefficientField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "Q" {
            return Ok(CoefficientField::Rational);
        }
        let p = s
            .strip_prefix('F')
            .and_then(|p| p.parse::<u32>().ok())
            .ok_or_else(|| Error::InvalidInput(format!("unknown coefficient field {s:?}")))?;
        CoefficientField::prime(p)
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Prime(p) => write!(f, "F{p}"),
            CoefficientField::Rational => write!(f, "Q"),
        }
    }
}

impl CoefficientField {
    pub fn prime(p: u32) -> Result<Self> {
        if p > 97 || !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a prime up to 97")));
        }
        Ok(CoefficientField::Prime(p))
    }

    pub fn normalize(&self, x: Coeff) -> Coeff {
        match *self {
            CoefficientField::Rational => x,
            CoefficientField::Prime(p) => {
                let p = BigInt::from(p);
                let num = x.numer().mod_floor_big(&p);
                let den = x.denom().mod_floor_big(&p);
                // p is prime and the denominator is nonzero mod p for valid inputs
                let inv = den.modpow(&(&p - 2u32), &p);
                Coeff::from_integer((num * inv) % &p)
            }
        }
    }

    pub fn zero(&self) -> Coeff {
        Coeff::zero()
    }

    pub fn one(&self) -> Coeff {
        Coeff::one()
    }

    pub fn from_int(&self, v: i64) -> Coeff {
        self.normalize(Coeff::from_integer(BigInt::from(v)))
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.normalize(-a)
    }

    pub fn inv(&self, a: &Coeff) -> Result<Coeff> {
        if a.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        Ok(self.normalize(a.recip()))
    }

    /// Reads an integer or a string `"a/b"`.
    pub fn parse(&self, v: &Value) -> Result<Coeff> {
        let bad = || Error::InvalidInput(format!("bad coefficient {v}"));
        let raw = match v {
            Value::Number(n) => Coeff::from_integer(BigInt::from(n.as_i64().ok_or_else(bad)?)),
            Value::String(s) => {
                let (num, den) = s.split_once('/').unwrap_or((s.as_str(), "1"));
                let num: BigInt = num.trim().parse().map_err(|_| bad())?;
                let den: BigInt = den.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                if let CoefficientField::Prime(p) = self {
                    if (&den % BigInt::from(*p)).is_zero() {
                        return Err(bad());
                    }
                }
                Coeff::new(num, den)
            }
            _ => return Err(bad()),
        };
        Ok(self.normalize(raw))
    }

    pub fn to_json(&self, c: &Coeff) -> Value {
        if c.is_integer() {
            if let Some(v) = c.numer().to_i64() {
                return Value::from(v);
            }
        }
        Value::String(c.to_string())
    }
}

trait ModFloor {
    fn mod_floor_big(&self, p: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_big(&self, p: &BigInt) -> BigInt {
        let r = self % p;
        if r.is_negative() {
            r + p
        } else {
            r
        }
    }
}

/// A finite linear combination of ordered morphisms `R^d -> R^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleElement {
    d: usize,
    n: usize,
    terms: BTreeMap<OvicMorphism, Coeff>,
}

impl ModuleElement {
    pub fn zero(d: usize, n: usize) -> Self {
        ModuleElement { d, n, terms: BTreeMap::new() }
    }

    pub fn monomial(field: &CoefficientField, f: OvicMorphism, c: Coeff) -> Self {
        let mut x = Self::zero(f.d(), f.n());
        x.add_term(field, f, c).expect("degrees agree");
        x
    }

    pub fn from_terms(
        field: &CoefficientField,
        d: usize,
        n: usize,
        terms: impl IntoIterator<Item = (OvicMorphism, Coeff)>,
    ) -> Result<Self> {
        let mut x = Self::zero(d, n);
        for (f, c) in terms {
            x.add_term(field, f, c)?;
        }
        Ok(x)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing order of morphism.
    pub fn terms(&self) -> impl Iterator<Item = (&OvicMorphism, &Coeff)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, field: &CoefficientField, f: OvicMorphism, c: Coeff) -> Result<()> {
        if f.d() != self.d {
            return Err(Error::SourceMismatch(self.d, f.d()));
        }
        if f.n() != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: f.n() });
        }
        let c = field.normalize(c);
        let sum = match self.terms.remove(&f) {
            Some(old) => field.add(&old, &c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(f, sum);
        }
        Ok(())
    }

    pub fn add(&self, field: &CoefficientField, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(field, f.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, field: &CoefficientField, c: &Coeff) -> Self {
        let terms =
            self.terms.iter().map(|(f, a)| (f.clone(), field.mul(a, c))).filter(|(_, a)| !a.is_zero()).collect();
        ModuleElement { d: self.d, n: self.n, terms }
    }

    pub fn sub(&self, field: &CoefficientField, other: &Self) -> Result<Self> {
        self.add(field, &other.scale(field, &field.neg(&field.one())))
    }
}

/// The action of `phi: R^n -> R^m` on `P(d)_n` by post-composition.
pub fn act(phi: &OvicMorphism, x: &ModuleElement, field: &CoefficientField, aw: &AwEmbedding) -> Result<ModuleElement> {
    if phi.d() != x.n {
        return Err(Error::DegreeMismatch { expected: x.n, got: phi.d() });
    }
    let mut out = ModuleElement::zero(x.d, phi.n());
    for (f, c) in &x.terms {
        out.add_term(field, compose_ovic(phi, f, aw)?, c.clone())?;
    }
    Ok(out)
}

/// The largest morphism in the support of `x`, with its coefficient.
pub fn init_term(x: &ModuleElement) -> Result<(Coeff, OvicMorphism)> {
    x.terms.iter().next_back().map(|(f, c)| (c.clone(), f.clone())).ok_or(Error::ZeroElement)
}

type SparseRow = Vec<(usize, Coeff)>;

/// A subspace of `P(d)_n` in fully reduced echelon form.
#[derive(Debug, Clone)]
pub struct DegreeSpan {
    n: usize,
    basis: Arc<Vec<OvicMorphism>>,
    /// pivot index -> row normalized to 1 at its pivot, the row's largest index
    rows: BTreeMap<usize, SparseRow>,
}

/// Reduction of a vector against a [`DegreeSpan`].
#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    /// `(pivot morphism, multiplier)`: the vector minus the sum of multiplied rows is `remainder`.
    pub certificate: Vec<(OvicMorphism, Coeff)>,
    pub remainder: ModuleElement,
}

impl Reduction {
    pub fn is_member(&self) -> bool {
        self.remainder.is_zero()
    }
}

impl DegreeSpan {
    fn new(n: usize, basis: Arc<Vec<OvicMorphism>>) -> Self {
        DegreeSpan { n, basis, rows: BTreeMap::new() }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.basis.len()
    }

    /// Leading morphisms of the echelon rows, increasing.
    pub fn leading(&self) -> Vec<OvicMorphism> {
        self.rows.keys().map(|&i| self.basis[i].clone()).collect()
    }

    /// Echelon rows as module elements, by increasing pivot.
    pub fn rows(&self, field: &CoefficientField) -> Vec<ModuleElement> {
        self.rows.values().map(|r| self.to_element(field, r)).collect()
    }

    fn to_element(&self, field: &CoefficientField, row: &SparseRow) -> ModuleElement {
        let d = self.basis.first().map_or(0, |f| f.d());
        let terms = row.iter().map(|(i, c)| (self.basis[*i].clone(), c.clone()));
        ModuleElement::from_terms(field, d, self.n, terms).expect("basis morphisms share degree")
    }

    fn to_sparse(&self, x: &ModuleElement) -> Result<BTreeMap<usize, Coeff>> {
        x.terms
            .iter()
            .map(|(f, c)| {
                let i = self
                    .basis
                    .binary_search(f)
                    .map_err(|_| Error::InvalidInput("morphism missing from the degree basis".into()))?;
                Ok((i, c.clone()))
            })
            .collect()
    }

    fn reduce_sparse(
        &self,
        field: &CoefficientField,
        mut v: BTreeMap<usize, Coeff>,
        mut certificate: Option<&mut Vec<(usize, Coeff)>>,
    ) -> BTreeMap<usize, Coeff> {
        for (p, row) in self.rows.iter().rev() {
            let Some(c) = v.get(p).cloned() else { continue };
            for (i, a) in row {
                let e = v.entry(*i).or_insert_with(|| field.zero());
                *e = field.sub(e, &field.mul(&c, a));
                if e.is_zero() {
                    v.remove(i);
                }
            }
            if let Some(cert) = certificate.as_deref_mut() {
                cert.push((*p, c));
            }
        }
        v
    }

    pub fn reduce(&self, field: &CoefficientField, x: &ModuleElement) -> Result<Reduction> {
        if x.n != self.n {
            return Err(Error::DegreeMismatch { expected: self.n, got: x.n });
        }
        let mut cert = Vec::new();
        let rem = self.reduce_sparse(field, self.to_sparse(x)?, Some(&mut cert));
        let remainder = self.to_element(field, &rem.into_iter().collect());
        let certificate = cert.into_iter().map(|(p, c)| (self.basis[p].clone(), c)).collect();
        Ok(Reduction { certificate, remainder })
    }

    /// Adds `x` to the span; true when the dimension grew.
    pub fn insert(&mut self, field: &CoefficientField, x: &ModuleElement) -> Result<bool> {
        let v = self.reduce_sparse(field, self.to_sparse(x)?, None);
        let Some((&p, lead)) = v.iter().next_back() else { return Ok(false) };
        let inv = field.inv(lead)?;
        let row: SparseRow = v.iter().map(|(i, c)| (*i, field.mul(c, &inv))).collect();
        for other in self.rows.values_mut() {
            let Some(pos) = other.iter().position(|(i, _)| *i == p) else { continue };
            let c = other[pos].1.clone();
            let mut merged: BTreeMap<usize, Coeff> = other.drain(..).collect();
            for (i, a) in &row {
                let e = merged.entry(*i).or_insert_with(|| field.zero());
                *e = field.sub(e, &field.mul(&c, a));
                if e.is_zero() {
                    merged.remove(i);
                }
            }
            *other = merged.into_iter().collect();
        }
        self.rows.insert(p, row);
        Ok(true)
    }

    /// Echelon rows as index/coefficient lists, for equality checks.
    pub fn canonical_rows(&self) -> Vec<SparseRow> {
        self.rows.values().cloned().collect()
    }
}

/// A finitely generated submodule of `P(d)`, computed through degree `horizon`.
#[derive(Debug, Clone)]
pub struct SubmoduleState {
    d: usize,
    field: CoefficientField,
    horizon: usize,
    generators: Vec<ModuleElement>,
    degrees: Vec<DegreeSpan>,
}

impl SubmoduleState {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> CoefficientField {
        self.field
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn generators(&self) -> &[ModuleElement] {
        &self.generators
    }

    pub fn degree(&self, n: usize) -> Result<&DegreeSpan> {
        self.degrees.get(n).ok_or(Error::HorizonExceeded { degree: n, horizon: self.horizon })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|s| s.dim()).collect()
    }

    pub fn ambient_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|s| s.ambient_dim()).collect()
    }

    /// True when both states have identical echelon bases through `n`.
    pub fn same_bases(&self, other: &Self, n: usize) -> bool {
        (0..=n).all(|i| match (self.degrees.get(i), other.degrees.get(i)) {
            (Some(a), Some(b)) => a.canonical_rows() == b.canonical_rows(),
            _ => false,
        })
    }
}

/// Degree-truncated span of `gens` in `P(d)`: degree `n` is spanned by all
/// `phi . g` with `g` of degree `n' <= n` and `phi` in `Hom_OVIC(n', n)`.
/// Composites of ordered morphisms are ordered, so this is closed under the action.
pub fn span_to_degree(
    aw: &AwEmbedding,
    field: CoefficientField,
    d: usize,
    gens: &[ModuleElement],
    horizon: usize,
    cache: &HomCache,
) -> Result<SubmoduleState> {
    let mut needed: u128 = 0;
    for n in 0..=horizon {
        needed = needed.saturating_add(count_ovic(aw, d, n, cache.budget())?);
    }
    if needed > cache.budget() {
        return Err(Error::BudgetExceeded { needed, budget: cache.budget() });
    }
    for g in gens {
        if g.d != d {
            return Err(Error::SourceMismatch(d, g.d));
        }
    }
    let mut degrees = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        let mut span = DegreeSpan::new(n, cache.get(aw, d, n)?);
        for g in gens.iter().filter(|g| g.n <= n && !g.is_zero()) {
            if span.is_full() {
                break;
            }
            for phi in cache.get(aw, g.n, n)?.iter() {
                span.insert(&field, &act(phi, g, &field, aw)?)?;
                if span.is_full() {
                    break;
                }
            }
        }
        degrees.push(span);
    }
    Ok(SubmoduleState { d, field, horizon, generators: gens.to_vec(), degrees })
}

/// Leading morphisms of each degree `n <= min(limit, horizon)`: over a field
/// these span the initial module in that degree.
pub fn initial_module_to_degree(m: &SubmoduleState, limit: usize) -> Vec<Vec<OvicMorphism>> {
    m.degrees.iter().take(limit.min(m.horizon) + 1).map(|s| s.leading()).collect()
}

pub fn membership(m: &SubmoduleState, x: &ModuleElement) -> Result<Reduction> {
    if x.d != m.d {
        return Err(Error::SourceMismatch(m.d, x.d));
    }
    m.degree(x.n)?.reduce(&m.field, x)
}

/// Per-degree counts from [`check_endo_generation`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndoDegree {
    pub n: usize,
    pub vic_morphisms: usize,
    pub factored: usize,
    pub ovic_morphisms: u128,
    /// `|GL_d(R)| * |Hom_OVIC(d, n)|`, recorded next to `vic_morphisms`.
    pub predicted_by_product: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndoReport {
    pub d: usize,
    pub gl_d: usize,
    pub degrees: Vec<EndoDegree>,
    pub counterexamples: usize,
}

/// Factors every VIC morphism `d -> n`, `n <= horizon`, as an ordered
/// morphism after a VIC automorphism of `R^d`, so each basis element of
/// `k[Hom_VIC(d, n)]` is an ordered image of a degree-`d` endomorphism.
pub fn check_endo_generation(aw: &AwEmbedding, d: usize, horizon: usize, budget: u128) -> Result<EndoReport> {
    let gl_d = enumerate_vic(aw, d, d, budget)?.len();
    let mut degrees = Vec::new();
    for n in d..=horizon.max(d) {
        if n > horizon {
            break;
        }
        let vic = enumerate_vic(aw, d, n, budget)?;
        let mut factored = 0;
        for f in &vic {
            let fac = factor_vic(f, aw)?;
            let r = aw.ring();
            let ok = fac.f1.d() == d
                && fac.f1.n() == d
                && r.is_identity(&r.mat_mul(&fac.g, &fac.g_inverse)?)
                && r.is_identity(&r.mat_mul(&fac.g_inverse, &fac.g)?)
                && crate::ovic::is_column_adapted(fac.f2.f_dprime(), aw)
                && crate::ovic::compose_vic(fac.f2.vic(), &fac.f1)? == *f;
            if !ok {
                return Err(Error::CounterexampleFound(format!("factorization of a {d}->{n} morphism")));
            }
            factored += 1;
        }
        let ovic_morphisms = count_ovic(aw, d, n, budget)?;
        degrees.push(EndoDegree {
            n,
            vic_morphisms: vic.len(),
            factored,
            ovic_morphisms,
            predicted_by_product: gl_d as u128 * ovic_morphisms,
        });
    }
    Ok(EndoReport { d, gl_d, degrees, counterexamples: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ovic::VicMorphism;
    use crate::ring::{builtin, RMatrix};
    use crate::wedderburn::build_aw_embedding;

    fn aw(name: &str) -> AwEmbedding {
        build_aw_embedding(&builtin(name).unwrap()).unwrap()
    }

    fn ovic(aw: &AwEmbedding, fp: &[usize], fd: &[usize]) -> OvicMorphism {
        let n = fd.len();
        let vic = VicMorphism::new(
            aw.ring_arc().clone(),
            RMatrix::new(n, 1, fp.to_vec()).unwrap(),
            RMatrix::new(1, n, fd.to_vec()).unwrap(),
        )
        .unwrap();
        OvicMorphism::new(vic, aw).unwrap()
    }

    #[test]
    fn field_arithmetic() {
        let f7 = CoefficientField::prime(7).unwrap();
        assert_eq!(f7.from_int(-1), f7.from_int(6));
        assert_eq!(f7.mul(&f7.from_int(3), &f7.inv(&f7.from_int(3)).unwrap()), f7.one());
        assert_eq!(f7.parse(&serde_json::json!("1/2")).unwrap(), f7.from_int(4));
        assert!(CoefficientField::prime(91).is_err());
        assert!(CoefficientField::prime(101).is_err());
        let q: CoefficientField = "Q".parse().unwrap();
        let half = q.parse(&serde_json::json!("1/2")).unwrap();
        assert_eq!(q.to_json(&half), serde_json::json!("1/2"));
        assert_eq!("F2".parse::<CoefficientField>().unwrap(), CoefficientField::Prime(2));
    }

    #[test]
    fn act_examples() {
        let f2 = aw("F2");
        let f = ovic(&f2, &[1, 0], &[1, 0]);
        let g = ovic(&f2, &[1, 1], &[1, 0]);
        let id = OvicMorphism::identity(&f2, 2);
        let k = CoefficientField::Rational;
        let x = ModuleElement::from_terms(&k, 1, 2, [(f.clone(), k.one()), (g.clone(), k.from_int(3))]).unwrap();
        assert_eq!(act(&id, &x, &k, &f2).unwrap(), x);
        // post-composition is injective on morphisms, so no phi merges distinct terms
        let cache = HomCache::new(1 << 20);
        for phi in cache.get(&f2, 2, 3).unwrap().iter() {
            assert_eq!(act(phi, &x, &k, &f2).unwrap().len(), 2);
        }
        let phi = &cache.get(&f2, 2, 3).unwrap()[0];
        let mono = act(phi, &ModuleElement::monomial(&k, g.clone(), k.from_int(5)), &k, &f2).unwrap();
        assert_eq!(mono, ModuleElement::monomial(&k, compose_ovic(phi, &g, &f2).unwrap(), k.from_int(5)));
        // like terms merge: f + f is 2f over Q and 0 over F2
        let twice = x.add(&k, &ModuleElement::monomial(&k, f.clone(), k.one())).unwrap();
        assert_eq!(twice.terms().next().unwrap(), (&f, &k.from_int(2)));
        let k2 = CoefficientField::Prime(2);
        let y = ModuleElement::monomial(&k2, f.clone(), k2.one());
        assert!(y.add(&k2, &y).unwrap().is_zero());
        assert!(matches!(act(&id, &ModuleElement::zero(1, 3), &k, &f2), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn init_term_examples() {
        let f2 = aw("F2");
        let k = CoefficientField::Prime(2);
        let f = ovic(&f2, &[1, 0], &[1, 0]);
        let g = ovic(&f2, &[0, 1], &[0, 1]);
        let x = ModuleElement::from_terms(&k, 1, 2, [(f.clone(), k.one()), (g.clone(), k.one())]).unwrap();
        assert_eq!(init_term(&x).unwrap(), (k.one(), g));
        let single = ModuleElement::monomial(&k, f.clone(), k.one());
        assert_eq!(init_term(&single).unwrap().1, f);
        assert_eq!(init_term(&x.sub(&k, &x).unwrap()), Err(Error::ZeroElement));
    }

    #[test]
    fn span_examples() {
        let f2 = aw("F2");
        let k = CoefficientField::Prime(2);
        let cache = HomCache::new(1 << 20);
        let id = ModuleElement::monomial(&k, OvicMorphism::identity(&f2, 1), k.one());
        let m = span_to_degree(&f2, k, 1, std::slice::from_ref(&id), 2, &cache).unwrap();
        assert_eq!(m.dims(), vec![0, 1, 6]);
        assert_eq!(initial_module_to_degree(&m, 2)[2].len(), 6);
        assert!(membership(&m, &id).unwrap().is_member());
        assert!(membership(&m, &ModuleElement::zero(1, 2)).unwrap().is_member());
        assert!(matches!(membership(&m, &ModuleElement::zero(1, 3)), Err(Error::HorizonExceeded { .. })));

        let empty = span_to_degree(&f2, k, 1, &[], 3, &cache).unwrap();
        assert_eq!(empty.dims(), vec![0, 0, 0, 0]);
        assert!(initial_module_to_degree(&empty, 3).iter().all(Vec::is_empty));

        let z = ModuleElement::monomial(&k, OvicMorphism::identity(&f2, 0), k.one());
        let p0 = span_to_degree(&f2, k, 0, &[z], 4, &cache).unwrap();
        assert_eq!(p0.dims(), vec![1; 5]);
    }

    #[test]
    fn single_element_span_and_exclusion() {
        let f2 = aw("F2");
        let k = CoefficientField::Prime(2);
        let cache = HomCache::new(1 << 20);
        let f = ovic(&f2, &[1, 0], &[1, 0]);
        let g = ovic(&f2, &[0, 1], &[0, 1]);
        let x = ModuleElement::from_terms(&k, 1, 2, [(f.clone(), k.one()), (g.clone(), k.one())]).unwrap();
        let m = span_to_degree(&f2, k, 1, std::slice::from_ref(&x), 2, &cache).unwrap();
        assert_eq!(m.degree(2).unwrap().leading(), vec![g]);
        let r = membership(&m, &ModuleElement::monomial(&k, f, k.one())).unwrap();
        assert!(!r.is_member());
        assert!(!r.remainder.is_zero());
        let r = membership(&m, &x).unwrap();
        assert!(r.is_member());
        assert_eq!(r.certificate.len(), 1);
    }

    #[test]
    fn endo_generation_small() {
        let f2 = aw("F2");
        let rep = check_endo_generation(&f2, 1, 3, 1 << 20).unwrap();
        assert_eq!(rep.counterexamples, 0);
        assert_eq!(rep.degrees.iter().map(|e| e.vic_morphisms).collect::<Vec<_>>(), vec![1, 6, 28]);
        let rep0 = check_endo_generation(&f2, 0, 2, 1 << 20).unwrap();
        assert_eq!(rep0.degrees.len(), 3);
    }
}
