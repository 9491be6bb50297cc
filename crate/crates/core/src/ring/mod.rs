//! Finite rings given by explicit addition and multiplication tables.
//!
//! Every ring in the crate is a [`FiniteRing`]: elements are the indices
//! `0..size`, and the canonical element order is the index order fixed by the
//! constructor. That order is reused everywhere a "fixed total order" on ring
//! elements is needed (morphism comparison, word letters, report output).
//!
//! Constructors document their indexing. Composite rings (matrices, group
//! rings, triangular matrices) encode their coordinates in mixed radix with
//! the most significant coordinate first, so index order agrees with the
//! lexicographic order of coordinate tuples.

mod build;
mod matrix;
mod radical;

pub use build::{
    builtin, builtin_names, builtin_rings, group_ring, matrix_ring, product, upper_triangular, zmod, BuildOptions,
    GroupTable, RingSpec,
};
pub(crate) use matrix::increment as increment_counter;
pub use matrix::{matrix_invertible, Invertibility, RMatrix};
pub use radical::{
    jacobson_radical, jacobson_radical_definitional, quotient_by_radical, IdealSet, QuotientData, Radical,
};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// A finite ring with unit, stored as full operation tables.
#[derive(Debug, Clone)]
pub struct FiniteRing {
    name: String,
    size: usize,
    zero: usize,
    one: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    labels: Option<Vec<String>>,
    units: OnceLock<Vec<Option<u32>>>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.zero == other.zero
            && self.one == other.one
            && self.add == other.add
            && self.mul == other.mul
    }
}

impl Eq for FiniteRing {}

/// The JSON ring file format consumed and emitted by every tool.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingFile {
    pub name: String,
    pub size: usize,
    pub zero: usize,
    pub one: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl FiniteRing {
    /// Validates the tables and builds the ring.
    ///
    /// Ring axioms are checked on all triples when `size <= opts.exhaustive_limit`,
    /// otherwise on `opts.sampled_triples` seeded random triples.
    pub fn from_tables(
        name: impl Into<String>,
        zero: usize,
        one: usize,
        add: Vec<u32>,
        mul: Vec<u32>,
        labels: Option<Vec<String>>,
        opts: &BuildOptions,
    ) -> Result<Self> {
        let name = name.into();
        let n2 = add.len();
        let size = (n2 as f64).sqrt().round() as usize;
        if size == 0 || size * size != n2 || mul.len() != n2 {
            return Err(Error::InvalidTables {
                law: "table shape".into(),
                witness: format!("add has {} entries, mul has {}", add.len(), mul.len()),
            });
        }
        if size > opts.size_cap {
            return Err(Error::SizeCapExceeded { size: size as u128, cap: opts.size_cap });
        }
        if zero >= size || one >= size {
            return Err(Error::InvalidTables {
                law: "distinguished elements in range".into(),
                witness: format!("zero={zero}, one={one}, size={size}"),
            });
        }
        if let Some(bad) = add.iter().chain(mul.iter()).find(|&&v| v as usize >= size) {
            return Err(Error::InvalidTables { law: "entries in range".into(), witness: format!("entry {bad}") });
        }
        if let Some(l) = &labels {
            if l.len() != size {
                return Err(Error::InvalidTables {
                    law: "label count".into(),
                    witness: format!("{} labels for {} elements", l.len(), size),
                });
            }
        }
        if size > 1 && zero == one {
            return Err(Error::InvalidTables { law: "zero != one".into(), witness: format!("zero = one = {zero}") });
        }

        let mut neg = vec![u32::MAX; size];
        for a in 0..size {
            for b in 0..size {
                if add[a * size + b] as usize == zero {
                    neg[a] = b as u32;
                    break;
                }
            }
            if neg[a] == u32::MAX {
                return Err(Error::InvalidTables { law: "additive inverse".into(), witness: format!("element {a}") });
            }
        }

        let ring = FiniteRing { name, size, zero, one, add, mul, neg, labels, units: OnceLock::new() };
        ring.check_axioms(opts)?;
        Ok(ring)
    }

    fn check_axioms(&self, opts: &BuildOptions) -> Result<()> {
        let n = self.size;
        let fail = |law: &str, w: String| Err(Error::InvalidTables { law: law.into(), witness: w });
        for a in 0..n {
            if self.add(a, self.zero) != a || self.add(self.zero, a) != a {
                return fail("additive identity", format!("a={a}"));
            }
            if self.mul(a, self.one) != a || self.mul(self.one, a) != a {
                return fail("multiplicative identity", format!("a={a}"));
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    return fail("commutativity of +", format!("a={a}, b={b}"));
                }
            }
        }
        let check = |a: usize, b: usize, c: usize| -> Result<()> {
            if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                return fail("associativity of +", format!("a={a}, b={b}, c={c}"));
            }
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return fail("associativity of *", format!("a={a}, b={b}, c={c}"));
            }
            if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                return fail("left distributivity", format!("a={a}, b={b}, c={c}"));
            }
            if self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c)) {
                return fail("right distributivity", format!("a={a}, b={b}, c={c}"));
            }
            Ok(())
        };
        if n <= opts.exhaustive_limit {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..opts.sampled_triples {
                check(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
            }
        }
        Ok(())
    }

    pub fn from_file(file: &RingFile, opts: &BuildOptions) -> Result<Self> {
        let n = file.size;
        if file.add.len() != n || file.mul.len() != n || file.add.iter().chain(file.mul.iter()).any(|r| r.len() != n) {
            return Err(Error::InvalidTables { law: "table shape".into(), witness: format!("declared size {n}") });
        }
        let flat = |t: &Vec<Vec<usize>>| -> Result<Vec<u32>> {
            t.iter()
                .flatten()
                .map(|&v| {
                    u32::try_from(v).map_err(|_| Error::InvalidTables {
                        law: "entries in range".into(),
                        witness: format!("entry {v}"),
                    })
                })
                .collect()
        };
        FiniteRing::from_tables(
            file.name.clone(),
            file.zero,
            file.one,
            flat(&file.add)?,
            flat(&file.mul)?,
            file.labels.clone(),
            opts,
        )
    }

    pub fn to_file(&self) -> RingFile {
        let n = self.size;
        let rows = |t: &Vec<u32>| -> Vec<Vec<usize>> {
            (0..n).map(|a| (0..n).map(|b| t[a * n + b] as usize).collect()).collect()
        };
        RingFile {
            name: self.name.clone(),
            size: n,
            zero: self.zero,
            one: self.one,
            add: rows(&self.add),
            mul: rows(&self.mul),
            labels: self.labels.clone(),
        }
    }

    /// SHA-256 of the canonical JSON encoding, hex encoded.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(&self.to_file()).expect("ring file serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.size + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Sum of `k` copies of `a`.
    pub fn times(&self, k: usize, a: usize) -> usize {
        (0..k).fold(self.zero, |acc, _| self.add(acc, a))
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|a| (a..self.size).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    fn unit_table(&self) -> &[Option<u32>] {
        self.units.get_or_init(|| {
            (0..self.size)
                .map(|x| {
                    (0..self.size).find(|&y| self.mul(x, y) == self.one && self.mul(y, x) == self.one).map(|y| y as u32)
                })
                .collect()
        })
    }

    /// Two-sided inverse of `x`, if one exists.
    pub fn inverse(&self, x: usize) -> Option<usize> {
        self.unit_table()[x].map(|y| y as usize)
    }

    pub fn is_unit(&self, x: usize) -> bool {
        self.inverse(x).is_some()
    }

    pub fn element(&self, index: usize) -> RingElement<'_> {
        assert!(index < self.size, "element index {index} out of range for {}", self.name);
        RingElement { ring: self, index }
    }
}

/// An element paired with its ring, for operator-style arithmetic.
#[derive(Clone, Copy)]
pub struct RingElement<'a> {
    ring: &'a FiniteRing,
    index: usize,
}

impl<'a> RingElement<'a> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn ring(&self) -> &'a FiniteRing {
        self.ring
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(self.index)
    }

    pub fn inverse(&self) -> Option<RingElement<'a>> {
        self.ring.inverse(self.index).map(|i| self.ring.element(i))
    }
}

impl PartialEq for RingElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.ring, other.ring) && self.index == other.index
    }
}

impl fmt::Debug for RingElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.ring.name, self.index)
    }
}

impl fmt::Display for RingElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ring.label(self.index))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:ident) => {
        impl<'a> $tr for RingElement<'a> {
            type Output = RingElement<'a>;
            fn $m(self, rhs: Self) -> Self::Output {
                assert!(std::ptr::eq(self.ring, rhs.ring), "elements of different rings");
                RingElement { ring: self.ring, index: self.ring.$op(self.index, rhs.index) }
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl<'a> Neg for RingElement<'a> {
    type Output = RingElement<'a>;
    fn neg(self) -> Self::Output {
        RingElement { ring: self.ring, index: self.ring.neg(self.index) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod4_addition_wraps() {
        let r = zmod(4).unwrap();
        assert_eq!(r.size(), 4);
        assert_eq!(r.add(1, 3), 0);
        assert_eq!(r.neg(1), 3);
    }

    #[test]
    fn units_in_zmod4() {
        let r = zmod(4).unwrap();
        assert!(r.is_unit(r.one()));
        assert!(!r.is_unit(2));
        assert_eq!(r.inverse(3), Some(3));
    }

    #[test]
    fn ring_element_operators() {
        let r = zmod(5).unwrap();
        let two = r.element(2);
        let three = r.element(3);
        assert_eq!((two * three).index(), 1);
        assert_eq!((two - three).index(), 4);
        assert_eq!((-two).index(), 3);
        assert_eq!(two.inverse().unwrap().index(), 3);
    }

    #[test]
    fn corrupted_tables_are_rejected() {
        let r = zmod(3).unwrap();
        let mut file = r.to_file();
        file.mul[2][2] = 2;
        let err = FiniteRing::from_file(&file, &BuildOptions::default()).unwrap_err();
        assert_eq!(err.kind(), "InvalidTables");
    }

    #[test]
    fn zero_equal_one_rejected() {
        let file = RingFile {
            name: "bad".into(),
            size: 2,
            zero: 0,
            one: 0,
            add: vec![vec![0, 1], vec![1, 0]],
            mul: vec![vec![0, 0], vec![0, 1]],
            labels: None,
        };
        let err = FiniteRing::from_file(&file, &BuildOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidTables { .. }));
    }

    #[test]
    fn file_roundtrip_is_identical() {
        for r in builtin_rings().unwrap() {
            let back = FiniteRing::from_file(&r.to_file(), &BuildOptions::default()).unwrap();
            assert_eq!(back, r);
            assert_eq!(back.content_hash(), r.content_hash());
        }
    }
}
