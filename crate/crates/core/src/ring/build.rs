//! Ring constructors and the built-in ring catalogue.

use serde::{Deserialize, Serialize};

use super::{FiniteRing, RingFile};
use crate::error::{Error, Result};

/// Limits applied while building and validating rings.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Largest accepted ring size.
    pub size_cap: usize,
    /// Rings up to this size have their axioms checked on every triple.
    pub exhaustive_limit: usize,
    /// Number of random triples checked above the exhaustive limit.
    pub sampled_triples: usize,
    pub seed: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { size_cap: 65536, exhaustive_limit: 256, sampled_triples: 200_000, seed: 0 }
    }
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub name: String,
    pub table: Vec<Vec<usize>>,
}

impl GroupTable {
    pub fn cyclic(n: usize) -> Self {
        GroupTable { name: format!("C{n}"), table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect() }
    }

    /// The symmetric group on `k` points; elements are permutations in
    /// lexicographic order of their one-line notation, and `(s*t)(x) = s(t(x))`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| index(&(0..k).map(|x| s[t[x]]).collect::<Vec<_>>())).collect())
            .collect();
        GroupTable { name: format!("S{k}"), table }
    }

    fn identity(&self) -> Result<usize> {
        let n = self.table.len();
        let bad = |w: String| Error::InvalidTables { law: "group axioms".into(), witness: w };
        if n == 0 || self.table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(bad(format!("table of {} is malformed", self.name)));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| self.table[e][x] == x && self.table[x][e] == x))
            .ok_or_else(|| bad("no identity".into()))?;
        for a in 0..n {
            if !(0..n).any(|b| self.table[a][b] == e) {
                return Err(bad(format!("{a} has no inverse")));
            }
            for b in 0..n {
                for c in 0..n {
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]] {
                        return Err(bad(format!("associativity at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(e)
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

/// Declarative description of a ring, as accepted by [`RingSpec::build`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RingSpec {
    Tables { file: RingFile },
    Zmod { n: usize },
    Matrix { base: Box<RingSpec>, k: usize },
    Product { left: Box<RingSpec>, right: Box<RingSpec> },
    GroupRing { base: Box<RingSpec>, group: GroupTable },
    UpperTriangular { base: Box<RingSpec>, k: usize },
}

impl RingSpec {
    pub fn build(&self, opts: &BuildOptions) -> Result<FiniteRing> {
        match self {
            RingSpec::Tables { file } => FiniteRing::from_file(file, opts),
            RingSpec::Zmod { n } => zmod_with(*n, opts),
            RingSpec::Matrix { base, k } => matrix_ring_with(&base.build(opts)?, *k, opts),
            RingSpec::Product { left, right } => product_with(&left.build(opts)?, &right.build(opts)?, opts),
            RingSpec::GroupRing { base, group } => group_ring_with(&base.build(opts)?, group, opts),
            RingSpec::UpperTriangular { base, k } => upper_triangular_with(&base.build(opts)?, *k, opts),
        }
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn checked_size(base: usize, exp: usize, cap: usize) -> Result<usize> {
    let mut s: u128 = 1;
    for _ in 0..exp {
        s = s.saturating_mul(base as u128);
        if s > cap as u128 {
            return Err(Error::SizeCapExceeded { size: s, cap });
        }
    }
    Ok(s as usize)
}

/// Mixed-radix coordinates, most significant first.
fn decode(mut x: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = x % base;
        x /= base;
    }
    out
}

fn encode(coords: &[usize], base: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * base + c)
}

/// Builds a ring of `size` elements from coordinate-wise add and multiply closures.
fn tabulate(
    name: String,
    size: usize,
    zero: usize,
    one: usize,
    add: impl Fn(usize, usize) -> usize,
    mul: impl Fn(usize, usize) -> usize,
    labels: Vec<String>,
    opts: &BuildOptions,
) -> Result<FiniteRing> {
    let mut at = Vec::with_capacity(size * size);
    let mut mt = Vec::with_capacity(size * size);
    for a in 0..size {
        for b in 0..size {
            at.push(add(a, b) as u32);
            mt.push(mul(a, b) as u32);
        }
    }
    FiniteRing::from_tables(name, zero, one, at, mt, Some(labels), opts)
}

/// `Z/nZ` with element `i` at index `i`. Named `F{n}` for prime `n`, `Z{n}` otherwise.
pub fn zmod(n: usize) -> Result<FiniteRing> {
    zmod_with(n, &BuildOptions::default())
}

fn zmod_with(n: usize, opts: &BuildOptions) -> Result<FiniteRing> {
    if n == 0 {
        return Err(Error::InvalidInput("zmod(0) is infinite".into()));
    }
    if n > opts.size_cap {
        return Err(Error::SizeCapExceeded { size: n as u128, cap: opts.size_cap });
    }
    let name = if is_prime(n) { format!("F{n}") } else { format!("Z{n}") };
    tabulate(name, n, 0, 1 % n, |a, b| (a + b) % n, |a, b| (a * b) % n, (0..n).map(|i| i.to_string()).collect(), opts)
}

/// `k x k` matrices over `base`; an element's coordinates are its entries in
/// row-major order.
pub fn matrix_ring(base: &FiniteRing, k: usize) -> Result<FiniteRing> {
    matrix_ring_with(base, k, &BuildOptions::default())
}

fn matrix_ring_with(base: &FiniteRing, k: usize, opts: &BuildOptions) -> Result<FiniteRing> {
    let nb = base.size();
    let size = checked_size(nb, k * k, opts.size_cap)?;
    let dec = |x| decode(x, nb, k * k);
    let mut id = vec![base.zero(); k * k];
    for i in 0..k {
        id[i * k + i] = base.one();
    }
    let zero = encode(&vec![base.zero(); k * k], nb);
    let labels = (0..size)
        .map(|x| {
            let c = dec(x);
            let rows: Vec<String> =
                (0..k).map(|i| (0..k).map(|j| base.label(c[i * k + j])).collect::<Vec<_>>().join(" ")).collect();
            format!("[{}]", rows.join("; "))
        })
        .collect();
    tabulate(
        format!("M{k}{}", base.name()),
        size,
        zero,
        encode(&id, nb),
        |a, b| {
            let (x, y) = (dec(a), dec(b));
            encode(&x.iter().zip(&y).map(|(&p, &q)| base.add(p, q)).collect::<Vec<_>>(), nb)
        },
        |a, b| {
            let (x, y) = (dec(a), dec(b));
            let mut out = vec![base.zero(); k * k];
            for i in 0..k {
                for j in 0..k {
                    let mut acc = base.zero();
                    for t in 0..k {
                        acc = base.add(acc, base.mul(x[i * k + t], y[t * k + j]));
                    }
                    out[i * k + j] = acc;
                }
            }
            encode(&out, nb)
        },
        labels,
        opts,
    )
}

/// Upper triangular `k x k` matrices; coordinates are the entries `(i, j)`
/// with `i <= j` in row-major order.
pub fn upper_triangular(base: &FiniteRing, k: usize) -> Result<FiniteRing> {
    upper_triangular_with(base, k, &BuildOptions::default())
}

fn upper_triangular_with(base: &FiniteRing, k: usize, opts: &BuildOptions) -> Result<FiniteRing> {
    let nb = base.size();
    let slots: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let len = slots.len();
    let size = checked_size(nb, len, opts.size_cap)?;
    let full = |x: usize| -> Vec<usize> {
        let c = decode(x, nb, len);
        let mut m = vec![base.zero(); k * k];
        for (t, &(i, j)) in slots.iter().enumerate() {
            m[i * k + j] = c[t];
        }
        m
    };
    let pack = |m: &[usize]| -> usize { encode(&slots.iter().map(|&(i, j)| m[i * k + j]).collect::<Vec<_>>(), nb) };
    let mut id = vec![base.zero(); k * k];
    for i in 0..k {
        id[i * k + i] = base.one();
    }
    let labels = (0..size)
        .map(|x| {
            let m = full(x);
            let rows: Vec<String> =
                (0..k).map(|i| (0..k).map(|j| base.label(m[i * k + j])).collect::<Vec<_>>().join(" ")).collect();
            format!("[{}]", rows.join("; "))
        })
        .collect();
    tabulate(
        format!("T{k}{}", base.name()),
        size,
        pack(&vec![base.zero(); k * k]),
        pack(&id),
        |a, b| {
            let (x, y) = (full(a), full(b));
            pack(&x.iter().zip(&y).map(|(&p, &q)| base.add(p, q)).collect::<Vec<_>>())
        },
        |a, b| {
            let (x, y) = (full(a), full(b));
            let mut out = vec![base.zero(); k * k];
            for i in 0..k {
                for j in i..k {
                    let mut acc = base.zero();
                    for t in i..=j {
                        acc = base.add(acc, base.mul(x[i * k + t], y[t * k + j]));
                    }
                    out[i * k + j] = acc;
                }
            }
            pack(&out)
        },
        labels,
        opts,
    )
}

/// `left x right` with `(a, b)` at index `a * |right| + b`.
pub fn product(left: &FiniteRing, right: &FiniteRing) -> Result<FiniteRing> {
    product_with(left, right, &BuildOptions::default())
}

fn product_with(left: &FiniteRing, right: &FiniteRing, opts: &BuildOptions) -> Result<FiniteRing> {
    let (nl, nr) = (left.size(), right.size());
    let size = nl as u128 * nr as u128;
    if size > opts.size_cap as u128 {
        return Err(Error::SizeCapExceeded { size, cap: opts.size_cap });
    }
    let size = size as usize;
    let split = |x: usize| (x / nr, x % nr);
    tabulate(
        format!("{}x{}", left.name(), right.name()),
        size,
        left.zero() * nr + right.zero(),
        left.one() * nr + right.one(),
        |a, b| {
            let ((a1, a2), (b1, b2)) = (split(a), split(b));
            left.add(a1, b1) * nr + right.add(a2, b2)
        },
        |a, b| {
            let ((a1, a2), (b1, b2)) = (split(a), split(b));
            left.mul(a1, b1) * nr + right.mul(a2, b2)
        },
        (0..size).map(|x| format!("({},{})", left.label(x / nr), right.label(x % nr))).collect(),
        opts,
    )
}

/// The group ring `base[G]`; coordinates are the coefficients of the group
/// elements in table order.
pub fn group_ring(base: &FiniteRing, group: &GroupTable) -> Result<FiniteRing> {
    group_ring_with(base, group, &BuildOptions::default())
}

fn group_ring_with(base: &FiniteRing, group: &GroupTable, opts: &BuildOptions) -> Result<FiniteRing> {
    let e = group.identity()?;
    let g = group.table.len();
    let nb = base.size();
    let size = checked_size(nb, g, opts.size_cap)?;
    let dec = |x| decode(x, nb, g);
    let mut one = vec![base.zero(); g];
    one[e] = base.one();
    tabulate(
        format!("{}{}", base.name(), group.name),
        size,
        encode(&vec![base.zero(); g], nb),
        encode(&one, nb),
        |a, b| {
            let (x, y) = (dec(a), dec(b));
            encode(&x.iter().zip(&y).map(|(&p, &q)| base.add(p, q)).collect::<Vec<_>>(), nb)
        },
        |a, b| {
            let (x, y) = (dec(a), dec(b));
            let mut out = vec![base.zero(); g];
            for i in 0..g {
                for j in 0..g {
                    let t = group.table[i][j];
                    out[t] = base.add(out[t], base.mul(x[i], y[j]));
                }
            }
            encode(&out, nb)
        },
        (0..size)
            .map(|x| {
                let c = dec(x);
                format!("({})", c.iter().map(|&v| base.label(v)).collect::<Vec<_>>().join(","))
            })
            .collect(),
        opts,
    )
}

pub fn builtin_names() -> &'static [&'static str] {
    &["F2", "F3", "Z4", "Z8", "F2C2", "T2F2", "M2F2", "F2S3"]
}

/// Builds one of the catalogue rings by name.
pub fn builtin(name: &str) -> Result<FiniteRing> {
    let f2 = || zmod(2);
    match name {
        "F2" => f2(),
        "F3" => zmod(3),
        "Z4" => zmod(4),
        "Z8" => zmod(8),
        "F2C2" => group_ring(&f2()?, &GroupTable::cyclic(2)),
        "T2F2" => upper_triangular(&f2()?, 2),
        "M2F2" => matrix_ring(&f2()?, 2),
        "F2S3" => group_ring(&f2()?, &GroupTable::symmetric(3)),
        other => Err(Error::InvalidInput(format!("unknown built-in ring {other}"))),
    }
}

pub fn builtin_rings() -> Result<Vec<FiniteRing>> {
    builtin_names().iter().map(|n| builtin(n)).collect()
}
