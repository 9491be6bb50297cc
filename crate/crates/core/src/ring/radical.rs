//! Units, the Jacobson radical and the quotient by it.

use std::sync::Arc;

use super::{BuildOptions, FiniteRing};
use crate::error::{Error, Result};

/// A set of ring elements, kept sorted, with a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSet {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl IdealSet {
    fn from_mask(mask: Vec<bool>) -> Self {
        let members = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        IdealSet { members, mask }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// True when the set is exactly `{0}`.
    pub fn is_zero(&self, ring: &FiniteRing) -> bool {
        self.members == [ring.zero()]
    }

    /// Checks closure under addition and under left and right multiplication.
    pub fn is_ideal(&self, ring: &FiniteRing) -> bool {
        self.contains(ring.zero())
            && self.members.iter().all(|&a| {
                self.members.iter().all(|&b| self.contains(ring.add(a, b)))
                    && ring.elements().all(|r| self.contains(ring.mul(r, a)) && self.contains(ring.mul(a, r)))
            })
    }
}

/// The additive subgroup generated by `gens`.
fn additive_closure(ring: &FiniteRing, gens: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; ring.size()];
    let mut stack = vec![ring.zero()];
    mask[ring.zero()] = true;
    while let Some(x) = stack.pop() {
        for &g in gens {
            let y = ring.add(x, g);
            if !mask[y] {
                mask[y] = true;
                stack.push(y);
            }
        }
    }
    mask
}

/// The two-sided ideal generated by `gens`.
fn ideal_generated(ring: &FiniteRing, gens: &[usize]) -> IdealSet {
    let mut mask = additive_closure(ring, gens);
    loop {
        let current: Vec<usize> = (0..ring.size()).filter(|&x| mask[x]).collect();
        let mut grew = false;
        let mut next = current.clone();
        for &h in &current {
            for r in ring.elements() {
                for y in [ring.mul(r, h), ring.mul(h, r)] {
                    if !mask[y] {
                        next.push(y);
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return IdealSet::from_mask(mask);
        }
        mask = additive_closure(ring, &next);
    }
}

/// The additive span of all products `a * b` with `a` in `left`, `b` in `right`.
fn product_ideal(ring: &FiniteRing, left: &IdealSet, right: &IdealSet) -> IdealSet {
    let mut seen = vec![false; ring.size()];
    let mut gens = Vec::new();
    for &a in left.members() {
        for &b in right.members() {
            let p = ring.mul(a, b);
            if !seen[p] {
                seen[p] = true;
                gens.push(p);
            }
        }
    }
    IdealSet::from_mask(additive_closure(ring, &gens))
}

/// Least `k >= 1` with `I^k = 0`, or `None` when the powers stabilise at a nonzero ideal.
fn nilpotency_index(ring: &FiniteRing, ideal: &IdealSet) -> Option<usize> {
    let mut power = ideal.clone();
    let mut k = 1;
    loop {
        if power.is_zero(ring) {
            return Some(k);
        }
        let next = product_ideal(ring, &power, ideal);
        if next == power {
            return None;
        }
        power = next;
        k += 1;
    }
}

/// The Jacobson radical together with the facts checked about it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Radical {
    pub ideal: IdealSet,
    /// Least `k` with `J^k = 0`.
    pub nilpotency_index: usize,
    /// Number of elements `w` outside `J` for which the ideal generated by
    /// `J` and `w` was confirmed not nilpotent.
    pub maximality_checks: usize,
}

/// Elements `w` tried in the maximality spot check.
const MAXIMALITY_SPOT_CHECKS: usize = 64;

/// Computes `J(R)`.
///
/// Membership uses the one-sided criterion: `y` is in the radical iff `1 - x y`
/// is a unit for every `x` (in a finite ring one-sided inverses are two-sided).
/// The result is then checked to be a nilpotent ideal, and a spot check
/// confirms that adjoining an outside element gives a non-nilpotent ideal.
pub fn jacobson_radical(ring: &FiniteRing) -> Result<Radical> {
    let one = ring.one();
    let mask: Vec<bool> =
        ring.elements().map(|y| ring.elements().all(|x| ring.is_unit(ring.sub(one, ring.mul(x, y))))).collect();
    let ideal = IdealSet::from_mask(mask);
    if !ideal.is_ideal(ring) {
        return Err(Error::CounterexampleFound(format!("radical of {} is not an ideal", ring.name())));
    }
    let nilpotency_index = nilpotency_index(ring, &ideal)
        .ok_or_else(|| Error::CounterexampleFound(format!("radical of {} is not nilpotent", ring.name())))?;
    let mut maximality_checks = 0;
    for w in ring.elements().filter(|&w| !ideal.contains(w)).take(MAXIMALITY_SPOT_CHECKS) {
        let mut gens = ideal.members().to_vec();
        gens.push(w);
        let bigger = ideal_generated(ring, &gens);
        if nilpotency_index_bounded(ring, &bigger).is_some() {
            return Err(Error::CounterexampleFound(format!(
                "ideal generated by J and {w} is nilpotent in {}",
                ring.name()
            )));
        }
        maximality_checks += 1;
    }
    Ok(Radical { ideal, nilpotency_index, maximality_checks })
}

fn nilpotency_index_bounded(ring: &FiniteRing, ideal: &IdealSet) -> Option<usize> {
    nilpotency_index(ring, ideal).filter(|&k| k <= ring.size())
}

/// The radical straight from its definition: all `y` such that `1 - x y z` is
/// a unit for every `x` and `z`. Cubic in the ring size; used as an oracle.
pub fn jacobson_radical_definitional(ring: &FiniteRing) -> Vec<usize> {
    let one = ring.one();
    ring.elements()
        .filter(|&y| {
            ring.elements().all(|x| {
                let xy = ring.mul(x, y);
                ring.elements().all(|z| ring.is_unit(ring.sub(one, ring.mul(xy, z))))
            })
        })
        .collect()
}

/// `R / J(R)` with the projection and a section.
#[derive(Debug, Clone)]
pub struct QuotientData {
    source: Arc<FiniteRing>,
    radical: Radical,
    quotient: Arc<FiniteRing>,
    projection: Vec<usize>,
    section: Vec<usize>,
}

impl QuotientData {
    pub fn source(&self) -> &FiniteRing {
        &self.source
    }

    pub fn source_arc(&self) -> &Arc<FiniteRing> {
        &self.source
    }

    pub fn quotient(&self) -> &FiniteRing {
        &self.quotient
    }

    pub fn radical(&self) -> &Radical {
        &self.radical
    }

    pub fn ideal(&self) -> &IdealSet {
        &self.radical.ideal
    }

    /// The bar map `x -> x + J`.
    pub fn project(&self, x: usize) -> usize {
        self.projection[x]
    }

    /// The smallest source index in the coset of `xbar`.
    pub fn section(&self, xbar: usize) -> usize {
        self.section[xbar]
    }

    pub fn projection_table(&self) -> &[usize] {
        &self.projection
    }

    pub fn section_table(&self) -> &[usize] {
        &self.section
    }

    /// Builds the quotient of `source` by its radical.
    ///
    /// Quotient elements are numbered in increasing order of their smallest
    /// coset representative, which is also the section.
    pub fn new(source: Arc<FiniteRing>) -> Result<Self> {
        let ring = &*source;
        let radical = jacobson_radical(ring)?;
        let n = ring.size();
        let mut projection = vec![usize::MAX; n];
        let mut section = Vec::new();
        for x in ring.elements() {
            if projection[x] != usize::MAX {
                continue;
            }
            let idx = section.len();
            section.push(x);
            for &j in radical.ideal.members() {
                projection[ring.add(x, j)] = idx;
            }
        }
        let m = section.len();
        let mut add = Vec::with_capacity(m * m);
        let mut mul = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                add.push(projection[ring.add(section[a], section[b])] as u32);
                mul.push(projection[ring.mul(section[a], section[b])] as u32);
            }
        }
        // Operations must not depend on the chosen representatives.
        for a in ring.elements() {
            for b in ring.elements() {
                let (pa, pb) = (projection[a], projection[b]);
                if projection[ring.add(a, b)] != add[pa * m + pb] as usize
                    || projection[ring.mul(a, b)] != mul[pa * m + pb] as usize
                {
                    return Err(Error::CounterexampleFound(format!(
                        "quotient operations of {} depend on representatives at ({a},{b})",
                        ring.name()
                    )));
                }
            }
        }
        let labels = section.iter().map(|&x| format!("{}+J", ring.label(x))).collect();
        let quotient = FiniteRing::from_tables(
            format!("{}/J", ring.name()),
            projection[ring.zero()],
            projection[ring.one()],
            add,
            mul,
            Some(labels),
            &BuildOptions { size_cap: usize::MAX, ..BuildOptions::default() },
        )?;
        let qrad = jacobson_radical(&quotient)?;
        if !qrad.ideal.is_zero(&quotient) {
            return Err(Error::CounterexampleFound(format!("quotient of {} has a nonzero radical", ring.name())));
        }
        Ok(QuotientData { source, radical, quotient: Arc::new(quotient), projection, section })
    }
}

pub fn quotient_by_radical(ring: &FiniteRing) -> Result<QuotientData> {
    QuotientData::new(Arc::new(ring.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{builtin, zmod};

    #[test]
    fn radical_of_field_is_zero() {
        let r = zmod(2).unwrap();
        assert_eq!(jacobson_radical(&r).unwrap().ideal.members(), &[0]);
    }

    #[test]
    fn radical_of_z4() {
        let r = zmod(4).unwrap();
        let rad = jacobson_radical(&r).unwrap();
        assert_eq!(rad.ideal.members(), &[0, 2]);
        assert_eq!(rad.nilpotency_index, 2);
        assert_eq!(jacobson_radical_definitional(&r), vec![0, 2]);
    }

    #[test]
    fn radical_of_t2f2_is_strictly_upper() {
        let r = builtin("T2F2").unwrap();
        // coordinates (a11, a12, a22) in mixed radix: E12 = 0b010
        assert_eq!(jacobson_radical(&r).unwrap().ideal.members(), &[0, 2]);
    }

    #[test]
    fn radical_of_z8_has_index_three() {
        let r = zmod(8).unwrap();
        let rad = jacobson_radical(&r).unwrap();
        assert_eq!(rad.ideal.members(), &[0, 2, 4, 6]);
        assert_eq!(rad.nilpotency_index, 3);
    }

    #[test]
    fn quotient_of_z4_is_f2() {
        let r = zmod(4).unwrap();
        let q = quotient_by_radical(&r).unwrap();
        assert_eq!(q.quotient().size(), 2);
        assert_eq!(q.projection_table(), &[0, 1, 0, 1]);
        assert_eq!(q.section_table(), &[0, 1]);
        let f2 = zmod(2).unwrap();
        assert_eq!(q.quotient().to_file().add, f2.to_file().add);
        assert_eq!(q.quotient().to_file().mul, f2.to_file().mul);
    }

    #[test]
    fn quotient_of_t2f2_has_two_orthogonal_idempotents() {
        let r = builtin("T2F2").unwrap();
        let q = quotient_by_radical(&r).unwrap();
        let qb = q.quotient();
        assert_eq!(qb.size(), 4);
        let idem: Vec<usize> =
            qb.elements().filter(|&e| qb.is_idempotent(e) && e != qb.zero() && e != qb.one()).collect();
        assert_eq!(idem.len(), 2);
        assert_eq!(qb.mul(idem[0], idem[1]), qb.zero());
        assert_eq!(qb.add(idem[0], idem[1]), qb.one());
    }

    #[test]
    fn quotient_of_semisimple_is_bijective() {
        let r = builtin("M2F2").unwrap();
        let q = quotient_by_radical(&r).unwrap();
        assert_eq!(q.quotient().size(), 16);
        assert!(q.projection_table().iter().enumerate().all(|(i, &p)| i == p));
    }
}
