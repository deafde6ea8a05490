//! Relations between finite state sets and their coherent pairs.
//!
//! A [`Relation`] is stored as a bitset over `X1 x X2`, which makes the span
//! of its two coordinate projections jointly mono by construction.

use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::StateSet;

/// Default cap on `|X1| + |X2|` for brute-force coherent-pair enumeration.
pub const DEFAULT_COHERENT_BOUND: usize = 24;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n1: usize,
    n2: usize,
    bits: FixedBitSet,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation{}x{}{:?}", self.n1, self.n2, self.pairs().collect::<Vec<_>>())
    }
}

impl Relation {
    /// The bottom relation.
    pub fn empty(n1: usize, n2: usize) -> Self {
        Relation {
            n1,
            n2,
            bits: FixedBitSet::with_capacity(n1 * n2),
        }
    }

    pub fn total(n1: usize, n2: usize) -> Self {
        let mut r = Self::empty(n1, n2);
        r.bits.insert_range(..);
        r
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Self::empty(n, n);
        for i in 0..n {
            r.insert(i, i);
        }
        r
    }

    pub fn from_pairs(n1: usize, n2: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut r = Self::empty(n1, n2);
        for &(i, j) in pairs {
            if i >= n1 {
                return Err(Error::StateOutOfRange { index: i, size: n1 });
            }
            if j >= n2 {
                return Err(Error::StateOutOfRange { index: j, size: n2 });
            }
            r.insert(i, j);
        }
        Ok(r)
    }

    /// Relation whose pair `(i, j)` is bit `i * n2 + j` of `mask`.
    pub fn from_mask(n1: usize, n2: usize, mask: u64) -> Self {
        let mut r = Self::empty(n1, n2);
        for k in 0..n1 * n2 {
            if mask >> k & 1 == 1 {
                r.bits.insert(k);
            }
        }
        r
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits.contains(i * self.n2 + j)
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        assert!(i < self.n1 && j < self.n2, "pair ({i},{j}) outside {}x{}", self.n1, self.n2);
        self.bits.insert(i * self.n2 + j);
    }

    pub fn remove(&mut self, i: usize, j: usize) {
        self.bits.set(i * self.n2 + j, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Pairs in ascending `(i, j)` order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n2 = self.n2;
        self.bits.ones().map(move |k| (k / n2, k % n2))
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.shape() == other.shape() && self.bits.is_subset(&other.bits)
    }

    pub fn converse(&self) -> Relation {
        let mut r = Relation::empty(self.n2, self.n1);
        for (i, j) in self.pairs() {
            r.insert(j, i);
        }
        r
    }

    pub fn union_with(&mut self, other: &Relation) {
        debug_assert_eq!(self.shape(), other.shape());
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &Relation) {
        debug_assert_eq!(self.shape(), other.shape());
        self.bits.intersect_with(&other.bits);
    }

    /// `B[a1]`.
    pub fn image(&self, a1: &StateSet) -> StateSet {
        let mut out = StateSet::with_capacity(self.n2);
        for (i, j) in self.pairs() {
            if a1.contains(i) {
                out.insert(j);
            }
        }
        out
    }

    /// `B^-1[a2]`.
    pub fn preimage(&self, a2: &StateSet) -> StateSet {
        let mut out = StateSet::with_capacity(self.n1);
        for (i, j) in self.pairs() {
            if a2.contains(j) {
                out.insert(i);
            }
        }
        out
    }

    /// Whether `(a1, a2)` is coherent: `B[a1] ⊆ a2` and `B^-1[a2] ⊆ a1`.
    pub fn is_coherent(&self, a1: &StateSet, a2: &StateSet) -> bool {
        self.pairs().all(|(i, j)| a1.contains(i) == a2.contains(j))
    }

    fn check_sizes(&self, what: usize) -> Result<()> {
        if what > u64::BITS as usize {
            return Err(Error::BoundExceeded {
                what: "states for mask enumeration",
                size: what,
                bound: u64::BITS as usize,
            });
        }
        Ok(())
    }

    /// Per-state image and preimage masks.
    fn masks(&self) -> (Vec<u64>, Vec<u64>) {
        let mut img = vec![0u64; self.n1];
        let mut pre = vec![0u64; self.n2];
        for (i, j) in self.pairs() {
            img[i] |= 1 << j;
            pre[j] |= 1 << i;
        }
        (img, pre)
    }
}

/// A `B`-coherent pair of predicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoherentPair {
    pub left: StateSet,
    pub right: StateSet,
}

impl CoherentPair {
    pub fn new(left: StateSet, right: StateSet) -> Self {
        CoherentPair { left, right }
    }

    pub fn complement(&self) -> CoherentPair {
        let mut l = self.left.clone();
        l.toggle_range(..);
        let mut r = self.right.clone();
        r.toggle_range(..);
        CoherentPair { left: l, right: r }
    }

    pub fn union_with(&mut self, other: &CoherentPair) {
        self.left.union_with(&other.left);
        self.right.union_with(&other.right);
    }
}

fn set_from_mask(n: usize, mask: u64) -> StateSet {
    let mut s = StateSet::with_capacity(n);
    for i in 0..n {
        if mask >> i & 1 == 1 {
            s.insert(i);
        }
    }
    s
}

fn mask_union(masks: &[u64], set: u64) -> u64 {
    masks
        .iter()
        .enumerate()
        .filter(|(i, _)| set >> i & 1 == 1)
        .fold(0, |acc, (_, m)| acc | m)
}

/// Ascending enumeration of the submasks of `free`, each or-ed with `fixed`.
fn submasks(fixed: u64, free: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let s = next?;
        next = if s == free { None } else { Some(s.wrapping_sub(free) & free) };
        Some(fixed | s)
    })
}

/// All coherent pairs of `b`, ordered by the combined mask with `a1` in the
/// low bits and `a2` in the high bits.
pub fn coherent_pairs(b: &Relation) -> Result<Vec<CoherentPair>> {
    coherent_pairs_bounded(b, DEFAULT_COHERENT_BOUND)
}

pub fn coherent_pairs_bounded(b: &Relation, bound: usize) -> Result<Vec<CoherentPair>> {
    let (n1, n2) = b.shape();
    if n1 + n2 > bound {
        return Err(Error::BoundExceeded {
            what: "coherent-pair enumeration over |X1|+|X2|",
            size: n1 + n2,
            bound,
        });
    }
    Ok(coherent_masks(b)?
        .into_iter()
        .map(|(l, r)| CoherentPair::new(set_from_mask(n1, l), set_from_mask(n2, r)))
        .collect())
}

/// Coherent pairs as `(a1, a2)` bitmasks, in the same order as
/// [`coherent_pairs`].
pub(crate) fn coherent_masks(b: &Relation) -> Result<Vec<(u64, u64)>> {
    let (n1, n2) = b.shape();
    b.check_sizes(n1.max(n2))?;
    let (img, pre) = b.masks();
    let all2 = if n2 == 64 { u64::MAX } else { (1u64 << n2) - 1 };
    let all1 = if n1 == 64 { u64::MAX } else { (1u64 << n1) - 1 };
    let mut out = Vec::new();
    for a2 in submasks(0, all2) {
        // a1 must contain B^-1[a2] and avoid B^-1[X2 \ a2].
        let must = mask_union(&pre, a2);
        let forbid = mask_union(&pre, all2 & !a2);
        if must & forbid != 0 {
            continue;
        }
        let free = all1 & !must & !forbid;
        for a1 in submasks(must, free) {
            debug_assert_eq!(mask_union(&img, a1) & !a2, 0);
            out.push((a1, a2));
        }
    }
    Ok(out)
}

/// The least coherent pair containing the given seed states.
pub fn coherent_closure(b: &Relation, mut left: StateSet, mut right: StateSet) -> CoherentPair {
    loop {
        let r2 = b.image(&left);
        let before = (left.count_ones(..), right.count_ones(..));
        right.union_with(&r2);
        let l2 = b.preimage(&right);
        left.union_with(&l2);
        if (left.count_ones(..), right.count_ones(..)) == before {
            return CoherentPair::new(left, right);
        }
    }
}

/// The principal coherent pairs: one closure per state of `X1` (seeded on the
/// left), then one per state of `X2` (seeded on the right). Every coherent
/// pair is a componentwise union of some of these.
pub fn coherent_generators(b: &Relation) -> Vec<CoherentPair> {
    let (n1, n2) = b.shape();
    let mut out = Vec::with_capacity(n1 + n2);
    for x in 0..n1 {
        let mut l = StateSet::with_capacity(n1);
        l.insert(x);
        out.push(coherent_closure(b, l, StateSet::with_capacity(n2)));
    }
    for y in 0..n2 {
        let mut r = StateSet::with_capacity(n2);
        r.insert(y);
        out.push(coherent_closure(b, StateSet::with_capacity(n1), r));
    }
    out
}

/// Union of relations sharing the shape `(n1, n2)`; the empty join is the
/// bottom relation.
pub fn join(n1: usize, n2: usize, rs: &[Relation]) -> Result<Relation> {
    let mut out = bottom(n1, n2);
    for r in rs {
        if r.shape() != (n1, n2) {
            return Err(Error::ShapeMismatch {
                expected: (n1, n2),
                found: r.shape(),
            });
        }
        out.union_with(r);
    }
    Ok(out)
}

pub fn bottom(n1: usize, n2: usize) -> Relation {
    Relation::empty(n1, n2)
}

/// Relational composition `{(x1, x3) | ∃x2. x1 B x2 ∧ x2 B' x3}`.
pub fn compose(b: &Relation, b2: &Relation) -> Result<Relation> {
    let (n1, m) = b.shape();
    let (m2, n3) = b2.shape();
    if m != m2 {
        return Err(Error::ShapeMismatch {
            expected: (m, n3),
            found: (m2, n3),
        });
    }
    let mut out = Relation::empty(n1, n3);
    for (i, j) in b.pairs() {
        for k in 0..n3 {
            if b2.contains(j, k) {
                out.insert(i, k);
            }
        }
    }
    Ok(out)
}

/// Whether both projections are surjective.
pub fn is_full(b: &Relation) -> bool {
    let (n1, n2) = b.shape();
    let mut left = FixedBitSet::with_capacity(n1);
    let mut right = FixedBitSet::with_capacity(n2);
    for (i, j) in b.pairs() {
        left.insert(i);
        right.insert(j);
    }
    left.count_ones(..) == n1 && right.count_ones(..) == n2
}

/// `{"pairs": [[i, j], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub pairs: Vec<[usize; 2]>,
}

impl RelationFile {
    pub fn from_relation(r: &Relation) -> Self {
        RelationFile {
            pairs: r.pairs().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn to_relation(&self, n1: usize, n2: usize) -> Result<Relation> {
        let pairs: Vec<(usize, usize)> = self.pairs.iter().map(|p| (p[0], p[1])).collect();
        Relation::from_pairs(n1, n2, &pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(bits: &[usize], n: usize) -> StateSet {
        let mut s = StateSet::with_capacity(n);
        bits.iter().for_each(|&b| s.insert(b));
        s
    }

    fn pair(l: &[usize], n1: usize, r: &[usize], n2: usize) -> CoherentPair {
        CoherentPair::new(set(l, n1), set(r, n2))
    }

    /// Brute-force oracle: all 2^(n1+n2) candidates filtered by the two
    /// inclusions, in combined-mask order.
    fn oracle_pairs(b: &Relation) -> Vec<CoherentPair> {
        let (n1, n2) = b.shape();
        let mut out = Vec::new();
        for m in 0u64..1 << (n1 + n2) {
            let a1 = set_from_mask(n1, m & ((1 << n1) - 1));
            let a2 = set_from_mask(n2, m >> n1);
            let img_ok = b.image(&a1).is_subset(&a2);
            let pre_ok = b.preimage(&a2).is_subset(&a1);
            if img_ok && pre_ok {
                out.push(CoherentPair::new(a1, a2));
            }
        }
        out
    }

    #[test]
    fn coherent_pairs_small_example() {
        let b = Relation::from_pairs(2, 1, &[(0, 0)]).unwrap();
        let expected = vec![
            pair(&[], 2, &[], 1),
            pair(&[1], 2, &[], 1),
            pair(&[0], 2, &[0], 1),
            pair(&[0, 1], 2, &[0], 1),
        ];
        assert_eq!(oracle_pairs(&b), expected);
        assert_eq!(coherent_pairs(&b).unwrap(), expected);
    }

    #[test]
    fn identity_and_empty() {
        let id = Relation::identity(3);
        let ps = coherent_pairs(&id).unwrap();
        assert_eq!(ps.len(), 8);
        assert!(ps.iter().all(|p| p.left == p.right));
        let e = Relation::empty(2, 3);
        assert_eq!(coherent_pairs(&e).unwrap().len(), 1 << 5);
    }

    #[test]
    fn bound_is_enforced() {
        let r = Relation::empty(13, 12);
        assert!(matches!(coherent_pairs(&r), Err(Error::BoundExceeded { .. })));
        assert!(coherent_pairs_bounded(&Relation::empty(3, 3), 5).is_err());
    }

    #[test]
    fn generators_examples() {
        let id = Relation::identity(2);
        let g = coherent_generators(&id);
        assert_eq!(g[..2], [pair(&[0], 2, &[0], 2), pair(&[1], 2, &[1], 2)]);

        let b = Relation::from_pairs(2, 1, &[(0, 0)]).unwrap();
        let g = coherent_generators(&b);
        assert_eq!(g[..2], [pair(&[0], 2, &[0], 1), pair(&[1], 2, &[], 1)]);
        assert_eq!(g[2..], [pair(&[0], 2, &[0], 1)]);

        let t = Relation::total(2, 2);
        let g = coherent_generators(&t);
        assert_eq!(g.len(), 4);
        assert!(g.iter().all(|p| *p == pair(&[0, 1], 2, &[0, 1], 2)));
    }

    /// Every relation on n1 + n2 <= 6 (with n1, n2 >= 1).
    fn small_relations() -> impl Iterator<Item = Relation> {
        (1..=5usize).flat_map(|n1| {
            (1..=(6 - n1).min(4)).flat_map(move |n2| {
                let cap = if n1 * n2 > 9 { 512 } else { 1u64 << (n1 * n2) };
                (0..cap).map(move |m| Relation::from_mask(n1, n2, m))
            })
        })
    }

    #[test]
    fn exhaustive_coherent_pair_properties() {
        for b in small_relations() {
            let ps = coherent_pairs(&b).unwrap();
            assert_eq!(ps, oracle_pairs(&b), "{b:?}");
            let set: std::collections::HashSet<_> = ps.iter().cloned().collect();
            for p in &ps {
                assert!(set.contains(&p.complement()));
            }
            for p in ps.iter().step_by(3) {
                for q in ps.iter().step_by(5) {
                    let mut u = p.clone();
                    u.union_with(q);
                    assert!(set.contains(&u));
                    let mut l = p.left.clone();
                    l.intersect_with(&q.left);
                    let mut r = p.right.clone();
                    r.intersect_with(&q.right);
                    assert!(set.contains(&CoherentPair::new(l, r)));
                }
            }
            // every coherent pair is a union of generators
            let gens = coherent_generators(&b);
            for p in &ps {
                let (n1, n2) = b.shape();
                let mut acc = pair(&[], n1, &[], n2);
                for g in &gens {
                    if g.left.is_subset(&p.left) && g.right.is_subset(&p.right) {
                        acc.union_with(g);
                    }
                }
                assert_eq!(&acc, p);
            }
        }
    }

    #[test]
    fn join_and_compose_examples() {
        let a = Relation::from_pairs(2, 2, &[(0, 0)]).unwrap();
        let b = Relation::from_pairs(2, 2, &[(1, 1)]).unwrap();
        assert_eq!(join(2, 2, &[a.clone(), b.clone()]).unwrap(), Relation::identity(2));
        assert_eq!(join(2, 2, &[]).unwrap(), bottom(2, 2));
        assert_eq!(join(2, 2, &[a.clone(), a.clone()]).unwrap(), a);
        assert!(join(2, 3, std::slice::from_ref(&a)).is_err());

        assert_eq!(
            compose(&Relation::from_pairs(1, 1, &[(0, 0)]).unwrap(), &Relation::from_pairs(1, 1, &[(0, 0)]).unwrap()).unwrap(),
            Relation::from_pairs(1, 1, &[(0, 0)]).unwrap()
        );
        assert!(compose(&a, &Relation::empty(2, 3)).unwrap().is_empty());
        let c = compose(
            &Relation::from_pairs(1, 2, &[(0, 0), (0, 1)]).unwrap(),
            &Relation::from_pairs(2, 1, &[(1, 0)]).unwrap(),
        )
        .unwrap();
        assert_eq!(c.pairs().collect::<Vec<_>>(), vec![(0, 0)]);
        assert!(compose(&a, &Relation::empty(3, 1)).is_err());
    }

    #[test]
    fn lattice_and_composition_laws() {
        let rels: Vec<Relation> = (0..16).map(|m| Relation::from_mask(2, 2, m)).collect();
        let id = Relation::identity(2);
        for x in &rels {
            assert_eq!(&join(2, 2, &[x.clone(), bottom(2, 2)]).unwrap(), x);
            assert_eq!(&compose(x, &id).unwrap(), x);
            assert_eq!(&compose(&id, x).unwrap(), x);
            for y in &rels {
                assert_eq!(join(2, 2, &[x.clone(), y.clone()]).unwrap(), join(2, 2, &[y.clone(), x.clone()]).unwrap());
                for z in rels.iter().step_by(3) {
                    assert_eq!(
                        join(2, 2, &[join(2, 2, &[x.clone(), y.clone()]).unwrap(), z.clone()]).unwrap(),
                        join(2, 2, &[x.clone(), join(2, 2, &[y.clone(), z.clone()]).unwrap()]).unwrap()
                    );
                    assert_eq!(
                        compose(&compose(x, y).unwrap(), z).unwrap(),
                        compose(x, &compose(y, z).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn fullness() {
        assert!(is_full(&Relation::total(2, 3)));
        assert!(!is_full(&Relation::empty(2, 2)));
        assert!(is_full(&Relation::identity(3)));
        assert!(!is_full(&Relation::from_pairs(2, 2, &[(0, 0), (1, 0)]).unwrap()));
        assert!(is_full(&Relation::empty(0, 0)));
    }
}
