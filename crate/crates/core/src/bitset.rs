//! Fixed-width bitsets over a vertex range `0..n`. Every hot loop in the
//! certifiers is an intersection/popcount over these words.

use serde::{Deserialize, Serialize};

const WORD_BITS: usize = 64;

/// A set of vertex ids drawn from a fixed range `0..nbits`.
///
/// Serializes as `{"n": .., "members": [..]}` with members sorted.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "SetJson", try_from = "SetJson")]
pub struct VertexSet {
    nbits: usize,
    words: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct SetJson {
    n: usize,
    members: Vec<usize>,
}

impl From<VertexSet> for SetJson {
    fn from(s: VertexSet) -> Self {
        SetJson {
            n: s.nbits,
            members: s.to_vec(),
        }
    }
}

impl TryFrom<SetJson> for VertexSet {
    type Error = String;

    fn try_from(j: SetJson) -> Result<Self, String> {
        let mut s = VertexSet::empty(j.n);
        for v in j.members {
            if v >= j.n {
                return Err(format!("member {v} outside range 0..{}", j.n));
            }
            s.insert(v);
        }
        Ok(s)
    }
}

#[inline(always)]
fn word_count(nbits: usize) -> usize {
    nbits.div_ceil(WORD_BITS)
}

impl VertexSet {
    /// Empty set over the range `0..nbits`.
    pub fn empty(nbits: usize) -> Self {
        VertexSet {
            nbits,
            words: vec![0; word_count(nbits)],
        }
    }

    /// Full set `{0, .., nbits-1}`.
    pub fn full(nbits: usize) -> Self {
        let mut s = Self::empty(nbits);
        for (i, w) in s.words.iter_mut().enumerate() {
            *w = tail_mask(nbits, i);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(nbits: usize, it: I) -> Self {
        let mut s = Self::empty(nbits);
        for v in it {
            s.insert(v);
        }
        s
    }

    /// Size of the underlying range (not the cardinality).
    #[inline(always)]
    pub fn universe(&self) -> usize {
        self.nbits
    }

    #[inline(always)]
    pub fn contains(&self, v: usize) -> bool {
        debug_assert!(v < self.nbits);
        (self.words[v / WORD_BITS] >> (v % WORD_BITS)) & 1 != 0
    }

    #[inline(always)]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.nbits, "vertex {v} out of range 0..{}", self.nbits);
        self.words[v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
    }

    #[inline(always)]
    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.nbits);
        self.words[v / WORD_BITS] &= !(1u64 << (v % WORD_BITS));
    }

    /// Cardinality.
    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `|self ∩ other|` without materializing the intersection.
    #[inline]
    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        debug_assert_eq!(self.nbits, other.nbits);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.nbits, other.nbits);
        VertexSet {
            nbits: self.nbits,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.nbits, other.nbits);
        VertexSet {
            nbits: self.nbits,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// `self \ other`.
    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        debug_assert_eq!(self.nbits, other.nbits);
        VertexSet {
            nbits: self.nbits,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & !b)
                .collect(),
        }
    }

    /// Complement within the range.
    pub fn complement(&self) -> VertexSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        for (i, w) in words.iter_mut().enumerate() {
            *w &= tail_mask(self.nbits, i);
        }
        VertexSet {
            nbits: self.nbits,
            words,
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        debug_assert_eq!(self.nbits, other.nbits);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    #[inline]
    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    #[inline]
    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Least element, if any.
    #[inline]
    pub fn first(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Least element of `self ∩ other`, if any.
    #[inline]
    pub fn first_common(&self, other: &VertexSet) -> Option<usize> {
        for (i, (&a, &b)) in self.words.iter().zip(&other.words).enumerate() {
            let w = a & b;
            if w != 0 {
                return Some(i * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Ascending iterator over the members.
    pub fn iter(&self) -> SetIter<'_> {
        SetIter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Members as a sorted `Vec`.
    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Restricts to elements strictly greater than `v`.
    pub fn keep_above(&mut self, v: usize) {
        let wi = v / WORD_BITS;
        for w in self.words.iter_mut().take(wi) {
            *w = 0;
        }
        if wi < self.words.len() {
            let off = v % WORD_BITS;
            // keep bits wi*64+off+1 ..
            if off == WORD_BITS - 1 {
                self.words[wi] = 0;
            } else {
                self.words[wi] &= !((1u64 << (off + 1)) - 1);
            }
        }
    }

    /// Overwrites `self` with `a ∩ b` -- avoids allocating in hot loops.
    #[inline]
    pub fn assign_intersection(&mut self, a: &VertexSet, b: &VertexSet) {
        debug_assert!(self.nbits == a.nbits && a.nbits == b.nbits);
        for ((t, &x), &y) in self.words.iter_mut().zip(&a.words).zip(&b.words) {
            *t = x & y;
        }
    }

    /// Whether `self ∩ other` has an element strictly greater than `v`,
    /// without materializing the intersection.
    #[inline]
    pub fn intersects_above(&self, other: &VertexSet, v: usize) -> bool {
        debug_assert_eq!(self.nbits, other.nbits);
        let wi = v / WORD_BITS;
        if wi >= self.words.len() {
            return false;
        }
        let off = v % WORD_BITS;
        let first_mask = if off == WORD_BITS - 1 {
            0
        } else {
            !((1u64 << (off + 1)) - 1)
        };
        if self.words[wi] & other.words[wi] & first_mask != 0 {
            return true;
        }
        self.words[wi + 1..]
            .iter()
            .zip(&other.words[wi + 1..])
            .any(|(a, b)| a & b != 0)
    }
}

/// Mask of the valid bits for word `i` of a set over `0..nbits`.
#[inline(always)]
fn tail_mask(nbits: usize, i: usize) -> u64 {
    let lo = i * WORD_BITS;
    if nbits >= lo + WORD_BITS {
        u64::MAX
    } else if nbits <= lo {
        0
    } else {
        (1u64 << (nbits - lo)) - 1
    }
}

pub struct SetIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for SetIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.current == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
        }
        let bit = self.current.trailing_zeros() as usize;
        self.current &= self.current - 1;
        Some(self.word_idx * WORD_BITS + bit)
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn empty_and_full() {
        let e = VertexSet::empty(70);
        assert_eq!(e.len(), 0);
        assert!(e.is_empty());
        let f = VertexSet::full(70);
        assert_eq!(f.len(), 70);
        assert!(f.contains(0) && f.contains(63) && f.contains(64) && f.contains(69));
        assert_eq!(f.complement().len(), 0);
    }

    #[test]
    fn keep_above_boundaries() {
        let mut s = VertexSet::full(130);
        s.keep_above(63);
        assert_eq!(s.first(), Some(64));
        let mut s = VertexSet::full(130);
        s.keep_above(64);
        assert_eq!(s.first(), Some(65));
        let mut s = VertexSet::full(130);
        s.keep_above(129);
        assert!(s.is_empty());
    }

    #[test]
    fn iter_is_ascending() {
        let s = VertexSet::from_indices(200, [5, 64, 63, 199, 0]);
        assert_eq!(s.to_vec(), vec![0, 5, 63, 64, 199]);
    }

    #[test]
    fn intersects_above_matches_materialized_route() {
        let a = VertexSet::from_indices(140, [0, 5, 63, 64, 100, 139]);
        let b = VertexSet::from_indices(140, [5, 63, 100, 139]);
        for v in 0..140 {
            let mut inter = a.intersection(&b);
            inter.keep_above(v);
            assert_eq!(a.intersects_above(&b, v), !inter.is_empty(), "v={v}");
        }
    }

    proptest! {
        #[test]
        fn ops_match_btreeset_model(
            n in 1usize..200,
            raw_a in prop::collection::vec(0usize..200, 0..60),
            raw_b in prop::collection::vec(0usize..200, 0..60),
        ) {
            let a_items: BTreeSet<usize> = raw_a.into_iter().map(|v| v % n).collect();
            let b_items: BTreeSet<usize> = raw_b.into_iter().map(|v| v % n).collect();
            let a = VertexSet::from_indices(n, a_items.iter().copied());
            let b = VertexSet::from_indices(n, b_items.iter().copied());

            prop_assert_eq!(a.len(), a_items.len());
            prop_assert_eq!(
                a.intersection(&b).to_vec(),
                a_items.intersection(&b_items).copied().collect::<Vec<_>>()
            );
            prop_assert_eq!(
                a.union(&b).to_vec(),
                a_items.union(&b_items).copied().collect::<Vec<_>>()
            );
            prop_assert_eq!(
                a.difference(&b).to_vec(),
                a_items.difference(&b_items).copied().collect::<Vec<_>>()
            );
            prop_assert_eq!(a.intersection_len(&b), a.intersection(&b).len());
            prop_assert_eq!(a.is_disjoint(&b), a_items.is_disjoint(&b_items));
            prop_assert_eq!(a.is_subset(&b), a_items.is_subset(&b_items));
            prop_assert_eq!(a.first(), a_items.first().copied());
            prop_assert_eq!(a.complement().len(), n - a_items.len());
        }
    }
}
