//! Bitset world sets and minimal-generator antichains.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

/// Hard limit on the number of worlds a frame may carry.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds, identified by their index in the owning frame.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct WorldSet(u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn from_bits(bits: u64) -> Self {
        WorldSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(w: usize) -> Self {
        debug_assert!(w < MAX_WORLDS);
        WorldSet(1 << w)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_WORLDS);
        if n == MAX_WORLDS {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, w: usize) -> bool {
        w < MAX_WORLDS && self.0 & (1 << w) != 0
    }

    pub fn insert(&mut self, w: usize) {
        self.0 |= 1 << w;
    }

    pub fn remove(&mut self, w: usize) {
        self.0 &= !(1 << w);
    }

    pub fn with(self, w: usize) -> Self {
        WorldSet(self.0 | 1 << w)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: WorldSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// All subsets of `self`, starting from the empty set, in increasing bit order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            universe: self.0,
            next: Some(0),
        }
    }
}

impl BitOr for WorldSet {
    type Output = WorldSet;
    fn bitor(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 | rhs.0)
    }
}

impl BitAnd for WorldSet {
    type Output = WorldSet;
    fn bitand(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 & rhs.0)
    }
}

impl Sub for WorldSet {
    type Output = WorldSet;
    fn sub(self, rhs: WorldSet) -> WorldSet {
        WorldSet(self.0 & !rhs.0)
    }
}

impl Not for WorldSet {
    type Output = WorldSet;
    fn not(self) -> WorldSet {
        WorldSet(!self.0)
    }
}

impl FromIterator<usize> for WorldSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = WorldSet::EMPTY;
        for w in iter {
            s.insert(w);
        }
        s
    }
}

impl IntoIterator for WorldSet {
    type Item = usize;
    type IntoIter = Members;
    fn into_iter(self) -> Members {
        self.iter()
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let w = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(w)
    }
}

pub struct Subsets {
    universe: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = WorldSet;
    fn next(&mut self) -> Option<WorldSet> {
        let cur = self.next?;
        // Standard submask increment.
        let succ = (cur | !self.universe).wrapping_add(1) & self.universe;
        self.next = (succ != 0).then_some(succ);
        Some(WorldSet(cur))
    }
}

/// The minimal elements of an upward-closed family of world sets.
///
/// A set `V` belongs to the family iff some generator is a subset of `V`.
/// Generators are kept pairwise incomparable and sorted (by size, then bits),
/// so equal families have equal representations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Antichain(Vec<WorldSet>);

impl Antichain {
    pub fn new() -> Self {
        Antichain(Vec::new())
    }

    /// Adds `set` to the family. Returns `false` if it was already covered.
    pub fn insert(&mut self, set: WorldSet) -> bool {
        if self.covers(set) {
            return false;
        }
        self.0.retain(|g| !set.is_subset(*g));
        let pos = self
            .0
            .binary_search_by(|g| (g.len(), g.bits()).cmp(&(set.len(), set.bits())))
            .unwrap_or_else(|p| p);
        self.0.insert(pos, set);
        true
    }

    /// Does the upward closure contain `set`?
    pub fn covers(&self, set: WorldSet) -> bool {
        self.0.iter().any(|g| g.is_subset(set))
    }

    /// Is every member of `other`'s upward closure also a member of ours?
    pub fn includes(&self, other: &Antichain) -> bool {
        other.0.iter().all(|g| self.covers(*g))
    }

    pub fn generators(&self) -> &[WorldSet] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, WorldSet> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Union of all generators.
    pub fn support(&self) -> WorldSet {
        self.0.iter().fold(WorldSet::EMPTY, |acc, g| acc | *g)
    }
}

impl FromIterator<WorldSet> for Antichain {
    fn from_iter<I: IntoIterator<Item = WorldSet>>(iter: I) -> Self {
        let mut a = Antichain::new();
        for s in iter {
            a.insert(s);
        }
        a
    }
}

impl<'a> IntoIterator for &'a Antichain {
    type Item = &'a WorldSet;
    type IntoIter = std::slice::Iter<'a, WorldSet>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Debug for Antichain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// Minimal transversals (hitting sets) of a family of sets.
///
/// Uses Berge's incremental algorithm: the transversals of `E1..Ek, E` are the
/// minimal sets among `T` (if `T` meets `E`) and `T ∪ {e}` for `e ∈ E`.
/// An empty edge has no transversal, so the result is empty; an empty family
/// has the single transversal `∅`.
pub fn minimal_hitting_sets<I>(edges: I) -> Antichain
where
    I: IntoIterator<Item = WorldSet>,
{
    let mut acc = Antichain::from_iter([WorldSet::EMPTY]);
    for edge in edges {
        let mut next = Antichain::new();
        for t in acc.iter() {
            if t.intersects(edge) {
                next.insert(*t);
            } else {
                for e in edge.iter() {
                    next.insert(t.with(e));
                }
            }
        }
        acc = next;
        if acc.is_empty() {
            break;
        }
    }
    acc
}
