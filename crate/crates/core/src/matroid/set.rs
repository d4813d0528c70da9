use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of a ground set `{0, .., universe - 1}` of positional indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ElementSet(FixedBitSet);

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        ElementSet(bits)
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Bit `i` of `mask` selects element `i`. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= 64);
        Self::from_indices(universe, (0..universe).filter(|i| mask >> i & 1 == 1))
    }

    pub fn to_mask(&self) -> u64 {
        assert!(self.universe() <= 64);
        self.iter().fold(0, |acc, i| acc | 1 << i)
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.universe(),
            "element {i} outside universe of size {}",
            self.universe()
        );
        self.0.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.0.set(i, false);
    }

    pub fn with(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    pub fn without(&self, i: usize) -> Self {
        let mut s = self.clone();
        s.remove(i);
        s
    }

    /// Indices in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.0.union_with(&other.0);
        s
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.0.intersect_with(&other.0);
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.0.difference_with(&other.0);
        s
    }

    pub fn complement(&self) -> Self {
        let mut s = self.clone();
        s.0.toggle_range(..);
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.is_disjoint(&other.0)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = ElementSet::from_indices(5, [0, 2, 4]);
        let b = ElementSet::from_indices(5, [2, 3]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![0, 2, 3, 4]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![2]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![0, 4]);
        assert_eq!(a.complement().iter().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(ElementSet::full(3).len(), 3);
        assert!(ElementSet::empty(3).is_subset(&a.complement().complement()));
        assert_eq!(ElementSet::from_mask(5, a.to_mask()), a);
    }
}
