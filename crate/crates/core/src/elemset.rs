use std::fmt;

/// A set of element indices of a finite object, stored as a bitmask.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ElemSet {
    words: Vec<u64>,
    universe: usize,
}

impl ElemSet {
    pub fn empty(universe: usize) -> Self {
        ElemSet {
            words: vec![0; universe.div_ceil(64).max(1)],
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_iter_in(universe: usize, items: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(universe);
        for i in items {
            s.insert(i);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns true if the element was newly inserted.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.universe, "element {i} outside universe {}", self.universe);
        let w = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        ElemSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
            universe: self.universe,
        }
    }

    pub fn union(&self, other: &ElemSet) -> ElemSet {
        ElemSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
            universe: self.universe,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Canonical ordering of subsets: by cardinality, then lexicographically by sorted elements.
pub fn canonical_cmp(a: &ElemSet, b: &ElemSet) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| a.to_vec().cmp(&b.to_vec()))
}
