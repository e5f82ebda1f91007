//! Fixed-universe bit sets used as the carrier of every power set in the crate.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use smallvec::{smallvec, SmallVec};

type Words = SmallVec<[u64; 2]>;

/// A subset of `{0, .., universe - 1}`.
///
/// Subsets of groups, of action carriers and of ∗-set carriers all use this
/// type; the universe size is the order of the ambient group or carrier.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    universe: u32,
    words: Words,
}

fn word_count(universe: usize) -> usize {
    universe.div_ceil(64)
}

impl Subset {
    pub fn empty(universe: usize) -> Subset {
        Subset {
            universe: universe as u32,
            words: smallvec![0; word_count(universe)],
        }
    }

    pub fn full(universe: usize) -> Subset {
        let mut s = Subset::empty(universe);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn singleton(universe: usize, x: usize) -> Subset {
        let mut s = Subset::empty(universe);
        s.insert(x);
        s
    }

    /// Builds a subset from element indices, rejecting out-of-range ones.
    pub fn from_indices<I: IntoIterator<Item = usize>>(
        universe: usize,
        indices: I,
    ) -> Result<Subset, usize> {
        let mut s = Subset::empty(universe);
        for i in indices {
            if i >= universe {
                return Err(i);
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// Interprets the low `universe` bits of `mask` as a subset (`universe <= 64`).
    pub fn from_mask(universe: usize, mask: u64) -> Subset {
        assert!(universe <= 64, "mask form needs a universe of at most 64 elements");
        let mut s = Subset::empty(universe);
        if universe > 0 {
            s.words[0] = mask;
            s.trim();
        }
        s
    }

    /// The subset as a mask (`universe <= 64`).
    pub fn mask(&self) -> u64 {
        assert!(self.universe <= 64, "mask form needs a universe of at most 64 elements");
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        let rem = self.universe as usize % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe as usize
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        x < self.universe as usize && self.words[x / 64] >> (x % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) -> bool {
        assert!(x < self.universe as usize, "element {x} outside universe {}", self.universe);
        let w = &mut self.words[x / 64];
        let fresh = *w >> (x % 64) & 1 == 0;
        *w |= 1 << (x % 64);
        fresh
    }

    pub fn remove(&mut self, x: usize) -> bool {
        if x >= self.universe as usize {
            return false;
        }
        let w = &mut self.words[x / 64];
        let present = *w >> (x % 64) & 1 == 1;
        *w &= !(1 << (x % 64));
        present
    }

    pub fn with(&self, x: usize) -> Subset {
        let mut s = self.clone();
        s.insert(x);
        s
    }

    pub fn without(&self, x: usize) -> Subset {
        let mut s = self.clone();
        s.remove(x);
        s
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.universe as usize
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_universe(&self, other: &Subset) {
        assert_eq!(
            self.universe, other.universe,
            "subsets over different universes"
        );
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Subset) -> bool {
        self.check_universe(other);
        self.words.iter().zip(other.words.iter()).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &Subset) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Subset) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Subset) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> Subset {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }
}

impl BitOr for &Subset {
    type Output = Subset;

    fn bitor(self, rhs: &Subset) -> Subset {
        let mut s = self.clone();
        s.union_with(rhs);
        s
    }
}

impl BitAnd for &Subset {
    type Output = Subset;

    fn bitand(self, rhs: &Subset) -> Subset {
        let mut s = self.clone();
        s.intersect_with(rhs);
        s
    }
}

impl Sub for &Subset {
    type Output = Subset;

    fn sub(self, rhs: &Subset) -> Subset {
        let mut s = self.clone();
        s.difference_with(rhs);
        s
    }
}

/// Ascending iterator over the members of a [`Subset`].
pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl<'a> IntoIterator for &'a Subset {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Subset literal form: `[0,1,5]`.
impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.universe)
    }
}

/// Serialized as the sorted list of members.
impl serde::Serialize for Subset {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// Every subset of a universe of at most 24 elements, in mask order.
pub fn all_subsets(universe: usize) -> impl Iterator<Item = Subset> {
    assert!(universe <= 24, "refusing to enumerate 2^{universe} subsets");
    (0u64..1 << universe).map(move |m| Subset::from_mask(universe, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_membership() {
        let mut s = Subset::empty(70);
        assert!(s.insert(3));
        assert!(!s.insert(3));
        s.insert(69);
        assert_eq!(s.to_vec(), vec![3, 69]);
        assert_eq!(s.count(), 2);
        assert!(s.contains(69));
        assert!(!s.contains(70));
        assert_eq!(Subset::full(70).count(), 70);
        assert_eq!(Subset::full(70).complement(), Subset::empty(70));
        assert_eq!(s.to_string(), "[3,69]");
    }

    #[test]
    fn out_of_range_literal_is_rejected() {
        assert_eq!(Subset::from_indices(4, [0, 4]), Err(4));
    }

    #[test]
    fn zero_universe() {
        let s = Subset::full(0);
        assert!(s.is_empty());
        assert_eq!(all_subsets(0).count(), 1);
    }

    proptest! {
        #[test]
        fn set_algebra_matches_vec_model(a in proptest::collection::vec(0usize..130, 0..40),
                                         b in proptest::collection::vec(0usize..130, 0..40)) {
            let sa = Subset::from_indices(130, a.iter().copied()).unwrap();
            let sb = Subset::from_indices(130, b.iter().copied()).unwrap();
            let union: Vec<usize> = (0..130).filter(|x| a.contains(x) || b.contains(x)).collect();
            let inter: Vec<usize> = (0..130).filter(|x| a.contains(x) && b.contains(x)).collect();
            let diff: Vec<usize> = (0..130).filter(|x| a.contains(x) && !b.contains(x)).collect();
            prop_assert_eq!((&sa | &sb).to_vec(), union);
            prop_assert_eq!((&sa & &sb).to_vec(), inter);
            prop_assert_eq!((&sa - &sb).to_vec(), diff.clone());
            prop_assert_eq!((&sa - &sb).is_empty(), sa.is_subset(&sb));
        }
    }
}
