//! Fixed-length dense bitsets.
//!
//! Membership bitmaps are the working representation for sets of flags and
//! for point-coverage masks during spread search. Equality of two sets over
//! the same ground set is word-wise equality.

/// A fixed-length bitset over indices `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn new(len: usize) -> Self {
        BitVec {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut v = BitVec::new(len);
        for i in 0..len {
            v.insert(i);
        }
        v
    }

    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = BitVec::new(len);
        for &i in indices {
            v.insert(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.len
    }

    /// True when every member of `self` is a member of `other`.
    pub fn is_subset_of(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union_with(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn complement(&self) -> BitVec {
        let mut out = BitVec::new(self.len);
        for i in 0..self.len {
            if !self.contains(i) {
                out.insert(i);
            }
        }
        out
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.contains(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_set_ops() {
        let mut v = BitVec::new(130);
        v.insert(0);
        v.insert(64);
        v.insert(129);
        assert_eq!(v.count(), 3);
        assert!(v.contains(64) && !v.contains(63));
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        let w = BitVec::from_indices(130, &[0, 64]);
        assert!(w.is_subset_of(&v));
        assert!(!v.is_subset_of(&w));
        v.remove(64);
        assert!(!v.contains(64));
        assert_eq!(v.complement().count(), 128);
    }
}
