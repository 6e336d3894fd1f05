//! Fixed-width bit-vector subsets of a ground set of at most 64 elements.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use crate::error::{Error, Result};

/// Largest ground set supported by the bit-vector representation.
pub const MAX_GROUND: usize = 64;

/// A ground set `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroundSet {
    size: usize,
}

impl GroundSet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_GROUND {
            return Err(Error::GroundSetSize(size));
        }
        Ok(GroundSet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size)
    }

    /// Every subset of the ground set, in increasing bit order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        let full = self.full();
        full.subsets()
    }
}

/// A subset stored as a bit mask; bit `i` set means element `i` is present.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(size: usize) -> Subset {
        if size >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << size) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1u64 << i)
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Subset {
        Subset(elements.into_iter().fold(0u64, |acc, i| acc | (1u64 << i)))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u64 << i);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn complement(self, size: usize) -> Subset {
        Subset(!self.0 & Subset::full(size).0)
    }

    /// Lowest element, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    /// All subsets of `self`, starting with the empty set, in increasing
    /// integer order.
    pub fn subsets(self) -> impl Iterator<Item = Subset> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some((cur.wrapping_sub(mask)) & mask) };
            Some(Subset(cur))
        })
    }

    /// Subsets of `self` with exactly `k` elements, in increasing integer order.
    pub fn subsets_of_size(self, k: usize) -> impl Iterator<Item = Subset> {
        self.subsets().filter(move |s| s.len() == k)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_covers_all() {
        let s = Subset::from_elements([1, 3, 4]);
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], Subset::EMPTY);
        assert_eq!(*all.last().unwrap(), s);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(all.iter().all(|x| x.is_subset(s)));
    }

    #[test]
    fn full_and_complement() {
        assert_eq!(Subset::full(3), Subset(0b111));
        assert_eq!(Subset::full(64), Subset(u64::MAX));
        assert_eq!(Subset(0b010).complement(3), Subset(0b101));
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(65).is_err());
    }

    #[test]
    fn sized_subsets() {
        let s = Subset::full(5);
        assert_eq!(s.subsets_of_size(2).count(), 10);
        assert_eq!(Subset::from_elements([0, 2]).to_string(), "{0,2}");
    }
}
