//! Word-backed sets of small integers.
//!
//! The same representation backs vertex sets and line-index sets. A universe
//! of at most 64 elements lives in a single machine word; larger universes
//! spill into a boxed word slice. Set union and equality dominate the
//! enumeration loops, so both are straight word operations.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

/// A set of integers drawn from a fixed universe `[0, capacity)`.
///
/// Equality and hashing are semantic: two sets with the same members compare
/// equal even if one carries trailing zero words.
#[derive(Clone)]
pub enum Bits {
    Word(u64),
    Words(Box<[u64]>),
}

impl Bits {
    /// Empty set over a universe of `capacity` elements.
    pub fn empty(capacity: usize) -> Self {
        if capacity <= 64 {
            Bits::Word(0)
        } else {
            Bits::Words(vec![0u64; capacity.div_ceil(64)].into_boxed_slice())
        }
    }

    /// The full set `{0, 1, .., capacity-1}`.
    pub fn all(capacity: usize) -> Self {
        let mut b = Bits::empty(capacity);
        for i in 0..capacity {
            b.insert(i);
        }
        b
    }

    fn words(&self) -> &[u64] {
        match self {
            Bits::Word(w) => std::slice::from_ref(w),
            Bits::Words(ws) => ws,
        }
    }

    fn grow(&mut self, words: usize) {
        let cur = self.words().len();
        if words > cur {
            let mut v = self.words().to_vec();
            v.resize(words, 0);
            *self = Bits::Words(v.into_boxed_slice());
        }
    }

    pub fn insert(&mut self, i: usize) {
        let (w, b) = (i / 64, i % 64);
        match self {
            Bits::Word(word) if w == 0 => *word |= 1 << b,
            _ => {
                self.grow(w + 1);
                if let Bits::Words(ws) = self {
                    ws[w] |= 1 << b;
                }
            }
        }
    }

    pub fn remove(&mut self, i: usize) {
        let (w, b) = (i / 64, i % 64);
        match self {
            Bits::Word(word) if w == 0 => *word &= !(1 << b),
            Bits::Words(ws) if w < ws.len() => ws[w] &= !(1 << b),
            _ => {}
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        self.words().get(w).is_some_and(|word| word >> b & 1 == 1)
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.words().iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words().iter().all(|&w| w == 0)
    }

    pub fn union_with(&mut self, other: &Bits) {
        self.grow(other.words().len());
        match (self, other) {
            (Bits::Word(a), b) => *a |= b.words()[0],
            (Bits::Words(a), b) => {
                for (x, y) in a.iter_mut().zip(b.words()) {
                    *x |= y;
                }
            }
        }
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        let ow = other.words();
        match self {
            Bits::Word(a) => *a &= ow.first().copied().unwrap_or(0),
            Bits::Words(a) => {
                for (i, x) in a.iter_mut().enumerate() {
                    *x &= ow.get(i).copied().unwrap_or(0);
                }
            }
        }
    }

    pub fn difference_with(&mut self, other: &Bits) {
        let ow = other.words();
        match self {
            Bits::Word(a) => *a &= !ow.first().copied().unwrap_or(0),
            Bits::Words(a) => {
                for (i, x) in a.iter_mut().enumerate() {
                    *x &= !ow.get(i).copied().unwrap_or(0);
                }
            }
        }
    }

    pub fn union(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.intersect_with(other);
        r
    }

    pub fn difference(&self, other: &Bits) -> Bits {
        let mut r = self.clone();
        r.difference_with(other);
        r
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        let (a, b) = (self.words(), other.words());
        a.iter()
            .enumerate()
            .all(|(i, &w)| w & !b.get(i).copied().unwrap_or(0) == 0)
    }

    pub fn min_elem(&self) -> Option<usize> {
        for (i, &w) in self.words().iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn max_elem(&self) -> Option<usize> {
        for (i, &w) in self.words().iter().enumerate().rev() {
            if w != 0 {
                return Some(i * 64 + 63 - w.leading_zeros() as usize);
            }
        }
        None
    }

    /// Members in ascending order.
    pub fn iter(&self) -> BitsIter<'_> {
        BitsIter {
            words: self.words(),
            word_idx: 0,
            cur: self.words().first().copied().unwrap_or(0),
        }
    }

    /// Lexicographic order on the ascending member lists.
    ///
    /// `{0,3} < {1,2}` and a proper prefix sorts before its extensions. This
    /// is the canonical order lines are reported in.
    pub fn cmp_members(&self, other: &Bits) -> Ordering {
        let (a, b) = (self.words(), other.words());
        let len = a.len().max(b.len());
        for w in 0..len {
            let x = a.get(w).copied().unwrap_or(0);
            let y = b.get(w).copied().unwrap_or(0);
            let d = x ^ y;
            if d != 0 {
                let bit = w * 64 + d.trailing_zeros() as usize;
                // `bit` is the smallest element present in exactly one set;
                // everything below it is shared.
                return if self.contains(bit) {
                    if other.max_elem().is_some_and(|mx| mx > bit) {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    }
                } else if self.max_elem().is_some_and(|mx| mx > bit) {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialEq for Bits {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.words(), other.words());
        let len = a.len().max(b.len());
        (0..len).all(|i| a.get(i).copied().unwrap_or(0) == b.get(i).copied().unwrap_or(0))
    }
}

impl Eq for Bits {}

impl Hash for Bits {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let w = self.words();
        let end = w.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
        w[..end].hash(state);
    }
}

impl PartialOrd for Bits {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bits {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_members(other)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        let mut b = Bits::Word(0);
        for i in iter {
            b.insert(i);
        }
        b
    }
}

pub struct BitsIter<'a> {
    words: &'a [u64],
    word_idx: usize,
    cur: u64,
}

impl Iterator for BitsIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.cur == 0 {
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.word_idx];
        }
        let b = self.cur.trailing_zeros() as usize;
        self.cur &= self.cur - 1;
        Some(self.word_idx * 64 + b)
    }
}
