//! Fixed-width task sets.

use std::fmt;

/// Largest instance the solver accepts.
pub const MAX_TASKS: usize = 128;

/// A set of task indices (0-based) stored in a single 128-bit word.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaskSet(u128);

impl TaskSet {
    pub const EMPTY: TaskSet = TaskSet(0);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_TASKS);
        if n == MAX_TASKS {
            TaskSet(u128::MAX)
        } else {
            TaskSet((1u128 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        TaskSet(1u128 << i)
    }

    pub fn from_bits(bits: u128) -> Self {
        TaskSet(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u128 << i);
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        TaskSet(self.0 & !(1u128 << i))
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        TaskSet(self.0 | 1u128 << i)
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn intersects(self, other: TaskSet) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn union(self, other: TaskSet) -> Self {
        TaskSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: TaskSet) -> Self {
        TaskSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: TaskSet) -> Self {
        TaskSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: TaskSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Iterates members in increasing order.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }
}

impl FromIterator<usize> for TaskSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = TaskSet::EMPTY;
        for i in iter {
            set.insert(i);
        }
        set
    }
}

impl IntoIterator for TaskSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(i)
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl fmt::Debug for TaskSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
