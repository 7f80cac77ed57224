//! Fixed-width bitmask subsets of a ground set of at most 64 constraints,
//! plus the subset/combination iterators the exact enumerations are built on.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use num::BigUint;

/// A subset of a ground set `{0, 1, ..., n-1}` with `n <= 64`, stored as a
/// bitmask. Bit `i` set means constraint `i` is in the set.
///
/// `Ord` is the lexicographic order on the ascending index sequences, e.g.
/// `{0,2} < {1}` because the sequence `[0,2]` precedes `[1]`. This is the
/// order used for every tie-break in the crate ("lexicographically smallest"
/// candidate basis, removal set, witness). Note it differs from the numeric
/// order of the underlying masks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ConstraintSet(pub u64);

impl ConstraintSet {
    pub const EMPTY: ConstraintSet = ConstraintSet(0);

    /// The full set `{0, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= 64, "ground sets are limited to 64 constraints");
        if n == 64 {
            ConstraintSet(u64::MAX)
        } else {
            ConstraintSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: u32) -> Self {
        assert!(i < 64);
        ConstraintSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = u32>>(indices: I) -> Self {
        let mut mask = 0u64;
        for i in indices {
            assert!(i < 64, "constraint index {i} out of range");
            mask |= 1u64 << i;
        }
        ConstraintSet(mask)
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        Self::from_indices(ids.iter().copied())
    }

    pub fn to_ids(self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn contains(self, i: u32) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn insert(self, i: u32) -> Self {
        assert!(i < 64);
        ConstraintSet(self.0 | (1u64 << i))
    }

    pub fn remove(self, i: u32) -> Self {
        if i >= 64 {
            return self;
        }
        ConstraintSet(self.0 & !(1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: ConstraintSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: ConstraintSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Iterate the member indices in ascending order.
    pub fn iter(self) -> BitIter {
        BitIter(self.0)
    }

    /// Smallest member, if any.
    pub fn min(self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros())
        }
    }

    /// All subsets of `self`, including the empty set and `self` itself.
    /// Uses the carry-rippler enumeration; order is numeric on masks.
    pub fn subsets(self) -> SubsetIter {
        SubsetIter { set: self.0, current: 0, done: false }
    }

    /// All subsets of `self` with exactly `k` elements, in lexicographic
    /// order of their ascending index sequences.
    pub fn k_subsets(self, k: usize) -> KSubsetIter {
        KSubsetIter::new(self.to_ids(), k)
    }
}

impl serde::Serialize for ConstraintSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl BitOr for ConstraintSet {
    type Output = ConstraintSet;
    fn bitor(self, rhs: Self) -> Self {
        ConstraintSet(self.0 | rhs.0)
    }
}

impl BitAnd for ConstraintSet {
    type Output = ConstraintSet;
    fn bitand(self, rhs: Self) -> Self {
        ConstraintSet(self.0 & rhs.0)
    }
}

impl Sub for ConstraintSet {
    type Output = ConstraintSet;
    fn sub(self, rhs: Self) -> Self {
        ConstraintSet(self.0 & !rhs.0)
    }
}

impl PartialOrd for ConstraintSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ConstraintSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // The lowest differing bit decides: whoever holds it has the smaller
        // next element -- unless the other side has nothing at all beyond it,
        // in which case the other side is a proper prefix and sorts first.
        let low = diff.trailing_zeros();
        if self.0 & (1u64 << low) != 0 {
            if other.0 >> low == 0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if self.0 >> low == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl fmt::Debug for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ConstraintSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for i in self.iter() {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

pub struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            None
        } else {
            let i = self.0.trailing_zeros();
            self.0 &= self.0 - 1;
            Some(i)
        }
    }
}

/// Carry-rippler enumeration of the subsets of a mask:
/// `next = (cur - set) & set` walks every submask exactly once.
pub struct SubsetIter {
    set: u64,
    current: u64,
    done: bool,
}

impl Iterator for SubsetIter {
    type Item = ConstraintSet;
    fn next(&mut self) -> Option<ConstraintSet> {
        if self.done {
            return None;
        }
        let out = self.current;
        self.current = self.current.wrapping_sub(self.set) & self.set;
        if self.current == 0 {
            self.done = true;
        }
        Some(ConstraintSet(out))
    }
}

/// `k`-element subsets of a fixed element list, yielded in lexicographic
/// order of the chosen index sequences.
pub struct KSubsetIter {
    elems: Vec<u32>,
    cursors: Vec<usize>,
    done: bool,
}

impl KSubsetIter {
    fn new(elems: Vec<u32>, k: usize) -> Self {
        let done = k > elems.len();
        KSubsetIter { cursors: (0..k).collect(), elems, done }
    }
}

impl Iterator for KSubsetIter {
    type Item = ConstraintSet;
    fn next(&mut self) -> Option<ConstraintSet> {
        if self.done {
            return None;
        }
        let out = ConstraintSet::from_indices(self.cursors.iter().map(|&c| self.elems[c]));
        // advance to the next combination
        let k = self.cursors.len();
        let n = self.elems.len();
        if k == 0 {
            self.done = true;
            return Some(out);
        }
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.cursors[i] != i + n - k {
                self.cursors[i] += 1;
                for j in i + 1..k {
                    self.cursors[j] = self.cursors[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// All masks over `{0,...,n-1}` with exactly `r` bits, ascending numerically
/// (Gosper's hack). Order is irrelevant for the expectation sums that use it.
pub fn masks_of_size(n: usize, r: usize) -> SizeMaskIter {
    assert!(n <= 64);
    let done = r > n;
    let start = if done { 0 } else { ConstraintSet::full(r).0 };
    SizeMaskIter { n, current: start, done }
}

pub struct SizeMaskIter {
    n: usize,
    current: u64,
    done: bool,
}

impl Iterator for SizeMaskIter {
    type Item = ConstraintSet;
    fn next(&mut self) -> Option<ConstraintSet> {
        if self.done {
            return None;
        }
        let out = self.current;
        let limit = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        if out == 0 {
            self.done = true;
            return Some(ConstraintSet::EMPTY);
        }
        // Gosper: next mask with the same popcount
        let c = out & out.wrapping_neg();
        match out.checked_add(c) {
            None => self.done = true,
            Some(ripple) => {
                let next = (((ripple ^ out) >> 2) / c) | ripple;
                if next > limit {
                    self.done = true;
                } else {
                    self.current = next;
                }
            }
        }
        Some(ConstraintSet(out))
    }
}

/// Visit the nonempty subsets of `elems` with at most `max_size` elements in
/// lexicographic order of their ascending index sequences
/// (`{e0} < {e0,e1} < {e0,e1,e2} < ... < {e1} < ...`), stopping early when
/// the callback returns `Some`.
///
/// This is the candidate-basis scan order: a depth-first walk that extends
/// each prefix before moving its last element forward.
pub fn scan_lex_subsets<T>(
    elems: &[u32],
    max_size: usize,
    mut visit: impl FnMut(&[u32]) -> Option<T>,
) -> Option<T> {
    fn go<T>(
        elems: &[u32],
        max_size: usize,
        start: usize,
        prefix: &mut Vec<u32>,
        visit: &mut impl FnMut(&[u32]) -> Option<T>,
    ) -> Option<T> {
        for i in start..elems.len() {
            prefix.push(elems[i]);
            if let Some(t) = visit(prefix) {
                prefix.pop();
                return Some(t);
            }
            if prefix.len() < max_size {
                if let Some(t) = go(elems, max_size, i + 1, prefix, visit) {
                    prefix.pop();
                    return Some(t);
                }
            }
            prefix.pop();
        }
        None
    }
    let mut prefix = Vec::with_capacity(max_size);
    go(elems, max_size, 0, &mut prefix, &mut visit)
}

/// Exact binomial coefficient as an arbitrary-precision integer.
pub fn binomial_big(n: usize, k: usize) -> BigUint {
    num::integer::binomial(BigUint::from(n), BigUint::from(k.min(n)))
}

/// Binomial coefficient in `u128`, or `None` on overflow. Used for budget
/// checks before an enumeration is attempted.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}
