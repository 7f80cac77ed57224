//! The d-smallest-number violator space on values `1..=n`.
//!
//! Constraint index `i` carries value `i+1`; `V(R)` is the set of values
//! below the d-th smallest value of `R`, excluding members of `R`. The
//! space is nondegenerate with combinatorial dimension `d` (for `n ≥ d`),
//! and the unique basis of any `R` with `|R| ≥ d` is its `d` smallest
//! elements.
//!
//! Sets with fewer than `d` elements have no d-th smallest value. The
//! default convention treats the threshold as `+∞` there (`V(R) = H ∖ R`),
//! which keeps the space a genuine violator space: locality holds and small
//! sets are their own bases. The `Empty` convention (`V(R) = ∅` below size
//! `d`) is available for comparison; it breaks locality at `F = ∅` whenever
//! `d > 0`, so the structural checkers will report witnesses against it.

use crate::error::SpaceError;
use crate::space::{GroundSet, ObjectiveValue, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmallSetConvention {
    /// Threshold `+∞` below size d: `V(R) = H ∖ R`.
    AllOutside,
    /// `V(R) = ∅` below size d.
    Empty,
}

pub struct DSmallestSpace {
    n: usize,
    d: usize,
    convention: SmallSetConvention,
}

impl DSmallestSpace {
    pub fn new(n: usize, d: usize) -> Result<Self, SpaceError> {
        Self::with_convention(n, d, SmallSetConvention::AllOutside)
    }

    pub fn with_convention(
        n: usize,
        d: usize,
        convention: SmallSetConvention,
    ) -> Result<Self, SpaceError> {
        if d == 0 || d > n {
            return Err(SpaceError::InvalidInstance(format!(
                "need 1 <= d <= n, got d = {d}, n = {n}"
            )));
        }
        Ok(DSmallestSpace { n, d, convention })
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

impl Space for DSmallestSpace {
    fn n(&self) -> usize {
        self.n
    }

    fn violators(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError> {
        if set.len() < self.d {
            return match self.convention {
                SmallSetConvention::Empty => Ok(Vec::new()),
                SmallSetConvention::AllOutside => {
                    let mut out = Vec::with_capacity(self.n - set.len());
                    let mut inside = set.iter().copied().peekable();
                    for i in 0..self.n as u32 {
                        if inside.peek() == Some(&i) {
                            inside.next();
                        } else {
                            out.push(i);
                        }
                    }
                    Ok(out)
                }
            };
        }
        // everything below the d-th smallest member, minus the d-1 smaller members
        let threshold = set[self.d - 1];
        let mut out = Vec::with_capacity(threshold as usize + 1 - self.d);
        let mut inside = set[..self.d - 1].iter().copied().peekable();
        for i in 0..threshold {
            if inside.peek() == Some(&i) {
                inside.next();
            } else {
                out.push(i);
            }
        }
        Ok(out)
    }

    fn violator_count(&self, set: &[u32]) -> Result<u64, SpaceError> {
        if set.len() < self.d {
            return Ok(match self.convention {
                SmallSetConvention::Empty => 0,
                SmallSetConvention::AllOutside => (self.n - set.len()) as u64,
            });
        }
        Ok(set[self.d - 1] as u64 - (self.d as u64 - 1))
    }

    fn ground(&self) -> GroundSet {
        GroundSet::labeled((1..=self.n).map(|v| v.to_string()).collect())
    }

    fn designated_basis(&self, set: &[u32]) -> Option<Result<Vec<u32>, SpaceError>> {
        // unique basis: the set itself when small, else its d smallest members
        let cut = set.len().min(self.d);
        Some(Ok(set[..cut].to_vec()))
    }

    fn objective(&self, set: &[u32]) -> Option<Result<ObjectiveValue, SpaceError>> {
        // negated d-th smallest value, so that growing a set grows ω
        if set.len() < self.d {
            return Some(Ok(ObjectiveValue::NegInfinity));
        }
        let value = set[self.d - 1] as i64 + 1;
        Some(Ok(ObjectiveValue::Finite(num::BigRational::from_integer((-value).into()))))
    }
}
