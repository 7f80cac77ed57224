//! Smallest number over a multiset: one constraint per occurrence, and a
//! set is violated by every occurrence whose value is strictly below the
//! set's minimum value.
//!
//! Ties make this space degenerate (any single minimal occurrence is a
//! basis) but it stays a violator space of combinatorial dimension 1. The
//! empty set needs its own convention: `V(∅) = H` by default, or
//! `V(∅) = V({i})` for a chosen occurrence `i`.
//!
//! Any `i` is accepted, but locality only holds when `i` carries a maximum
//! value: otherwise `F = ∅` against `G = {j}` for a larger-valued `j` is a
//! witness pair (`G` misses `V(∅)` yet `i ∈ V(G) ∖ V(∅)`). The structural
//! checkers will find such witnesses; they are not a bug in the checker.

use crate::error::SpaceError;
use crate::space::{GroundSet, Space};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptySetConvention {
    /// `V(∅) = H`.
    Full,
    /// `V(∅) = V({i})` for this occurrence index.
    SingletonOf(u32),
}

pub struct RepetitionsSpace {
    values: Vec<i64>,
    convention: EmptySetConvention,
}

impl RepetitionsSpace {
    pub fn new(values: Vec<i64>) -> Result<Self, SpaceError> {
        Self::with_convention(values, EmptySetConvention::Full)
    }

    pub fn with_convention(
        values: Vec<i64>,
        convention: EmptySetConvention,
    ) -> Result<Self, SpaceError> {
        if values.is_empty() {
            return Err(SpaceError::InvalidInstance("multiset must be nonempty".into()));
        }
        if let EmptySetConvention::SingletonOf(i) = convention {
            if i as usize >= values.len() {
                return Err(SpaceError::InvalidInstance(format!(
                    "occurrence index {i} out of range for {} occurrences",
                    values.len()
                )));
            }
        }
        Ok(RepetitionsSpace { values, convention })
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    fn below(&self, cutoff: i64) -> Vec<u32> {
        (0..self.values.len() as u32).filter(|&i| self.values[i as usize] < cutoff).collect()
    }
}

impl Space for RepetitionsSpace {
    fn n(&self) -> usize {
        self.values.len()
    }

    fn violators(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError> {
        let min = set.iter().map(|&i| self.values[i as usize]).min();
        match min {
            // occurrences strictly below the minimum are never in `set`
            Some(min) => Ok(self.below(min)),
            None => match self.convention {
                EmptySetConvention::Full => Ok((0..self.values.len() as u32).collect()),
                EmptySetConvention::SingletonOf(i) => Ok(self.below(self.values[i as usize])),
            },
        }
    }

    fn ground(&self) -> GroundSet {
        GroundSet::labeled(self.values.iter().map(|v| v.to_string()).collect())
    }

    fn designated_basis(&self, set: &[u32]) -> Option<Result<Vec<u32>, SpaceError>> {
        // lowest-index minimal occurrence
        let best = set.iter().copied().min_by_key(|&i| (self.values[i as usize], i));
        Some(Ok(best.map(|i| vec![i]).unwrap_or_default()))
    }
}
