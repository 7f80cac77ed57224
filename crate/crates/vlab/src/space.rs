//! The violator-oracle abstraction: a pure map `V : 2^H -> 2^H` over a
//! ground set of constraints, wrapped with memoization and consistency
//! tracking.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use num::BigRational;

use crate::bitset::ConstraintSet;
use crate::error::SpaceError;

/// The ground set `H = {0, ..., n-1}` plus optional human-readable labels
/// (e.g. the integer values of a d-smallest instance, or point coordinates).
#[derive(Debug, Clone)]
pub struct GroundSet {
    pub n: usize,
    pub labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn unlabeled(n: usize) -> Self {
        GroundSet { n, labels: None }
    }

    pub fn labeled(labels: Vec<String>) -> Self {
        GroundSet { n: labels.len(), labels: Some(labels) }
    }

    pub fn label(&self, i: u32) -> String {
        match &self.labels {
            Some(l) => l[i as usize].clone(),
            None => i.to_string(),
        }
    }
}

/// Objective value of an LP-type problem: `-∞` below feasibility, otherwise
/// an exact rational. Ordered with `-∞` smallest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ObjectiveValue {
    NegInfinity,
    Finite(BigRational),
}

impl ObjectiveValue {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ObjectiveValue::NegInfinity => None,
            ObjectiveValue::Finite(q) => Some(q),
        }
    }
}

/// A violator space / consistent space instance.
///
/// `violators` must be a pure function of the input set: same input, same
/// output, no interior mutability visible to callers. Inputs and outputs are
/// ascending index slices so that instances with ground sets beyond the
/// 64-bit mask range (used by the Monte Carlo drivers) share one code path
/// with the exact enumerations.
pub trait Space: Send + Sync {
    fn n(&self) -> usize;

    /// `V(set)`. `set` is strictly ascending; the result must be strictly
    /// ascending too. Consistency (`V(G) ∩ G = ∅`) is *not* assumed here —
    /// it is checked by the [`Oracle`] wrapper.
    fn violators(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError>;

    /// Number of violators; instances can override with a counting shortcut.
    fn violator_count(&self, set: &[u32]) -> Result<u64, SpaceError> {
        Ok(self.violators(set)?.len() as u64)
    }

    /// Optional label set for diagnostics.
    fn ground(&self) -> GroundSet {
        GroundSet::unlabeled(self.n())
    }

    /// The basis this instance designates for `set`, if the instance has a
    /// cheap notion of one (used by the basis-avoiding removal rule). `None`
    /// means "no shortcut"; callers fall back to enumerating bases.
    fn designated_basis(&self, _set: &[u32]) -> Option<Result<Vec<u32>, SpaceError>> {
        None
    }

    /// LP-type objective `ω(set)`, if this instance carries one.
    fn objective(&self, _set: &[u32]) -> Option<Result<ObjectiveValue, SpaceError>> {
        None
    }
}

/// A [`Space`] plus memoization (for small ground sets) and a sticky record
/// of any consistency failure ever observed.
///
/// Structural operations (bases, dimension, ...) refuse to run once a
/// consistency failure has been recorded: their meaning depends on the
/// consistency axiom.
#[derive(Clone)]
pub struct Oracle {
    space: Arc<dyn Space>,
    memo: Option<Arc<DashMap<u64, u64>>>,
    poisoned: Arc<AtomicBool>,
}

/// Memoization is enabled for ground sets up to this size; beyond it the
/// table could not be exhausted anyway and single evaluations are assumed
/// cheap or externally cached.
pub const MEMO_MAX_N: usize = 20;

impl Oracle {
    pub fn new(space: Arc<dyn Space>) -> Self {
        let memo = if space.n() <= MEMO_MAX_N { Some(Arc::new(DashMap::new())) } else { None };
        Oracle { space, memo, poisoned: Arc::new(AtomicBool::new(false)) }
    }

    pub fn from_space<S: Space + 'static>(space: S) -> Self {
        Self::new(Arc::new(space))
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn ground(&self) -> GroundSet {
        self.space.ground()
    }

    pub fn space(&self) -> &Arc<dyn Space> {
        &self.space
    }

    /// Whether a consistency violation has ever been observed on this oracle.
    pub fn consistency_failed(&self) -> bool {
        self.poisoned.load(Ordering::Relaxed)
    }

    pub(crate) fn require_unpoisoned(&self, op: &'static str) -> Result<(), SpaceError> {
        if self.consistency_failed() {
            Err(SpaceError::Poisoned { op })
        } else {
            Ok(())
        }
    }

    /// `V(G)` over masks (ground sets up to 64 constraints). Checks
    /// consistency of the returned set and records failures.
    pub fn violators(&self, set: ConstraintSet) -> Result<ConstraintSet, SpaceError> {
        if let Some(memo) = &self.memo {
            if let Some(hit) = memo.get(&set.0) {
                return Ok(ConstraintSet(*hit));
            }
        }
        let ids = set.to_ids();
        let out = self.space.violators(&ids)?;
        let mask = ConstraintSet::from_ids(&out);
        if mask.intersects(set) {
            self.poisoned.store(true, Ordering::Relaxed);
            return Err(SpaceError::ConsistencyViolation { set, overlap: mask & set });
        }
        if let Some(memo) = &self.memo {
            memo.insert(set.0, mask.0);
        }
        Ok(mask)
    }

    /// `V(G)` over ascending index slices (any ground set size). Not
    /// memoized. Checks consistency by a merge scan.
    pub fn violators_ids(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError> {
        debug_assert!(set.windows(2).all(|w| w[0] < w[1]), "input must be strictly ascending");
        let out = self.space.violators(set)?;
        debug_assert!(out.windows(2).all(|w| w[0] < w[1]), "output must be strictly ascending");
        if let Some(overlap) = first_common(set, &out) {
            self.poisoned.store(true, Ordering::Relaxed);
            return Err(SpaceError::ConsistencyViolation {
                set: approx_mask(set),
                overlap: approx_mask(&[overlap]),
            });
        }
        Ok(out)
    }

    /// `|V(G)|` without materializing the set; used by the bulk Monte Carlo
    /// paths. The count shortcut bypasses the consistency check, which the
    /// instances providing shortcuts guarantee by construction.
    pub fn violator_count_ids(&self, set: &[u32]) -> Result<u64, SpaceError> {
        self.space.violator_count(set)
    }

    pub fn designated_basis_ids(&self, set: &[u32]) -> Option<Result<Vec<u32>, SpaceError>> {
        self.space.designated_basis(set)
    }

    pub fn objective(&self, set: ConstraintSet) -> Option<Result<ObjectiveValue, SpaceError>> {
        self.space.objective(&set.to_ids())
    }

    pub fn objective_ids(&self, set: &[u32]) -> Option<Result<ObjectiveValue, SpaceError>> {
        self.space.objective(set)
    }

    /// Dense table of `V` over every subset of a ground set with `n <= 16`;
    /// index = mask. Built once, then exhaustive loops are array lookups.
    pub fn dense_table(&self) -> Result<Vec<u64>, SpaceError> {
        let n = self.n();
        if n > 16 {
            return Err(SpaceError::mode("dense_table", n, 16, "2^n table of violator sets"));
        }
        let mut table = vec![0u64; 1 << n];
        for (mask, slot) in table.iter_mut().enumerate() {
            *slot = self.violators(ConstraintSet(mask as u64))?.0;
        }
        Ok(table)
    }
}

/// First element present in both ascending slices.
fn first_common(a: &[u32], b: &[u32]) -> Option<u32> {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Some(a[i]),
        }
    }
    None
}

/// Best-effort mask for error reporting on large ground sets: indices that
/// fit in the mask are kept, the rest dropped.
fn approx_mask(ids: &[u32]) -> ConstraintSet {
    ConstraintSet::from_indices(ids.iter().copied().filter(|&i| i < 64))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Broken;
    impl Space for Broken {
        fn n(&self) -> usize {
            3
        }
        fn violators(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError> {
            // returns the set itself: maximally inconsistent
            Ok(set.to_vec())
        }
    }

    #[test]
    fn consistency_failure_is_detected_and_sticky() {
        let oracle = Oracle::from_space(Broken);
        assert!(oracle.violators(ConstraintSet::EMPTY).is_ok());
        let err = oracle.violators(ConstraintSet::from_ids(&[1])).unwrap_err();
        assert!(matches!(err, SpaceError::ConsistencyViolation { .. }));
        assert!(oracle.consistency_failed());
        assert!(matches!(oracle.require_unpoisoned("bases_of"), Err(SpaceError::Poisoned { .. })));
    }

    struct CountingSpace(std::sync::atomic::AtomicUsize);
    impl Space for CountingSpace {
        fn n(&self) -> usize {
            4
        }
        fn violators(&self, _set: &[u32]) -> Result<Vec<u32>, SpaceError> {
            self.0.fetch_add(1, Ordering::Relaxed);
            Ok(vec![])
        }
    }

    #[test]
    fn memo_avoids_reevaluation() {
        let space = Arc::new(CountingSpace(std::sync::atomic::AtomicUsize::new(0)));
        let oracle = Oracle::new(space.clone());
        let g = ConstraintSet::from_ids(&[0, 2]);
        oracle.violators(g).unwrap();
        oracle.violators(g).unwrap();
        oracle.violators(g).unwrap();
        assert_eq!(space.0.load(Ordering::Relaxed), 1);
    }
}
