//! A consistent space where every element of the full ground set is
//! extreme, yet the combinatorial dimension is 1.
//!
//! Ground set `{0, ..., 2m-1}`; element `i` is paired with `i+m (mod 2m)`:
//!
//! * `V({i}) = {partner(i)}`,
//! * `V(H ∖ {x}) = {x}`,
//! * every other subset has no violators.
//!
//! Removing any `x` from the full set makes `x` a violator, so `X(H) = H`
//! with `|X(H)| = 2m` — far above the dimension. That is only possible
//! because locality fails (singletons have violators that larger sets
//! forget), so this family is the standard witness that the
//! `|X| ≤ dimension` bound needs the locality axiom, not just consistency.

use crate::error::SpaceError;
use crate::space::Space;

pub struct AllExtremeSpace {
    m: usize,
}

impl AllExtremeSpace {
    pub fn new(m: usize) -> Result<Self, SpaceError> {
        if m == 0 {
            return Err(SpaceError::InvalidInstance("need m >= 1".into()));
        }
        if m > 32 {
            return Err(SpaceError::InvalidInstance(format!(
                "need 2m <= 64 ground elements, got m = {m}"
            )));
        }
        Ok(AllExtremeSpace { m })
    }

    fn partner(&self, i: u32) -> u32 {
        (i + self.m as u32) % (2 * self.m as u32)
    }
}

impl Space for AllExtremeSpace {
    fn n(&self) -> usize {
        2 * self.m
    }

    fn violators(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError> {
        let n = self.n();
        if set.len() == 1 {
            return Ok(vec![self.partner(set[0])]);
        }
        if set.len() == n - 1 {
            // the one missing element; n >= 2 here since |set| = 1 was handled
            let missing = (0..n as u32).find(|&i| set.binary_search(&i).is_err());
            return Ok(missing.into_iter().collect());
        }
        Ok(Vec::new())
    }
}
