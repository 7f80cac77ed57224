//! A seeded consistent space with planted random violator sets, built to
//! make removal-robust sampling bounds expensive: constraints bite only
//! through sets that a sampled subset is unlikely to avoid.
//!
//! Construction for parameters `(n, r, k, δ, ε, seed)`:
//!
//! * `V(∅) = ∅`.
//! * Every `B` with `0 < |B| ≤ δ` gets a planted set `P(B)`: the first
//!   `x = ⌈ε·(n/r)·δ·ln n⌉` distinct non-members of `B` drawn from a
//!   generator keyed by `(seed, B)`. Nothing is stored; `P(B)` is replayed
//!   on demand.
//! * A set `R` of size `r` (or `r-k`, when `k > 0`) is assigned the planted
//!   set of its lexicographically smallest candidate basis: scan `B ⊆ R`
//!   with `0 < |B| ≤ δ` in lexicographic order and take the first whose
//!   `P(B)` misses `R`; if none qualifies, `V(R) = ∅`.
//! * Every other set has `V = ∅`.
//!
//! Consistency holds by construction (planted sets avoid their basis, and
//! the scan only accepts sets avoiding all of `R`). The probability that no
//! candidate qualifies vanishes as `n` grows, so `E[|V(R)|]` for a random
//! `r`-set approaches `x` — which is what makes the family a lower-bound
//! witness.
//!
//! The scan is exhaustive over `Σ_{s≤δ} C(|R|, s)` candidates, so it is
//! only viable for small `δ`; a budget (default 10⁷ candidates per
//! evaluation) turns anything larger into a `RegimeUnsupported` error
//! rather than a silent stall.

use serde::{Deserialize, Serialize};

use crate::bitset::{binomial_u128, scan_lex_subsets};
use crate::error::SpaceError;
use crate::space::Space;
use crate::stream::{domain, rng_for};
use rand::Rng;

fn default_scan_budget() -> u64 {
    10_000_000
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RandomConsistentParams {
    pub n: usize,
    pub r: usize,
    #[serde(default)]
    pub k: usize,
    pub delta: usize,
    pub eps: f64,
    pub seed: u64,
    #[serde(default = "default_scan_budget")]
    pub scan_budget: u64,
}

pub struct RandomConsistentSpace {
    params: RandomConsistentParams,
    /// `⌈ε·(n/r)·δ·ln n⌉`
    x: usize,
}

impl RandomConsistentSpace {
    pub fn new(params: RandomConsistentParams) -> Result<Self, SpaceError> {
        let RandomConsistentParams { n, r, k, delta, eps, .. } = params;
        if n < 2 || r < 2 || r > n {
            return Err(SpaceError::InvalidInstance(format!(
                "need 2 <= r <= n with n >= 2, got n = {n}, r = {r}"
            )));
        }
        if delta == 0 {
            return Err(SpaceError::InvalidInstance("need delta >= 1".into()));
        }
        let alpha = (r as f64).ln() / (n as f64).ln();
        if !(eps > 0.0 && eps < alpha) {
            return Err(SpaceError::InvalidInstance(format!(
                "need 0 < eps < {alpha:.4} (= log_n r), got eps = {eps}"
            )));
        }
        if k >= r || r - k <= delta {
            return Err(SpaceError::InvalidInstance(format!(
                "need r - k > delta so reduced sets can still hold a basis; \
                 got r = {r}, k = {k}, delta = {delta}"
            )));
        }
        let x = (eps * (n as f64 / r as f64) * delta as f64 * (n as f64).ln()).ceil() as usize;
        if x > n / 4 {
            return Err(SpaceError::InvalidInstance(format!(
                "planted sets of size {x} are not small against n = {n} (limit n/4); \
                 lower eps or delta"
            )));
        }
        if delta > n / 4 {
            return Err(SpaceError::InvalidInstance(format!(
                "delta = {delta} too close to n = {n} for rejection sampling (limit n/4)"
            )));
        }
        Ok(RandomConsistentSpace { params, x })
    }

    pub fn params(&self) -> &RandomConsistentParams {
        &self.params
    }

    /// Size of every planted violator set.
    pub fn planted_size(&self) -> usize {
        self.x
    }

    fn scanned_size(&self, s: usize) -> bool {
        s == self.params.r || (self.params.k > 0 && s == self.params.r - self.params.k)
    }

    /// `P(B)`, sorted. With `abort_on_hit` set, returns `None` as soon as a
    /// draw lands in the hit-set (same draw sequence either way, so aborting
    /// never changes which sets are planted).
    fn planted(&self, b: &[u32], abort_on_hit: Option<&Bitmap>) -> Option<Vec<u32>> {
        let n = self.params.n;
        let mut payload = Vec::with_capacity(b.len() + 1);
        payload.push(b.len() as u64);
        payload.extend(b.iter().map(|&i| i as u64));
        let mut rng = rng_for(self.params.seed, domain::PLANTED_SET, &payload);
        let mut taken = Bitmap::new(n);
        for &i in b {
            taken.set(i);
        }
        let mut out = Vec::with_capacity(self.x);
        while out.len() < self.x {
            let v = rng.gen_range(0..n as u32);
            if taken.get(v) {
                continue; // duplicate draw or member of B
            }
            if let Some(hits) = abort_on_hit {
                if hits.get(v) {
                    return None;
                }
            }
            taken.set(v);
            out.push(v);
        }
        out.sort_unstable();
        Some(out)
    }

    /// Lexicographically first candidate basis of `set` whose planted set
    /// misses `set`, with that planted set.
    fn scan(&self, set: &[u32]) -> Result<Option<BasisHit>, SpaceError> {
        let mut candidates: u128 = 0;
        for s in 1..=self.params.delta.min(set.len()) {
            candidates = candidates
                .saturating_add(binomial_u128(set.len() as u64, s as u64).unwrap_or(u128::MAX));
        }
        if candidates > self.params.scan_budget as u128 {
            return Err(SpaceError::RegimeUnsupported(format!(
                "basis scan needs {candidates} candidate evaluations for |R| = {} and \
                 delta = {}, over the budget of {}",
                set.len(),
                self.params.delta,
                self.params.scan_budget
            )));
        }
        let mut in_set = Bitmap::new(self.params.n);
        for &i in set {
            in_set.set(i);
        }
        Ok(scan_lex_subsets(set, self.params.delta, |b| {
            self.planted(b, Some(&in_set)).map(|p| (b.to_vec(), p))
        }))
    }
}

impl Space for RandomConsistentSpace {
    fn n(&self) -> usize {
        self.params.n
    }

    fn violators(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError> {
        let s = set.len();
        if s == 0 {
            return Ok(Vec::new());
        }
        if s <= self.params.delta {
            // planted() only aborts when given a hit-set
            return Ok(self.planted(set, None).unwrap());
        }
        if self.scanned_size(s) {
            return Ok(self.scan(set)?.map(|(_, p)| p).unwrap_or_default());
        }
        Ok(Vec::new())
    }

    fn designated_basis(&self, set: &[u32]) -> Option<Result<Vec<u32>, SpaceError>> {
        if !self.scanned_size(set.len()) {
            return None;
        }
        // no qualifying candidate means V(set) = ∅ = V(∅): basis ∅
        Some(self.scan(set).map(|opt| opt.map(|(b, _)| b).unwrap_or_default()))
    }
}

/// A qualifying candidate basis paired with its planted violator set.
type BasisHit = (Vec<u32>, Vec<u32>);

/// Dense bit set over `n` constraint ids (`n` can exceed the 64-bit subset
/// masks used by the exact enumerations).
struct Bitmap {
    words: Vec<u64>,
}

impl Bitmap {
    fn new(n: usize) -> Self {
        Bitmap { words: vec![0; n.div_ceil(64)] }
    }

    fn set(&mut self, i: u32) {
        self.words[i as usize / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: u32) -> bool {
        self.words[i as usize / 64] & (1 << (i % 64)) != 0
    }
}
