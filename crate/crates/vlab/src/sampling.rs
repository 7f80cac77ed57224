//! Sampling expectations and the identities that tie them together.
//!
//! For a space on `n` constraints and a uniformly random `r`-subset `R`:
//!
//! * `v_r = E[|V(R)|]`, `x_r = E[|X(R)|]` (violators / extreme constraints),
//! * with removal closure over all `k`-element removals `K ⊆ R`:
//!   `V_k(R) = {x ∉ R : x ∈ V(R∖K) for some K}` and
//!   `X_k(R) = {x ∈ R : x ∈ X(R∖K) for some K}`,
//!   giving `v_{r,k} = E[|V_k(R)|]` and `x_{r,k} = E[|X_k(R)|]`.
//!
//! The double-counting identities
//! `v_r·(r+1) = (n-r)·x_{r+1}` and `v_{r,k}·(r+1) = (n-r)·x_{r+1,k}`
//! hold exactly on every consistent space; `check_sampling_identity` and
//! `check_removal_identity` verify them in exact integer arithmetic.

use num::{BigInt, BigRational, BigUint, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::bitset::{binomial_big, binomial_u128, masks_of_size, ConstraintSet};
use crate::error::SpaceError;
use crate::space::Oracle;
use crate::stream::{domain, rng_for};

/// Work budgets for the enumerations that can blow up combinatorially.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Maximum number of `k`-subsets enumerated per removal closure.
    pub ksubsets: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { ksubsets: 1_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    /// `|V(R)|`
    V,
    /// `|X(R)|`
    X,
    /// `|V_k(R)|`
    Vk,
    /// `|X_k(R)|`
    Xk,
}

impl Quantity {
    pub fn parse(s: &str) -> Option<Quantity> {
        match s {
            "v" => Some(Quantity::V),
            "x" => Some(Quantity::X),
            "vk" => Some(Quantity::Vk),
            "xk" => Some(Quantity::Xk),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::V => "v",
            Quantity::X => "x",
            Quantity::Vk => "vk",
            Quantity::Xk => "xk",
        }
    }

    pub fn uses_removal(self) -> bool {
        matches!(self, Quantity::Vk | Quantity::Xk)
    }
}

#[derive(Debug, Clone)]
pub enum ExpectationValue {
    Exact(BigRational),
    MonteCarlo { estimate: f64, std_error: f64, trials: u64, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct ExpectationResult {
    pub quantity: Quantity,
    pub r: usize,
    pub k: usize,
    pub value: ExpectationValue,
}

impl ExpectationResult {
    pub fn as_f64(&self) -> f64 {
        match &self.value {
            ExpectationValue::Exact(q) => rational_to_f64(q),
            ExpectationValue::MonteCarlo { estimate, .. } => *estimate,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match &self.value {
            ExpectationValue::Exact(q) => Some(q),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.value {
            ExpectationValue::Exact(q) => serde_json::json!({
                "quantity": self.quantity.name(),
                "r": self.r,
                "k": self.k,
                "mode": "exact",
                "value_num": q.numer().to_string(),
                "value_den": q.denom().to_string(),
            }),
            ExpectationValue::MonteCarlo { estimate, std_error, trials, seed } => {
                serde_json::json!({
                    "quantity": self.quantity.name(),
                    "r": self.r,
                    "k": self.k,
                    "mode": "mc",
                    "estimate": estimate,
                    "std_error": std_error,
                    "trials": trials,
                    "seed": seed,
                })
            }
        }
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    // good enough for reporting; exact comparisons never go through here
    let num = q.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let den = q.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    num / den
}

/// Exact `E[|quantity|]` over all `C(n,r)` subsets. Ground set caps:
/// `n <= 20` for `v`/`x`, `n <= 14` for the removal variants.
pub fn exact_expectation(
    oracle: &Oracle,
    quantity: Quantity,
    r: usize,
    k: usize,
    budget: &Budget,
) -> Result<ExpectationResult, SpaceError> {
    let n = oracle.n();
    if r > n {
        return Err(SpaceError::InvalidInstance(format!("r = {r} exceeds n = {n}")));
    }
    let (cap, kk) = if quantity.uses_removal() { (14, k) } else { (20, 0) };
    if n > cap {
        return Err(SpaceError::mode("exact_expectation", n, cap, "enumerates all r-subsets"));
    }
    if quantity.uses_removal() {
        if kk > r {
            return Err(SpaceError::InvalidInstance(format!("k = {kk} exceeds r = {r}")));
        }
        check_ksubset_budget("exact_expectation", r, kk, budget)?;
    }
    let mut sum = BigUint::zero();
    for set in masks_of_size(n, r) {
        let value = match quantity {
            Quantity::V => oracle.violators(set)?.len() as u64,
            Quantity::X => crate::structure::extreme_constraints(oracle, set)?.len() as u64,
            Quantity::Vk => vk_of(oracle, set, kk)?.len() as u64,
            Quantity::Xk => xk_of(oracle, set, kk)?.len() as u64,
        };
        sum += value;
    }
    let value = BigRational::new(BigInt::from(sum), BigInt::from(binomial_big(n, r)));
    Ok(ExpectationResult { quantity, r, k: kk, value: ExpectationValue::Exact(value) })
}

/// `V_k(R)`: constraints outside `R` violating `R ∖ K` for some `|K| = k`.
pub fn vk_of(oracle: &Oracle, r_set: ConstraintSet, k: usize) -> Result<ConstraintSet, SpaceError> {
    let mut out = ConstraintSet::EMPTY;
    for k_set in r_set.k_subsets(k) {
        out = out | (oracle.violators(r_set - k_set)? - r_set);
    }
    Ok(out)
}

/// `X_k(R)`: constraints of `R` extreme in `R ∖ K` for some `|K| = k`.
pub fn xk_of(oracle: &Oracle, r_set: ConstraintSet, k: usize) -> Result<ConstraintSet, SpaceError> {
    let mut out = ConstraintSet::EMPTY;
    for k_set in r_set.k_subsets(k) {
        out = out | crate::structure::extreme_constraints(oracle, r_set - k_set)?;
    }
    Ok(out)
}

/// Both removal-closure sets for one base set.
#[derive(Debug, Clone, Serialize)]
pub struct RemovalClosure {
    pub base: ConstraintSet,
    pub k: usize,
    /// `V_k(base)`, disjoint from `base`.
    pub violators: ConstraintSet,
    /// `X_k(base)`, a subset of `base`.
    pub extreme: ConstraintSet,
}

pub fn removal_closure(
    oracle: &Oracle,
    base: ConstraintSet,
    k: usize,
    budget: &Budget,
) -> Result<RemovalClosure, SpaceError> {
    if k > base.len() {
        return Err(SpaceError::InvalidInstance(format!("k = {k} exceeds |R| = {}", base.len())));
    }
    check_ksubset_budget("removal_closure", base.len(), k, budget)?;
    Ok(RemovalClosure {
        base,
        k,
        violators: vk_of(oracle, base, k)?,
        extreme: xk_of(oracle, base, k)?,
    })
}

pub(crate) fn check_ksubset_budget(
    op: &'static str,
    r: usize,
    k: usize,
    budget: &Budget,
) -> Result<(), SpaceError> {
    let needed = binomial_u128(r as u64, k as u64).unwrap_or(u128::MAX);
    if needed > budget.ksubsets as u128 {
        return Err(SpaceError::BudgetExceeded {
            op,
            needed,
            budget: budget.ksubsets,
            unit: "k-subsets",
        });
    }
    Ok(())
}

/// Outcome of an identity sweep. `first_failure` carries the first `r` where
/// the two sides differ, with both exact values.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub holds: bool,
    pub k: usize,
    pub first_failure: Option<IdentityFailure>,
}

#[derive(Debug, Clone)]
pub struct IdentityFailure {
    pub r: usize,
    /// `v_{r,k}`
    pub lhs: BigRational,
    /// `(n-r)/(r+1) · x_{r+1,k}`
    pub rhs: BigRational,
}

/// Verify `v_r·(r+1) = (n-r)·x_{r+1}` for every `r ∈ [0, n-1]` in exact
/// integer arithmetic. Requires `n <= 16`.
pub fn check_sampling_identity(oracle: &Oracle) -> Result<IdentityReport, SpaceError> {
    let n = oracle.n();
    if n > 16 {
        return Err(SpaceError::mode("check_sampling_identity", n, 16, "full subset sweep"));
    }
    // one sweep accumulates the per-size sums of |V| and |X|
    let table = oracle.dense_table()?;
    let mut sum_v = vec![BigUint::zero(); n + 1];
    let mut sum_x = vec![BigUint::zero(); n + 1];
    for mask in 0..(1u64 << n) {
        let set = ConstraintSet(mask);
        let size = set.len();
        sum_v[size] += ConstraintSet(table[mask as usize]).len() as u64;
        sum_x[size] += extreme_from_table(&table, set).len() as u64;
    }
    identity_from_sums(n, 0, &sum_v, &sum_x)
}

/// Verify `v_{r,k}·(r+1) = (n-r)·x_{r+1,k}` for every `r ∈ [k, n-1]`.
/// Requires `n <= 14`.
pub fn check_removal_identity(
    oracle: &Oracle,
    k: usize,
    budget: &Budget,
) -> Result<IdentityReport, SpaceError> {
    let n = oracle.n();
    if n > 14 {
        return Err(SpaceError::mode("check_removal_identity", n, 14, "full subset sweep"));
    }
    check_ksubset_budget("check_removal_identity", n, k, budget)?;
    let table = oracle.dense_table()?;
    let x_table: Vec<u64> =
        (0..(1u64 << n)).map(|m| extreme_from_table(&table, ConstraintSet(m)).0).collect();
    let mut sum_v = vec![BigUint::zero(); n + 1];
    let mut sum_x = vec![BigUint::zero(); n + 1];
    for mask in 0..(1u64 << n) {
        let set = ConstraintSet(mask);
        let size = set.len();
        if size < k {
            continue;
        }
        let mut vk = 0u64;
        let mut xk = 0u64;
        for k_set in set.k_subsets(k) {
            let reduced = set - k_set;
            vk |= table[reduced.0 as usize] & !set.0;
            xk |= x_table[reduced.0 as usize];
        }
        sum_v[size] += vk.count_ones() as u64;
        sum_x[size] += xk.count_ones() as u64;
    }
    identity_from_sums(n, k, &sum_v, &sum_x)
}

fn identity_from_sums(
    n: usize,
    k: usize,
    sum_v: &[BigUint],
    sum_x: &[BigUint],
) -> Result<IdentityReport, SpaceError> {
    for r in k..n {
        // v_r = sum_v[r]/C(n,r); the identity cross-multiplied over the
        // shared denominators becomes pure integer arithmetic:
        // sum_v[r]·(r+1)·C(n,r+1) == (n-r)·sum_x[r+1]·C(n,r)
        let lhs_int = &sum_v[r] * BigUint::from(r + 1) * binomial_big(n, r + 1);
        let rhs_int = BigUint::from(n - r) * &sum_x[r + 1] * binomial_big(n, r);
        if lhs_int != rhs_int {
            let lhs =
                BigRational::new(BigInt::from(sum_v[r].clone()), BigInt::from(binomial_big(n, r)));
            let rhs = BigRational::new(
                BigInt::from(BigUint::from(n - r) * &sum_x[r + 1]),
                BigInt::from(BigUint::from(r + 1) * binomial_big(n, r + 1)),
            );
            return Ok(IdentityReport {
                holds: false,
                k,
                first_failure: Some(IdentityFailure { r, lhs, rhs }),
            });
        }
    }
    Ok(IdentityReport { holds: true, k, first_failure: None })
}

/// `X(set)` from a dense violator table.
pub fn extreme_from_table(table: &[u64], set: ConstraintSet) -> ConstraintSet {
    let mut out = 0u64;
    for h in set.iter() {
        if table[(set.remove(h)).0 as usize] & (1u64 << h) != 0 {
            out |= 1u64 << h;
        }
    }
    ConstraintSet(out)
}

/// Maximum over all `R ⊆ H` of the number of distinct extreme sets
/// `X(R ∖ K)` over the `k`-element removals `K ⊆ R`. Requires `n <= 14`.
pub fn delta_k(oracle: &Oracle, k: usize, budget: &Budget) -> Result<usize, SpaceError> {
    let n = oracle.n();
    if n > 14 {
        return Err(SpaceError::mode("delta_k", n, 14, "walks removals of every subset"));
    }
    check_ksubset_budget("delta_k", n, k, budget)?;
    let table = oracle.dense_table()?;
    let x_table: Vec<u64> =
        (0..(1u64 << n)).map(|m| extreme_from_table(&table, ConstraintSet(m)).0).collect();
    let mut best = 0usize;
    let mut distinct: BTreeSet<u64> = BTreeSet::new();
    for mask in 0..(1u64 << n) {
        let set = ConstraintSet(mask);
        if set.len() < k {
            continue;
        }
        distinct.clear();
        for k_set in set.k_subsets(k) {
            distinct.insert(x_table[(set - k_set).0 as usize]);
        }
        best = best.max(distinct.len());
    }
    Ok(best)
}

/// Uniform random `r`-subset of `{0,...,n-1}`, ascending. Rejection
/// sampling for sparse draws, partial Fisher–Yates otherwise.
pub fn sample_r_subset(rng: &mut impl Rng, n: usize, r: usize) -> Vec<u32> {
    assert!(r <= n);
    if r == 0 {
        return Vec::new();
    }
    if r * 16 <= n {
        let mut seen = std::collections::HashSet::with_capacity(r * 2);
        let mut out = Vec::with_capacity(r);
        while out.len() < r {
            let x = rng.gen_range(0..n as u32);
            if seen.insert(x) {
                out.push(x);
            }
        }
        out.sort_unstable();
        out
    } else {
        let mut pool: Vec<u32> = (0..n as u32).collect();
        for i in 0..r {
            let j = rng.gen_range(i..n);
            pool.swap(i, j);
        }
        let mut out = pool[..r].to_vec();
        out.sort_unstable();
        out
    }
}

/// Monte Carlo estimate of an expectation over uniform `r`-subsets.
///
/// Each trial draws from its own stream keyed by `(seed, trial index)`, so
/// the estimate is independent of worker scheduling; trial values are
/// reduced sequentially after the parallel map.
pub fn monte_carlo_expectation(
    oracle: &Oracle,
    quantity: Quantity,
    r: usize,
    k: usize,
    trials: u64,
    seed: u64,
    budget: &Budget,
) -> Result<ExpectationResult, SpaceError> {
    let n = oracle.n();
    if r > n {
        return Err(SpaceError::InvalidInstance(format!("r = {r} exceeds n = {n}")));
    }
    if trials == 0 {
        return Err(SpaceError::InvalidInstance("trials must be positive".into()));
    }
    let k = if quantity.uses_removal() { k } else { 0 };
    if quantity.uses_removal() {
        if k > r {
            return Err(SpaceError::InvalidInstance(format!("k = {k} exceeds r = {r}")));
        }
        check_ksubset_budget("monte_carlo_expectation", r, k, budget)?;
    }
    let values: Result<Vec<u64>, SpaceError> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, domain::MC_TRIAL, &[t]);
            let sample = sample_r_subset(&mut rng, n, r);
            trial_value(oracle, quantity, &sample, k)
        })
        .collect();
    let values = values?;
    let (estimate, std_error) = mean_and_std_error(&values);
    Ok(ExpectationResult {
        quantity,
        r,
        k,
        value: ExpectationValue::MonteCarlo { estimate, std_error, trials, seed },
    })
}

fn trial_value(
    oracle: &Oracle,
    quantity: Quantity,
    sample: &[u32],
    k: usize,
) -> Result<u64, SpaceError> {
    match quantity {
        Quantity::V => oracle.violator_count_ids(sample),
        Quantity::X => extreme_count_ids(oracle, sample),
        Quantity::Vk => {
            let mut union: BTreeSet<u32> = BTreeSet::new();
            for_each_removal(sample, k, |reduced| {
                let v = oracle.violators_ids(reduced)?;
                union.extend(v.iter().copied().filter(|x| sample.binary_search(x).is_err()));
                Ok(())
            })?;
            Ok(union.len() as u64)
        }
        Quantity::Xk => {
            let mut union: BTreeSet<u32> = BTreeSet::new();
            for_each_removal(sample, k, |reduced| {
                for (i, &h) in reduced.iter().enumerate() {
                    let mut without: Vec<u32> = Vec::with_capacity(reduced.len() - 1);
                    without.extend_from_slice(&reduced[..i]);
                    without.extend_from_slice(&reduced[i + 1..]);
                    if oracle.violators_ids(&without)?.binary_search(&h).is_ok() {
                        union.insert(h);
                    }
                }
                Ok(())
            })?;
            Ok(union.len() as u64)
        }
    }
}

/// `|X(sample)|` on the id path.
pub fn extreme_count_ids(oracle: &Oracle, sample: &[u32]) -> Result<u64, SpaceError> {
    let mut count = 0u64;
    for (i, &h) in sample.iter().enumerate() {
        let mut without: Vec<u32> = Vec::with_capacity(sample.len() - 1);
        without.extend_from_slice(&sample[..i]);
        without.extend_from_slice(&sample[i + 1..]);
        if oracle.violators_ids(&without)?.binary_search(&h).is_ok() {
            count += 1;
        }
    }
    Ok(count)
}

/// Visit `sample ∖ K` for every `k`-subset `K` of `sample`, in lexicographic
/// order of `K`.
pub fn for_each_removal(
    sample: &[u32],
    k: usize,
    mut visit: impl FnMut(&[u32]) -> Result<(), SpaceError>,
) -> Result<(), SpaceError> {
    let r = sample.len();
    assert!(k <= r);
    if k == 0 {
        return visit(sample);
    }
    let mut cursors: Vec<usize> = (0..k).collect();
    let mut reduced: Vec<u32> = Vec::with_capacity(r - k);
    loop {
        reduced.clear();
        let mut c = 0;
        for (i, &x) in sample.iter().enumerate() {
            if c < k && cursors[c] == i {
                c += 1;
            } else {
                reduced.push(x);
            }
        }
        visit(&reduced)?;
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            if cursors[i] != i + r - k {
                cursors[i] += 1;
                for j in i + 1..k {
                    cursors[j] = cursors[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub(crate) fn mean_and_std_error(values: &[u64]) -> (f64, f64) {
    let trials = values.len() as f64;
    let sum: u128 = values.iter().map(|&v| v as u128).sum();
    let sum_sq: u128 = values.iter().map(|&v| (v as u128) * (v as u128)).sum();
    let mean = sum as f64 / trials;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    // sample variance via the exact integer sums
    let var = (sum_sq as f64 - (sum as f64) * (sum as f64) / trials) / (trials - 1.0);
    let std_error = (var.max(0.0) / trials).sqrt();
    (mean, std_error)
}
