//! Removal rules and post-removal violator expectations.
//!
//! A removal rule deterministically picks `K ⊆ R` with `|K| = k` (`k < |R|`)
//! and the quantity of interest is `E[|V(R ∖ K)|]` over a uniformly random
//! `r`-subset `R`. Three bound envelopes computable from `(n, r, k, δ)`
//! frame the measured value:
//!
//! * a general tail-style bound `c·max{(n/r)·δ·ln n, (n/r)·k}` with
//!   `c = 33`, valid for every rule on every space;
//! * a nondegenerate-space bound `Σ_{i=1}^{k+1} δ^i · (n-r)/(r+1) + k`;
//! * the exact closed form `(n-r)/(r+1)·(δ+k) + k`, attained by the
//!   smallest-k rule on the δ-smallest space.

use num::{BigInt, BigRational, BigUint, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::{binomial_big, masks_of_size, ConstraintSet};
use crate::error::SpaceError;
use crate::sampling::{
    check_ksubset_budget, exact_expectation, for_each_removal, mean_and_std_error, rational_to_f64,
    sample_r_subset, Budget, ExpectationResult, ExpectationValue, Quantity,
};
use crate::space::{ObjectiveValue, Oracle};
use crate::stream::{domain, rng_for};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RemovalRule {
    /// Uniform `K`, deterministic given `(seed, R, k)`.
    RandomK { seed: u64 },
    /// Remove the `k` smallest-indexed elements.
    SmallestK,
    /// The `K` maximizing `|V(R∖K)|`; ties go to the lexicographically
    /// smallest `K`.
    AdversarialMaxViolators,
    /// The `K` minimizing the objective `ω(R∖K)`; needs an objective-carrying
    /// instance. Ties as above.
    ObjectiveMin,
    /// Remove `k` elements outside the basis of `R` (smallest-indexed ones).
    BasisAvoiding,
}

impl RemovalRule {
    pub fn name(&self) -> &'static str {
        match self {
            RemovalRule::RandomK { .. } => "random",
            RemovalRule::SmallestK => "smallest",
            RemovalRule::AdversarialMaxViolators => "adversarial",
            RemovalRule::ObjectiveMin => "objective-min",
            RemovalRule::BasisAvoiding => "basis-avoiding",
        }
    }

    pub fn parse(name: &str, seed: u64) -> Option<RemovalRule> {
        match name {
            "random" => Some(RemovalRule::RandomK { seed }),
            "smallest" => Some(RemovalRule::SmallestK),
            "adversarial" => Some(RemovalRule::AdversarialMaxViolators),
            "objective-min" => Some(RemovalRule::ObjectiveMin),
            "basis-avoiding" => Some(RemovalRule::BasisAvoiding),
            _ => None,
        }
    }
}

/// Apply `rule` to a subset given as ascending ids, returning `R ∖ K`.
pub fn apply_rule_ids(
    oracle: &Oracle,
    rule: &RemovalRule,
    set: &[u32],
    k: usize,
    budget: &Budget,
) -> Result<Vec<u32>, SpaceError> {
    if k >= set.len() && !(k == 0 && set.is_empty()) {
        return Err(SpaceError::InvalidInstance(format!(
            "removal budget k = {k} must stay below |R| = {}",
            set.len()
        )));
    }
    match rule {
        RemovalRule::RandomK { seed } => {
            let mut payload = Vec::with_capacity(set.len() + 2);
            payload.push(k as u64);
            payload.push(set.len() as u64);
            payload.extend(set.iter().map(|&i| i as u64));
            let mut rng = rng_for(*seed, domain::REMOVAL, &payload);
            let positions = sample_r_subset(&mut rng, set.len(), k);
            let mut out = Vec::with_capacity(set.len() - k);
            let mut next = positions.iter().peekable();
            for (i, &x) in set.iter().enumerate() {
                if next.peek() == Some(&&(i as u32)) {
                    next.next();
                } else {
                    out.push(x);
                }
            }
            Ok(out)
        }
        RemovalRule::SmallestK => Ok(set[k..].to_vec()),
        RemovalRule::AdversarialMaxViolators => {
            check_ksubset_budget("apply_rule(adversarial)", set.len(), k, budget)?;
            let mut best: Option<(u64, Vec<u32>)> = None;
            for_each_removal(set, k, |reduced| {
                let count = oracle.violator_count_ids(reduced)?;
                if best.as_ref().is_none_or(|(b, _)| count > *b) {
                    best = Some((count, reduced.to_vec()));
                }
                Ok(())
            })?;
            Ok(best.expect("at least one removal").1)
        }
        RemovalRule::ObjectiveMin => {
            check_ksubset_budget("apply_rule(objective-min)", set.len(), k, budget)?;
            let mut best: Option<(ObjectiveValue, Vec<u32>)> = None;
            for_each_removal(set, k, |reduced| {
                let omega = oracle.objective_ids(reduced).ok_or_else(|| {
                    SpaceError::RuleInapplicable(
                        "objective-min needs an instance with an objective".into(),
                    )
                })??;
                if best.as_ref().is_none_or(|(b, _)| omega < *b) {
                    best = Some((omega, reduced.to_vec()));
                }
                Ok(())
            })?;
            Ok(best.expect("at least one removal").1)
        }
        RemovalRule::BasisAvoiding => {
            let basis: Vec<u32> = match oracle.designated_basis_ids(set) {
                Some(b) => b?,
                None => {
                    // fall back to the lexicographically first enumerated basis
                    if set.len() > 20 || set.last().is_some_and(|&m| m >= 64) {
                        return Err(SpaceError::RuleInapplicable(
                            "basis-avoiding needs a designated basis or an enumerable set".into(),
                        ));
                    }
                    let g = ConstraintSet::from_ids(set);
                    crate::structure::bases_of(oracle, g)?
                        .first()
                        .map(|b| b.to_ids())
                        .unwrap_or_default()
                }
            };
            let outside: Vec<u32> =
                set.iter().copied().filter(|x| basis.binary_search(x).is_err()).collect();
            if outside.len() < k {
                return Err(SpaceError::RuleInapplicable(format!(
                    "basis-avoiding cannot remove {k} elements: only {} lie outside the basis",
                    outside.len()
                )));
            }
            Ok(set.iter().copied().filter(|x| outside[..k].binary_search(x).is_err()).collect())
        }
    }
}

/// Mask-set convenience wrapper around [`apply_rule_ids`].
pub fn apply_rule(
    oracle: &Oracle,
    rule: &RemovalRule,
    set: ConstraintSet,
    k: usize,
    budget: &Budget,
) -> Result<ConstraintSet, SpaceError> {
    Ok(ConstraintSet::from_ids(&apply_rule_ids(oracle, rule, &set.to_ids(), k, budget)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Enumerate every `r`-subset (and for the random rule, every `K`).
    Exact,
    MonteCarlo {
        trials: u64,
        seed: u64,
    },
}

/// `E[|V(R ∖ K_rule)|]` over uniform `r`-subsets.
///
/// Exact mode enumerates all `C(n,r)` subsets (`n ≤ 20`); the random rule is
/// averaged over its whole choice space (all `K`) instead of one seed, which
/// is the quantity the theory speaks about.
pub fn expected_violators_after_removal(
    oracle: &Oracle,
    rule: &RemovalRule,
    r: usize,
    k: usize,
    mode: EvalMode,
    budget: &Budget,
) -> Result<ExpectationResult, SpaceError> {
    let n = oracle.n();
    if r > n {
        return Err(SpaceError::InvalidInstance(format!("r = {r} exceeds n = {n}")));
    }
    if k >= r && !(k == 0 && r == 0) {
        return Err(SpaceError::InvalidInstance(format!(
            "removal budget k = {k} must stay below r = {r}"
        )));
    }
    match mode {
        EvalMode::Exact => {
            if n > 20 {
                return Err(SpaceError::mode(
                    "expected_violators_after_removal",
                    n,
                    20,
                    "enumerates all r-subsets",
                ));
            }
            let mut numerator = BigUint::zero();
            let mut denominator = BigInt::from(binomial_big(n, r));
            if let RemovalRule::RandomK { .. } = rule {
                check_ksubset_budget("expected_violators_after_removal", r, k, budget)?;
                for set in masks_of_size(n, r) {
                    let ids = set.to_ids();
                    for_each_removal(&ids, k, |reduced| {
                        numerator += oracle.violator_count_ids(reduced)?;
                        Ok(())
                    })?;
                }
                denominator *= BigInt::from(binomial_big(r, k));
            } else {
                for set in masks_of_size(n, r) {
                    let reduced = apply_rule_ids(oracle, rule, &set.to_ids(), k, budget)?;
                    numerator += oracle.violator_count_ids(&reduced)?;
                }
            }
            Ok(ExpectationResult {
                quantity: Quantity::V,
                r,
                k,
                value: ExpectationValue::Exact(BigRational::new(
                    BigInt::from(numerator),
                    denominator,
                )),
            })
        }
        EvalMode::MonteCarlo { trials, seed } => {
            if trials == 0 {
                return Err(SpaceError::InvalidInstance("trials must be positive".into()));
            }
            let values: Result<Vec<u64>, SpaceError> = (0..trials)
                .into_par_iter()
                .map(|t| {
                    let mut rng = rng_for(seed, domain::MC_TRIAL, &[t]);
                    let sample = sample_r_subset(&mut rng, n, r);
                    let reduced = apply_rule_ids(oracle, rule, &sample, k, budget)?;
                    oracle.violator_count_ids(&reduced)
                })
                .collect();
            let values = values?;
            let (estimate, std_error) = mean_and_std_error(&values);
            Ok(ExpectationResult {
                quantity: Quantity::V,
                r,
                k,
                value: ExpectationValue::MonteCarlo { estimate, std_error, trials, seed },
            })
        }
    }
}

/// The three envelopes, computed from `(n, r, k, δ)` alone.
#[derive(Debug, Clone)]
pub struct BoundEnvelope {
    /// `c · max{(n/r)·δ·ln n, (n/r)·k}`, natural log, `c = 33`.
    pub general: f64,
    /// `Σ_{i=1}^{k+1} δ^i · (n-r)/(r+1) + k` (nondegenerate spaces).
    pub nondegenerate: BigRational,
    /// `(n-r)/(r+1)·(δ+k) + k` — exact for smallest-k on δ-smallest.
    pub smallest_rule_exact: BigRational,
}

pub const GENERAL_BOUND_CONSTANT: f64 = 33.0;

impl BoundEnvelope {
    pub fn for_params(n: usize, r: usize, k: usize, delta: usize) -> BoundEnvelope {
        let nf = n as f64;
        let rf = r as f64;
        let general =
            GENERAL_BOUND_CONSTANT * ((nf / rf) * delta as f64 * nf.ln()).max((nf / rf) * k as f64);
        let ratio = BigRational::new(BigInt::from(n - r), BigInt::from(r + 1));
        let mut power_sum = BigInt::zero();
        let delta_big = BigInt::from(delta);
        let mut power = BigInt::from(1);
        for _ in 1..=k + 1 {
            power *= &delta_big;
            power_sum += &power;
        }
        let k_big = BigRational::from_integer(k.into());
        let nondegenerate = BigRational::from_integer(power_sum) * &ratio + &k_big;
        let smallest_rule_exact =
            ratio * BigRational::from_integer(BigInt::from(delta + k)) + k_big;
        BoundEnvelope { general, nondegenerate, smallest_rule_exact }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "general": self.general,
            "nondegenerate_num": self.nondegenerate.numer().to_string(),
            "nondegenerate_den": self.nondegenerate.denom().to_string(),
            "smallest_rule_num": self.smallest_rule_exact.numer().to_string(),
            "smallest_rule_den": self.smallest_rule_exact.denom().to_string(),
        })
    }
}

/// Measured expectation, the chain through `v_{r,k} + k`, and the envelopes.
#[derive(Debug, Clone)]
pub struct UpperBoundReport {
    pub rule: &'static str,
    pub r: usize,
    pub k: usize,
    pub delta: usize,
    pub measured: ExpectationResult,
    /// Exact `v_{r,k}` when the regime allows it (`n ≤ 14`).
    pub v_rk: Option<ExpectationResult>,
    /// `measured ≤ v_{r,k} + k` (exact comparison when both sides exact).
    pub chain_ok: Option<bool>,
    pub envelope: BoundEnvelope,
    pub general_ok: bool,
    /// Claimed only when the caller vouches for nondegeneracy.
    pub nondegenerate_ok: Option<bool>,
}

impl UpperBoundReport {
    pub fn all_checked_ok(&self) -> bool {
        self.general_ok && self.chain_ok.unwrap_or(true) && self.nondegenerate_ok.unwrap_or(true)
    }
}

/// Measure `E[|V(R∖K_rule)|]` and compare against everything comparable.
/// `delta` is the space's combinatorial dimension (computed when `None` and
/// `n` permits); `nondegenerate` gates the nondegenerate-space envelope.
#[allow(clippy::too_many_arguments)]
pub fn check_upper_bounds(
    oracle: &Oracle,
    rule: &RemovalRule,
    r: usize,
    k: usize,
    delta: Option<usize>,
    nondegenerate: bool,
    mode: EvalMode,
    budget: &Budget,
) -> Result<UpperBoundReport, SpaceError> {
    let n = oracle.n();
    let delta = match delta {
        Some(d) => d,
        None => crate::structure::combinatorial_dimension(oracle)?,
    };
    let measured = expected_violators_after_removal(oracle, rule, r, k, mode, budget)?;
    let v_rk =
        if n <= 14 { Some(exact_expectation(oracle, Quantity::Vk, r, k, budget)?) } else { None };
    let chain_ok = v_rk.as_ref().map(|vrk| {
        let bound =
            vrk.exact().expect("exact by construction") + BigRational::from_integer(k.into());
        match &measured.value {
            ExpectationValue::Exact(q) => *q <= bound,
            ExpectationValue::MonteCarlo { estimate, std_error, .. } => {
                *estimate <= rational_to_f64(&bound) + 3.0 * std_error
            }
        }
    });
    let envelope = BoundEnvelope::for_params(n, r, k, delta);
    let measured_f = measured.as_f64();
    let general_ok = measured_f <= envelope.general;
    let nondegenerate_ok = nondegenerate.then(|| match &measured.value {
        ExpectationValue::Exact(q) => *q <= envelope.nondegenerate,
        ExpectationValue::MonteCarlo { estimate, std_error, .. } => {
            *estimate <= rational_to_f64(&envelope.nondegenerate) + 3.0 * std_error
        }
    });
    Ok(UpperBoundReport {
        rule: rule.name(),
        r,
        k,
        delta,
        measured,
        v_rk,
        chain_ok,
        envelope,
        general_ok,
        nondegenerate_ok,
    })
}

/// Monte Carlo probe of the planted space's violator expectation, the
/// quantity its construction drives toward `x = ⌈ε·(n/r)·δ·ln n⌉`.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    pub n: usize,
    pub r: usize,
    pub delta: usize,
    pub eps: f64,
    /// Mean of `|V(R)|` over the trials.
    pub estimate: f64,
    pub std_error: f64,
    /// Fraction of trials where no candidate basis qualified (`V(R) = ∅`).
    pub zero_fraction: f64,
    /// `estimate / (1 - zero_fraction)`: the planted-set size as actually
    /// realized, comparable to `target`.
    pub adjusted: f64,
    /// `ε·(n/r)·δ·ln n`, un-rounded.
    pub target: f64,
    /// `|adjusted - target| / target`.
    pub relative_deviation: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Sample `|V(R)|` on the planted space at set size `r`. The construction
/// reduces its removal variants to this plain case, so the probe runs with
/// no removal.
pub fn lower_bound_experiment(
    params: crate::instances::random_consistent::RandomConsistentParams,
    trials: u64,
    seed: u64,
) -> Result<LowerBoundReport, SpaceError> {
    let alpha = (params.r as f64).ln() / (params.n as f64).ln();
    let gamma = (params.delta as f64).ln() / (params.n as f64).ln();
    if gamma >= alpha - params.eps {
        return Err(SpaceError::RegimeUnsupported(format!(
            "need log_n(delta) = {gamma:.4} below alpha - eps = {:.4}",
            alpha - params.eps
        )));
    }
    if trials == 0 {
        return Err(SpaceError::InvalidInstance("trials must be positive".into()));
    }
    let oracle = Oracle::from_space(
        crate::instances::random_consistent::RandomConsistentSpace::new(params)?,
    );
    let counts: Result<Vec<u64>, SpaceError> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, domain::MC_TRIAL, &[t]);
            let sample = sample_r_subset(&mut rng, params.n, params.r);
            oracle.violator_count_ids(&sample)
        })
        .collect();
    let counts = counts?;
    let (estimate, std_error) = mean_and_std_error(&counts);
    let zeros = counts.iter().filter(|&&v| v == 0).count() as f64;
    let zero_fraction = zeros / counts.len() as f64;
    let target = params.eps
        * (params.n as f64 / params.r as f64)
        * params.delta as f64
        * (params.n as f64).ln();
    let adjusted = if zero_fraction < 1.0 { estimate / (1.0 - zero_fraction) } else { 0.0 };
    let relative_deviation = (adjusted - target).abs() / target;
    Ok(LowerBoundReport {
        n: params.n,
        r: params.r,
        delta: params.delta,
        eps: params.eps,
        estimate,
        std_error,
        zero_fraction,
        adjusted,
        target,
        relative_deviation,
        trials,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::dsmallest::DSmallestSpace;

    fn d_smallest(n: usize, d: usize) -> Oracle {
        Oracle::from_space(DSmallestSpace::new(n, d).unwrap())
    }

    #[test]
    fn smallest_rule_drops_the_low_end() {
        // values {2,5,7,9} -> keep {7,9}
        let oracle = d_smallest(10, 1);
        let set = ConstraintSet::from_indices([1, 4, 6, 8]);
        let reduced =
            apply_rule(&oracle, &RemovalRule::SmallestK, set, 2, &Budget::default()).unwrap();
        assert_eq!(reduced, ConstraintSet::from_indices([6, 8]));
    }

    #[test]
    fn zero_removal_is_identity_for_every_rule() {
        let oracle = d_smallest(8, 2);
        let set = ConstraintSet::from_indices([2, 3, 5]);
        for rule in [
            RemovalRule::RandomK { seed: 5 },
            RemovalRule::SmallestK,
            RemovalRule::AdversarialMaxViolators,
            RemovalRule::ObjectiveMin,
            RemovalRule::BasisAvoiding,
        ] {
            assert_eq!(apply_rule(&oracle, &rule, set, 0, &Budget::default()).unwrap(), set);
        }
    }

    #[test]
    fn adversarial_keeps_the_low_values_exposed() {
        // values {3,4,5} inside 1..=6: dropping 3 leaves violators {1,2,3}
        // (the dropped element violates too); dropping 4 or 5 leaves only
        // {1,2}, so the adversary removes the minimum
        let oracle = d_smallest(6, 1);
        let set = ConstraintSet::from_indices([2, 3, 4]);
        let reduced =
            apply_rule(&oracle, &RemovalRule::AdversarialMaxViolators, set, 1, &Budget::default())
                .unwrap();
        assert_eq!(reduced, ConstraintSet::from_indices([3, 4]));
        assert_eq!(oracle.violators(reduced).unwrap().len(), 3);
    }

    #[test]
    fn adversarial_dominates_every_other_rule() {
        let oracle = d_smallest(9, 2);
        let budget = Budget::default();
        for mask in crate::bitset::masks_of_size(9, 4) {
            let ids = mask.to_ids();
            let adv =
                apply_rule_ids(&oracle, &RemovalRule::AdversarialMaxViolators, &ids, 2, &budget)
                    .unwrap();
            let adv_count = oracle.violator_count_ids(&adv).unwrap();
            for rule in [
                RemovalRule::RandomK { seed: 1 },
                RemovalRule::SmallestK,
                RemovalRule::ObjectiveMin,
                RemovalRule::BasisAvoiding,
            ] {
                let reduced = apply_rule_ids(&oracle, &rule, &ids, 2, &budget).unwrap();
                assert!(oracle.violator_count_ids(&reduced).unwrap() <= adv_count);
            }
        }
    }

    #[test]
    fn random_rule_is_deterministic_per_set() {
        let oracle = d_smallest(20, 1);
        let rule = RemovalRule::RandomK { seed: 11 };
        let set: Vec<u32> = vec![1, 4, 7, 9, 13, 17];
        let a = apply_rule_ids(&oracle, &rule, &set, 3, &Budget::default()).unwrap();
        let b = apply_rule_ids(&oracle, &rule, &set, 3, &Budget::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 3);
        assert!(a.iter().all(|x| set.contains(x)));
    }

    #[test]
    fn basis_avoiding_spares_the_basis() {
        let oracle = d_smallest(8, 2);
        let set = ConstraintSet::from_indices([1, 3, 4, 6]);
        let reduced =
            apply_rule(&oracle, &RemovalRule::BasisAvoiding, set, 2, &Budget::default()).unwrap();
        // basis = two smallest = {1,3}; remove the two smallest outside it
        assert_eq!(reduced, ConstraintSet::from_indices([1, 3]));
        // k larger than the non-basis part is inapplicable
        let err = apply_rule(&oracle, &RemovalRule::BasisAvoiding, set, 3, &Budget::default())
            .unwrap_err();
        assert!(matches!(err, SpaceError::RuleInapplicable(_)));
    }

    #[test]
    fn smallest_rule_matches_the_closed_form() {
        // delta-smallest with the smallest-k rule: (n-r)/(r+1)·(δ+k)+k
        let oracle = d_smallest(10, 1);
        let result = expected_violators_after_removal(
            &oracle,
            &RemovalRule::SmallestK,
            4,
            1,
            EvalMode::Exact,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(result.exact().unwrap(), &BigRational::new(BigInt::from(17), BigInt::from(5)));
        let envelope = BoundEnvelope::for_params(10, 4, 1, 1);
        assert_eq!(result.exact().unwrap(), &envelope.smallest_rule_exact);
    }

    #[test]
    fn random_rule_exact_equals_expectation_at_reduced_size() {
        let oracle = d_smallest(9, 2);
        let budget = Budget::default();
        for (r, k) in [(4, 1), (5, 2), (3, 0)] {
            let after = expected_violators_after_removal(
                &oracle,
                &RemovalRule::RandomK { seed: 3 },
                r,
                k,
                EvalMode::Exact,
                &budget,
            )
            .unwrap();
            let direct = exact_expectation(&oracle, Quantity::V, r - k, 0, &budget).unwrap();
            assert_eq!(after.exact().unwrap(), direct.exact().unwrap(), "r={r} k={k}");
        }
    }

    #[test]
    fn upper_bound_report_on_a_nondegenerate_instance() {
        let oracle = d_smallest(10, 2);
        let report = check_upper_bounds(
            &oracle,
            &RemovalRule::SmallestK,
            5,
            1,
            None,
            true,
            EvalMode::Exact,
            &Budget::default(),
        )
        .unwrap();
        assert_eq!(report.delta, 2);
        assert!(report.all_checked_ok(), "{report:?}");
        assert_eq!(report.chain_ok, Some(true));
    }

    #[test]
    fn mc_mode_matches_exact_within_noise() {
        let oracle = d_smallest(12, 1);
        let budget = Budget::default();
        let exact = expected_violators_after_removal(
            &oracle,
            &RemovalRule::SmallestK,
            5,
            2,
            EvalMode::Exact,
            &budget,
        )
        .unwrap();
        let mc = expected_violators_after_removal(
            &oracle,
            &RemovalRule::SmallestK,
            5,
            2,
            EvalMode::MonteCarlo { trials: 4000, seed: 123 },
            &budget,
        )
        .unwrap();
        let (estimate, std_error) = match mc.value {
            ExpectationValue::MonteCarlo { estimate, std_error, .. } => (estimate, std_error),
            _ => unreachable!(),
        };
        let target = rational_to_f64(exact.exact().unwrap());
        assert!(
            (estimate - target).abs() <= 4.0 * std_error.max(1e-9),
            "estimate {estimate} vs exact {target} (se {std_error})"
        );
    }

    #[test]
    fn rule_names_round_trip() {
        for name in ["random", "smallest", "adversarial", "objective-min", "basis-avoiding"] {
            assert_eq!(RemovalRule::parse(name, 7).unwrap().name(), name);
        }
        assert!(RemovalRule::parse("bogus", 7).is_none());
    }
}
