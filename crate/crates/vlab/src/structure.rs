//! Structural verifiers: the two violator-space axioms, bases, combinatorial
//! dimension, extreme constraints, and nondegeneracy.
//!
//! Every check that can fail reports a witness that re-fails the predicate
//! when re-evaluated; "it returned false" is never the whole answer.

use rand::Rng;
use serde::Serialize;

use crate::bitset::ConstraintSet;
use crate::error::SpaceError;
use crate::space::Oracle;
use crate::stream::{domain, rng_for};

/// How a check covered the space: every subset (pair), or a seeded sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub ok: bool,
    /// A set `G` with `V(G) ∩ G ≠ ∅`, when `ok` is false.
    pub witness: Option<Vec<u32>>,
    pub mode: CheckMode,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalityReport {
    pub ok: bool,
    /// A pair `F ⊆ G` with `G ∩ V(F) = ∅` but `V(G) ≠ V(F)`.
    pub witness: Option<(Vec<u32>, Vec<u32>)>,
    pub mode: CheckMode,
}

#[derive(Debug, Clone, Serialize)]
pub struct NondegeneracyReport {
    pub ok: bool,
    /// `(G, B1, B2)` where both `B`s are distinct inclusion-minimal subsets
    /// of `G` with `V(B) = V(G)`, when `ok` is false.
    pub witness: Option<(Vec<u32>, Vec<u32>, Vec<u32>)>,
    pub mode: CheckMode,
}

/// Limits for the exhaustive modes. Consistency and dimension walk `2^n`
/// subsets; locality and nondegeneracy walk all `3^n` subset pairs.
pub const EXHAUSTIVE_SUBSET_MAX_N: usize = 20;
pub const EXHAUSTIVE_PAIR_MAX_N: usize = 16;

/// Check `V(G) ∩ G = ∅`. Exhaustive over all subsets for `n <= 20`,
/// otherwise over a seeded sample of subsets.
pub fn check_consistency(
    oracle: &Oracle,
    mode: CheckMode,
) -> Result<ConsistencyReport, SpaceError> {
    let n = oracle.n();
    match mode {
        CheckMode::Exhaustive => {
            if n > EXHAUSTIVE_SUBSET_MAX_N {
                return Err(SpaceError::mode(
                    "check_consistency",
                    n,
                    EXHAUSTIVE_SUBSET_MAX_N,
                    "exhaustive subset walk",
                ));
            }
            for mask in 0..(1u64 << n) {
                let set = ConstraintSet(mask);
                match oracle.violators(set) {
                    Ok(_) => {}
                    Err(SpaceError::ConsistencyViolation { set, .. }) => {
                        return Ok(ConsistencyReport {
                            ok: false,
                            witness: Some(set.to_ids()),
                            mode,
                        });
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(ConsistencyReport { ok: true, witness: None, mode })
        }
        CheckMode::Sampled { trials, seed } => {
            for t in 0..trials {
                let mut rng = rng_for(seed, domain::CHECK, &[0, t]);
                let set = random_subset(&mut rng, n);
                match oracle.violators_ids(&set) {
                    Ok(_) => {}
                    Err(SpaceError::ConsistencyViolation { .. }) => {
                        return Ok(ConsistencyReport { ok: false, witness: Some(set), mode });
                    }
                    Err(e) => return Err(e),
                }
            }
            Ok(ConsistencyReport { ok: true, witness: None, mode })
        }
    }
}

/// Check locality: for every `F ⊆ G`, `G ∩ V(F) = ∅` implies `V(G) = V(F)`.
/// Exhaustive over all `3^n` pairs for `n <= 16`, otherwise sampled.
pub fn check_locality(oracle: &Oracle, mode: CheckMode) -> Result<LocalityReport, SpaceError> {
    let n = oracle.n();
    match mode {
        CheckMode::Exhaustive => {
            if n > EXHAUSTIVE_PAIR_MAX_N {
                return Err(SpaceError::mode(
                    "check_locality",
                    n,
                    EXHAUSTIVE_PAIR_MAX_N,
                    "exhaustive subset-pair walk",
                ));
            }
            let table = oracle.dense_table()?;
            for g in 0..(1u64 << n) {
                let vg = table[g as usize];
                for f in ConstraintSet(g).subsets() {
                    let vf = table[f.0 as usize];
                    if g & vf == 0 && vf != vg {
                        return Ok(LocalityReport {
                            ok: false,
                            witness: Some((f.to_ids(), ConstraintSet(g).to_ids())),
                            mode,
                        });
                    }
                }
            }
            Ok(LocalityReport { ok: true, witness: None, mode })
        }
        CheckMode::Sampled { trials, seed } => {
            for t in 0..trials {
                let mut rng = rng_for(seed, domain::CHECK, &[1, t]);
                let g = random_subset(&mut rng, n);
                // random subset of g, elementwise
                let f: Vec<u32> = g.iter().copied().filter(|_| rng.gen::<bool>()).collect();
                let vf = oracle.violators_ids(&f)?;
                if intersects_sorted(&g, &vf) {
                    continue;
                }
                let vg = oracle.violators_ids(&g)?;
                if vf != vg {
                    return Ok(LocalityReport { ok: false, witness: Some((f, g)), mode });
                }
            }
            Ok(LocalityReport { ok: true, witness: None, mode })
        }
    }
}

/// All inclusion-minimal `B ⊆ G` with `V(B) = V(G)`, in lexicographic order.
/// Enumerates the `2^|G|` subsets of `G`; requires `|G| <= 20`.
pub fn bases_of(oracle: &Oracle, g: ConstraintSet) -> Result<Vec<ConstraintSet>, SpaceError> {
    oracle.require_unpoisoned("bases_of")?;
    if g.len() > EXHAUSTIVE_SUBSET_MAX_N {
        return Err(SpaceError::mode(
            "bases_of",
            g.len(),
            EXHAUSTIVE_SUBSET_MAX_N,
            "enumerates subsets of G",
        ));
    }
    let vg = oracle.violators(g)?;
    let mut candidates: Vec<ConstraintSet> = Vec::new();
    for b in g.subsets() {
        if oracle.violators(b)? == vg {
            candidates.push(b);
        }
    }
    Ok(minimal_sets(candidates))
}

/// Keep the inclusion-minimal sets of a candidate list.
fn minimal_sets(mut candidates: Vec<ConstraintSet>) -> Vec<ConstraintSet> {
    candidates.sort_by_key(|c| c.len());
    let mut minimal: Vec<ConstraintSet> = Vec::new();
    'outer: for c in candidates {
        for m in &minimal {
            if m.is_subset_of(c) {
                continue 'outer;
            }
        }
        minimal.push(c);
    }
    minimal.sort();
    minimal
}

/// Is `B` a basis in the space, i.e. does every proper subset of `B` have a
/// different violator set? Requires `|B| <= 20`.
pub fn is_basis_in_space(oracle: &Oracle, b: ConstraintSet) -> Result<bool, SpaceError> {
    oracle.require_unpoisoned("is_basis_in_space")?;
    if b.len() > EXHAUSTIVE_SUBSET_MAX_N {
        return Err(SpaceError::mode(
            "is_basis_in_space",
            b.len(),
            EXHAUSTIVE_SUBSET_MAX_N,
            "enumerates subsets of B",
        ));
    }
    let vb = oracle.violators(b)?;
    for f in b.subsets() {
        if f != b && oracle.violators(f)? == vb {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Size of the largest basis in the space. Walks all subsets with a cheap
/// one-element-down prefilter before the full basis test; requires `n <= 20`.
pub fn combinatorial_dimension(oracle: &Oracle) -> Result<usize, SpaceError> {
    oracle.require_unpoisoned("combinatorial_dimension")?;
    let n = oracle.n();
    if n > EXHAUSTIVE_SUBSET_MAX_N {
        return Err(SpaceError::mode(
            "combinatorial_dimension",
            n,
            EXHAUSTIVE_SUBSET_MAX_N,
            "exhaustive subset walk",
        ));
    }
    // Survivors of the prefilter, grouped by size. A basis must differ from
    // each of its one-element-down neighbours, which prunes almost
    // everything in structured instances.
    let mut survivors_by_size: Vec<Vec<ConstraintSet>> = vec![Vec::new(); n + 1];
    for mask in 0..(1u64 << n) {
        let b = ConstraintSet(mask);
        let vb = oracle.violators(b)?;
        let mut ok = true;
        for x in b.iter() {
            if oracle.violators(b.remove(x))? == vb {
                ok = false;
                break;
            }
        }
        if ok {
            survivors_by_size[b.len()].push(b);
        }
    }
    for size in (0..=n).rev() {
        for &b in &survivors_by_size[size] {
            if is_basis_in_space(oracle, b)? {
                return Ok(size);
            }
        }
    }
    // The empty set is always a basis; sizes loop can only miss it if the
    // oracle errored earlier.
    Ok(0)
}

/// Extreme constraints of `G`: elements `h ∈ G` with `h ∈ V(G ∖ {h})`.
pub fn extreme_constraints(oracle: &Oracle, g: ConstraintSet) -> Result<ConstraintSet, SpaceError> {
    let mut out = ConstraintSet::EMPTY;
    for h in g.iter() {
        if oracle.violators(g.remove(h))?.contains(h) {
            out = out.insert(h);
        }
    }
    Ok(out)
}

/// Does every subset have exactly one basis? Exhaustive over all subsets for
/// `n <= 16`, otherwise over sampled subsets of size at most 16.
pub fn is_nondegenerate(
    oracle: &Oracle,
    mode: CheckMode,
) -> Result<NondegeneracyReport, SpaceError> {
    oracle.require_unpoisoned("is_nondegenerate")?;
    let n = oracle.n();
    match mode {
        CheckMode::Exhaustive => {
            if n > EXHAUSTIVE_PAIR_MAX_N {
                return Err(SpaceError::mode(
                    "is_nondegenerate",
                    n,
                    EXHAUSTIVE_PAIR_MAX_N,
                    "walks subsets of every subset",
                ));
            }
            for mask in 0..(1u64 << n) {
                let g = ConstraintSet(mask);
                if let Some((b1, b2)) = two_bases(oracle, g)? {
                    return Ok(NondegeneracyReport {
                        ok: false,
                        witness: Some((g.to_ids(), b1.to_ids(), b2.to_ids())),
                        mode,
                    });
                }
            }
            Ok(NondegeneracyReport { ok: true, witness: None, mode })
        }
        CheckMode::Sampled { trials, seed } => {
            for t in 0..trials {
                let mut rng = rng_for(seed, domain::CHECK, &[2, t]);
                let size = rng.gen_range(0..=n.min(EXHAUSTIVE_PAIR_MAX_N));
                let ids = crate::sampling::sample_r_subset(&mut rng, n, size);
                if ids.iter().any(|&i| i >= 64) {
                    // mask-based basis enumeration only reaches the first 64
                    // constraints; skip samples beyond it
                    continue;
                }
                let g = ConstraintSet::from_ids(&ids);
                if let Some((b1, b2)) = two_bases(oracle, g)? {
                    return Ok(NondegeneracyReport {
                        ok: false,
                        witness: Some((g.to_ids(), b1.to_ids(), b2.to_ids())),
                        mode,
                    });
                }
            }
            Ok(NondegeneracyReport { ok: true, witness: None, mode })
        }
    }
}

/// Two distinct minimal bases of `g`, if they exist.
fn two_bases(
    oracle: &Oracle,
    g: ConstraintSet,
) -> Result<Option<(ConstraintSet, ConstraintSet)>, SpaceError> {
    let vg = oracle.violators(g)?;
    let mut candidates: Vec<ConstraintSet> = Vec::new();
    for b in g.subsets() {
        if oracle.violators(b)? == vg {
            candidates.push(b);
        }
    }
    let minimal = minimal_sets(candidates);
    if minimal.len() >= 2 {
        Ok(Some((minimal[0], minimal[1])))
    } else {
        Ok(None)
    }
}

/// Aggregate diagnostics in the strongest mode the ground set size permits.
#[derive(Debug, Clone, Serialize)]
pub struct SpaceDiagnostics {
    pub n: usize,
    pub consistency: ConsistencyReport,
    /// `None` when skipped because consistency already failed.
    pub locality: Option<LocalityReport>,
    /// `None` when skipped (consistency failure, or `n` too large).
    pub dimension: Option<usize>,
    pub nondegeneracy: Option<NondegeneracyReport>,
}

impl SpaceDiagnostics {
    /// True when every check that ran reported success.
    pub fn all_ok(&self) -> bool {
        self.consistency.ok
            && self.locality.as_ref().is_none_or(|l| l.ok)
            && self.nondegeneracy.as_ref().is_none_or(|d| d.ok)
    }
}

/// Run all checks, exhaustively where the regime allows it and sampled
/// (with `sampled_trials` per check) beyond that. After a consistency
/// failure the structure-dependent checks are skipped.
pub fn run_diagnostics(
    oracle: &Oracle,
    sampled_trials: u64,
    seed: u64,
) -> Result<SpaceDiagnostics, SpaceError> {
    let n = oracle.n();
    let subset_mode = if n <= EXHAUSTIVE_SUBSET_MAX_N {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { trials: sampled_trials, seed }
    };
    let pair_mode = if n <= EXHAUSTIVE_PAIR_MAX_N {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { trials: sampled_trials, seed }
    };
    let consistency = check_consistency(oracle, subset_mode)?;
    if !consistency.ok {
        return Ok(SpaceDiagnostics {
            n,
            consistency,
            locality: None,
            dimension: None,
            nondegeneracy: None,
        });
    }
    let locality = Some(check_locality(oracle, pair_mode)?);
    let dimension =
        if n <= EXHAUSTIVE_SUBSET_MAX_N { Some(combinatorial_dimension(oracle)?) } else { None };
    let nondegeneracy = Some(is_nondegenerate(oracle, pair_mode)?);
    Ok(SpaceDiagnostics { n, consistency, locality, dimension, nondegeneracy })
}

/// Uniform random subset: for mask-sized ground sets each subset is equally
/// likely; beyond 64 constraints a uniform size is drawn first.
fn random_subset(rng: &mut impl Rng, n: usize) -> Vec<u32> {
    if n <= 64 {
        let mask = rng.gen::<u64>() & ConstraintSet::full(n).0;
        ConstraintSet(mask).to_ids()
    } else {
        let size = rng.gen_range(0..=n);
        crate::sampling::sample_r_subset(rng, n, size)
    }
}

fn intersects_sorted(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}
