//! Canonical form for dimension-1 spaces.
//!
//! Every violator space of combinatorial dimension 1 is a
//! smallest-number-with-repetitions instance in disguise: the ground set
//! splits into ordered layers `V_1, …, V_m` so that the violators of any
//! element in layer `i` are exactly the elements of layers `1..i-1`, and
//! the violators of a set are determined by its lowest layer. The
//! canonicalization recovers the layers greedily; reconstruction
//! verification replays the violator map from them.

use crate::bitset::ConstraintSet;
use crate::error::SpaceError;
use crate::instances::repetitions::{EmptySetConvention, RepetitionsSpace};
use crate::space::Oracle;
use crate::structure::{combinatorial_dimension, EXHAUSTIVE_SUBSET_MAX_N};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dim1Canonicalization {
    /// Disjoint nonempty layers covering the ground set, lowest first.
    pub layers: Vec<ConstraintSet>,
    /// `label[x]` = 1-based layer index of `x`.
    pub label: Vec<usize>,
}

impl Dim1Canonicalization {
    /// The equivalent multiset instance: value of `x` = its layer index.
    pub fn to_repetitions(
        &self,
        convention: EmptySetConvention,
    ) -> Result<RepetitionsSpace, SpaceError> {
        RepetitionsSpace::with_convention(
            self.label.iter().map(|&l| l as i64).collect(),
            convention,
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "layers": self.layers.iter().map(|l| l.to_ids()).collect::<Vec<_>>(),
            "f": self.label,
        })
    }
}

/// Build the layer decomposition of a dimension-1 space.
///
/// Layers are peeled greedily: the next layer is the set of remaining
/// elements whose singleton violator sets are inclusion-minimal among the
/// remainder. Each peeled element's violator set must equal the union of
/// the earlier layers; any deviation is reported as a
/// [`SpaceError::StructureViolation`] with the offending element.
pub fn canonicalize_dim1(oracle: &Oracle) -> Result<Dim1Canonicalization, SpaceError> {
    let n = oracle.n();
    if n > 64 {
        return Err(SpaceError::mode("canonicalize_dim1", n, 64, "mask-based layers"));
    }
    if n <= EXHAUSTIVE_SUBSET_MAX_N {
        let dimension = combinatorial_dimension(oracle)?;
        if dimension != 1 {
            return Err(SpaceError::NotDimensionOne { dimension });
        }
    }
    let singleton: Vec<ConstraintSet> = (0..n as u32)
        .map(|x| Ok(ConstraintSet::from_ids(&oracle.violators_ids(&[x])?)))
        .collect::<Result<_, SpaceError>>()?;
    let mut remainder = ConstraintSet::full(n);
    let mut layers = Vec::new();
    let mut label = vec![0usize; n];
    let mut earlier = ConstraintSet::EMPTY;
    while !remainder.is_empty() {
        let mut layer = ConstraintSet::EMPTY;
        for x in remainder.iter() {
            let minimal = remainder.iter().all(|y| {
                y == x
                    || !(singleton[y as usize].is_subset_of(singleton[x as usize])
                        && singleton[y as usize] != singleton[x as usize])
            });
            if minimal {
                layer = layer.insert(x);
            }
        }
        for x in layer.iter() {
            if singleton[x as usize] != earlier {
                return Err(SpaceError::StructureViolation {
                    element: x,
                    actual: singleton[x as usize],
                    expected: earlier,
                });
            }
            label[x as usize] = layers.len() + 1;
        }
        layers.push(layer);
        earlier = earlier | layer;
        remainder = remainder - layer;
    }
    Ok(Dim1Canonicalization { layers, label })
}

/// How the space under test reads `V(∅)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmptySetReading {
    /// `V(∅)` is the whole ground set.
    AllViolate,
    /// `V(∅) = V({i})` for this element (the smallest such).
    SameAsSingleton(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionReport {
    pub ok: bool,
    /// First subset where the replayed violator map disagrees.
    pub witness: Option<ConstraintSet>,
    /// Which admissible `V(∅)` rule the space follows; `None` when
    /// neither fits (then `ok` is false with the empty set as witness).
    pub empty_set: Option<EmptySetReading>,
}

/// Exhaustively confirm that the layer labels reproduce the violator map:
/// `V(R) = {x : label[x] < min label over R}` for every nonempty `R`, and
/// `V(∅)` follows one of the two admissible readings.
pub fn verify_reconstruction(
    oracle: &Oracle,
    canon: &Dim1Canonicalization,
) -> Result<ReconstructionReport, SpaceError> {
    let n = oracle.n();
    if n > 16 {
        return Err(SpaceError::mode("verify_reconstruction", n, 16, "full subset sweep"));
    }
    if canon.label.len() != n {
        return Err(SpaceError::InvalidInstance(format!(
            "canonical form labels {} elements, space has {n}",
            canon.label.len()
        )));
    }
    // prefix_union[l] = elements with label < l
    let mut prefix_union = vec![ConstraintSet::EMPTY; canon.layers.len() + 1];
    for (i, layer) in canon.layers.iter().enumerate() {
        prefix_union[i + 1] = prefix_union[i] | *layer;
    }
    for mask in 1..(1u64 << n) {
        let set = ConstraintSet(mask);
        let lowest = set.iter().map(|x| canon.label[x as usize]).min().unwrap();
        let expected = prefix_union[lowest - 1] - set;
        let actual = oracle.violators(set)?;
        if actual != expected {
            return Ok(ReconstructionReport { ok: false, witness: Some(set), empty_set: None });
        }
    }
    let at_empty = oracle.violators(ConstraintSet::EMPTY)?;
    let empty_set = if at_empty == ConstraintSet::full(n) {
        Some(EmptySetReading::AllViolate)
    } else {
        ConstraintSet::full(n)
            .iter()
            .find(|&i| {
                !at_empty.contains(i)
                    && oracle.violators(ConstraintSet::singleton(i)).is_ok_and(|v| v == at_empty)
            })
            .map(EmptySetReading::SameAsSingleton)
    };
    Ok(ReconstructionReport {
        ok: empty_set.is_some(),
        witness: empty_set.is_none().then_some(ConstraintSet::EMPTY),
        empty_set,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseStructureReport {
    /// `(i, j)` with `V(i) ≠ V(j)` but neither violating the other.
    pub separation_witness: Option<(u32, u32)>,
    /// `(i, j)` whose singleton violator sets are inclusion-incomparable.
    pub chain_witness: Option<(u32, u32)>,
}

impl PairwiseStructureReport {
    pub fn ok(&self) -> bool {
        self.separation_witness.is_none() && self.chain_witness.is_none()
    }
}

/// Check the two pairwise conditions every dimension-1 space satisfies:
/// distinct singleton violator sets force one element to violate the
/// other, and all singleton violator sets form an inclusion chain.
pub fn check_pairwise_structure(oracle: &Oracle) -> Result<PairwiseStructureReport, SpaceError> {
    let n = oracle.n();
    if n <= EXHAUSTIVE_SUBSET_MAX_N {
        let dimension = combinatorial_dimension(oracle)?;
        if dimension != 1 {
            return Err(SpaceError::NotDimensionOne { dimension });
        }
    }
    let singleton: Vec<ConstraintSet> = (0..n as u32)
        .map(|x| Ok(ConstraintSet::from_ids(&oracle.violators_ids(&[x])?)))
        .collect::<Result<_, SpaceError>>()?;
    let mut report = PairwiseStructureReport { separation_witness: None, chain_witness: None };
    'outer: for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            let (vi, vj) = (singleton[i as usize], singleton[j as usize]);
            if report.separation_witness.is_none() && vi != vj && !vj.contains(i) && !vi.contains(j)
            {
                report.separation_witness = Some((i, j));
            }
            if report.chain_witness.is_none() && !vi.is_subset_of(vj) && !vj.is_subset_of(vi) {
                report.chain_witness = Some((i, j));
            }
            if report.separation_witness.is_some() && report.chain_witness.is_some() {
                break 'outer;
            }
        }
    }
    Ok(report)
}

/// Visit the dense violator table of every consistency- and
/// locality-satisfying violator function on `n` elements, in a fixed
/// order; returns how many there are. Supported for `n ≤ 4` (the count
/// grows doubly exponentially).
///
/// Enumeration assigns `V` subset-by-subset in order of size. Locality
/// over cover pairs (`F = G ∖ {x}` with `x ∉ V(F)` forces `V(G) = V(F)`)
/// implies locality for all nested pairs by chaining, so each completed
/// table is a genuine violator space and none is missed.
pub fn for_each_violator_space(
    n: usize,
    mut visit: impl FnMut(&[u64]) -> Result<(), SpaceError>,
) -> Result<u64, SpaceError> {
    if n > 4 {
        return Err(SpaceError::mode("for_each_violator_space", n, 4, "function sweep"));
    }
    let size = 1usize << n;
    let mut order: Vec<u64> = (0..size as u64).collect();
    order.sort_by_key(|&m| (m.count_ones(), m));
    let mut table = vec![0u64; size];
    let full = ConstraintSet::full(n).0;
    let mut count = 0u64;

    fn walk(
        pos: usize,
        order: &[u64],
        table: &mut [u64],
        full: u64,
        count: &mut u64,
        visit: &mut impl FnMut(&[u64]) -> Result<(), SpaceError>,
    ) -> Result<(), SpaceError> {
        if pos == order.len() {
            *count += 1;
            return visit(table);
        }
        let g = order[pos];
        let mut forced: Option<u64> = None;
        let mut bits = g;
        while bits != 0 {
            let x = bits.trailing_zeros();
            bits &= bits - 1;
            let f = g & !(1u64 << x);
            if table[f as usize] & (1u64 << x) == 0 {
                match forced {
                    None => forced = Some(table[f as usize]),
                    Some(v) if v == table[f as usize] => {}
                    Some(_) => return Ok(()),
                }
            }
        }
        match forced {
            Some(v) => {
                table[g as usize] = v;
                walk(pos + 1, order, table, full, count, visit)
            }
            None => {
                let free = full & !g;
                let mut s = free;
                loop {
                    table[g as usize] = s;
                    walk(pos + 1, order, table, full, count, visit)?;
                    if s == 0 {
                        break;
                    }
                    s = (s - 1) & free;
                }
                Ok(())
            }
        }
    }

    walk(0, &order, &mut table, full, &mut count, &mut visit)?;
    Ok(count)
}

/// Combinatorial dimension straight off a dense table: the largest set
/// whose every proper subset has different violators.
pub fn table_dimension(table: &[u64], n: usize) -> usize {
    let mut best = 0usize;
    for mask in 1..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let mut sub = (mask - 1) & mask;
        let mut is_basis = true;
        loop {
            if table[sub as usize] == table[mask as usize] {
                is_basis = false;
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        if is_basis {
            best = size;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::all_extreme::AllExtremeSpace;
    use crate::instances::dsmallest::DSmallestSpace;
    use crate::instances::explicit::ExplicitSpace;
    use crate::stream::{domain, rng_for};
    use rand::Rng;

    fn repetitions(values: &[i64]) -> Oracle {
        Oracle::from_space(RepetitionsSpace::new(values.to_vec()).unwrap())
    }

    #[test]
    fn two_ones_and_a_two_layer_as_expected() {
        let oracle = repetitions(&[1, 1, 2]);
        let canon = canonicalize_dim1(&oracle).unwrap();
        assert_eq!(
            canon.layers,
            vec![ConstraintSet::from_indices([0, 1]), ConstraintSet::from_indices([2])]
        );
        assert_eq!(canon.label, vec![1, 1, 2]);
        assert!(verify_reconstruction(&oracle, &canon).unwrap().ok);
    }

    #[test]
    fn distinct_values_give_singleton_layers() {
        let oracle = Oracle::from_space(DSmallestSpace::new(5, 1).unwrap());
        let canon = canonicalize_dim1(&oracle).unwrap();
        assert_eq!(canon.layers.len(), 5);
        for (i, layer) in canon.layers.iter().enumerate() {
            assert_eq!(*layer, ConstraintSet::singleton(i as u32));
        }
        assert_eq!(canon.label, vec![1, 2, 3, 4, 5]);
        let report = verify_reconstruction(&oracle, &canon).unwrap();
        assert!(report.ok);
        assert_eq!(report.empty_set, Some(EmptySetReading::AllViolate));
    }

    #[test]
    fn pairing_space_is_rejected_not_mislabeled() {
        // consistent but not local: dimension comes out 1, yet the layer
        // peel immediately contradicts itself — never a silent answer
        let oracle = Oracle::from_space(AllExtremeSpace::new(3).unwrap());
        let err = canonicalize_dim1(&oracle).unwrap_err();
        match err {
            SpaceError::StructureViolation { actual, expected, .. } => {
                assert_eq!(expected, ConstraintSet::EMPTY);
                assert_eq!(actual.len(), 1);
            }
            other => panic!("expected a structure violation, got {other:?}"),
        }
    }

    #[test]
    fn dimension_two_spaces_are_turned_away() {
        let oracle = Oracle::from_space(DSmallestSpace::new(6, 2).unwrap());
        for err in [
            canonicalize_dim1(&oracle).unwrap_err(),
            check_pairwise_structure(&oracle).unwrap_err(),
        ] {
            assert!(matches!(err, SpaceError::NotDimensionOne { dimension: 2 }), "{err:?}");
        }
    }

    #[test]
    fn pairwise_conditions_hold_on_multiset_instances() {
        for values in [&[1i64, 1, 2][..], &[3, 1, 2, 1, 3], &[5, 5, 5]] {
            let report = check_pairwise_structure(&repetitions(values)).unwrap();
            assert!(report.ok(), "{values:?}: {report:?}");
        }
    }

    #[test]
    fn shuffled_multisets_round_trip_exactly() {
        for t in 0..20u64 {
            let mut rng = rng_for(600, domain::GEN, &[t]);
            let n = rng.gen_range(2..=9usize);
            let values: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4i64)).collect();
            let oracle = repetitions(&values);
            let canon = canonicalize_dim1(&oracle).unwrap();
            let report = verify_reconstruction(&oracle, &canon).unwrap();
            assert!(report.ok, "values {values:?}");
            assert_eq!(report.empty_set, Some(EmptySetReading::AllViolate));
            // the rebuilt multiset is the same space on every subset
            let rebuilt =
                Oracle::from_space(canon.to_repetitions(EmptySetConvention::Full).unwrap());
            for mask in 0..(1u64 << n) {
                let set = ConstraintSet(mask);
                assert_eq!(
                    oracle.violators(set).unwrap(),
                    rebuilt.violators(set).unwrap(),
                    "values {values:?}, set {set}"
                );
            }
        }
    }

    #[test]
    fn singleton_empty_set_reading_is_recorded() {
        // index 2 carries the maximum value, so V(∅) = V({2}) keeps the
        // space local
        let space =
            RepetitionsSpace::with_convention(vec![1, 1, 2], EmptySetConvention::SingletonOf(2))
                .unwrap();
        let oracle = Oracle::from_space(space);
        let canon = canonicalize_dim1(&oracle).unwrap();
        let report = verify_reconstruction(&oracle, &canon).unwrap();
        assert!(report.ok);
        assert_eq!(report.empty_set, Some(EmptySetReading::SameAsSingleton(2)));
    }

    #[test]
    fn reconstruction_flags_a_tampered_table() {
        let oracle = repetitions(&[1, 2, 3]);
        let canon = canonicalize_dim1(&oracle).unwrap();
        let mut dense = oracle.dense_table().unwrap();
        // claim 1 violates {0,2} even though its value 2 is above the min 1
        dense[0b101] = 0b010;
        let tampered = Oracle::from_space(ExplicitSpace::from_dense(3, &dense));
        let report = verify_reconstruction(&tampered, &canon).unwrap();
        assert!(!report.ok);
        assert_eq!(report.witness, Some(ConstraintSet::from_indices([0, 2])));
    }

    #[test]
    fn tiny_sweeps_match_hand_counts() {
        // n = 1: V(∅) ∈ {∅, {0}}, rest forced
        assert_eq!(for_each_violator_space(1, |_| Ok(())).unwrap(), 2);
        // n = 2, by cases on V(∅): 1 + 2 + 2 + 4
        assert_eq!(for_each_violator_space(2, |_| Ok(())).unwrap(), 9);
    }

    #[test]
    fn sweep_agrees_with_brute_force_filter_on_three_elements() {
        // independently: try all 4096 consistent assignments and keep the
        // ones where every cover pair satisfies locality
        let n = 3usize;
        let masks_per_set: Vec<Vec<u64>> =
            (0u64..8).map(|g| (0u64..8).filter(|v| v & g == 0).collect()).collect();
        let mut brute = 0u64;
        let mut choice = [0usize; 8];
        'next: loop {
            let table: Vec<u64> = (0..8).map(|g| masks_per_set[g][choice[g]]).collect();
            let mut local = true;
            'check: for g in 1u64..8 {
                for x in 0..n as u64 {
                    if g & (1 << x) != 0 {
                        let f = g & !(1 << x);
                        if table[f as usize] & (1 << x) == 0
                            && table[g as usize] != table[f as usize]
                        {
                            local = false;
                            break 'check;
                        }
                    }
                }
            }
            if local {
                brute += 1;
            }
            for g in 0..8 {
                choice[g] += 1;
                if choice[g] < masks_per_set[g].len() {
                    continue 'next;
                }
                choice[g] = 0;
            }
            break;
        }
        let swept = for_each_violator_space(3, |_| Ok(())).unwrap();
        assert_eq!(swept, brute);
    }

    #[test]
    fn swept_tables_are_genuine_violator_spaces() {
        for_each_violator_space(3, |table| {
            let oracle = Oracle::from_space(ExplicitSpace::from_dense(3, table));
            let consistency = crate::structure::check_consistency(
                &oracle,
                crate::structure::CheckMode::Exhaustive,
            )?;
            assert!(consistency.ok);
            let locality =
                crate::structure::check_locality(&oracle, crate::structure::CheckMode::Exhaustive)?;
            assert!(locality.ok, "table {table:?}");
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn table_dimension_matches_oracle_dimension() {
        for_each_violator_space(3, |table| {
            let oracle = Oracle::from_space(ExplicitSpace::from_dense(3, table));
            assert_eq!(table_dimension(table, 3), combinatorial_dimension(&oracle)?);
            Ok(())
        })
        .unwrap();
    }

    #[test]
    fn every_dimension_one_space_on_three_elements_canonicalizes() {
        let mut dim1_count = 0u64;
        for_each_violator_space(3, |table| {
            if table_dimension(table, 3) != 1 {
                return Ok(());
            }
            dim1_count += 1;
            let oracle = Oracle::from_space(ExplicitSpace::from_dense(3, table));
            let canon = canonicalize_dim1(&oracle)?;
            let report = verify_reconstruction(&oracle, &canon)?;
            assert!(report.ok, "table {table:?}");
            Ok(())
        })
        .unwrap();
        assert!(dim1_count > 0);
    }

    #[test]
    fn oversized_sweep_is_refused() {
        let err = for_each_violator_space(5, |_| Ok(())).unwrap_err();
        assert!(matches!(err, SpaceError::ModeUnsupported { .. }));
    }
}
