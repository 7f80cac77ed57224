//! Table-backed spaces: every subset's violator set spelled out (sparsely)
//! in a JSON document.
//!
//! Format:
//!
//! ```json
//! { "n": 3,
//!   "entries": [ { "set": [0, 2], "violators": [1] } ],
//!   "default": "empty" }
//! ```
//!
//! Subsets without an entry get `V = ∅`. The loader rejects entries whose
//! violator set intersects the subset itself; `new_unchecked` skips that
//! validation so deliberately broken instances can be built for testing the
//! consistency checker.

use serde::Deserialize;
use std::collections::HashMap;

use crate::bitset::ConstraintSet;
use crate::error::SpaceError;
use crate::space::Space;

#[derive(Debug)]
pub struct ExplicitSpace {
    n: usize,
    table: HashMap<u64, u64>,
}

#[derive(Deserialize)]
struct ExplicitDoc {
    n: usize,
    entries: Vec<ExplicitEntry>,
    #[serde(default)]
    default: Option<String>,
}

#[derive(Deserialize)]
struct ExplicitEntry {
    set: Vec<u32>,
    violators: Vec<u32>,
}

impl ExplicitSpace {
    pub fn from_json(text: &str) -> Result<Self, SpaceError> {
        let doc: ExplicitDoc = serde_json::from_str(text)
            .map_err(|e| SpaceError::InvalidInstance(format!("bad explicit-space JSON: {e}")))?;
        if let Some(d) = &doc.default {
            if d != "empty" {
                return Err(SpaceError::InvalidInstance(format!(
                    "unsupported default {d:?}; only \"empty\" is defined"
                )));
            }
        }
        if doc.n > 64 {
            return Err(SpaceError::InvalidInstance(format!(
                "explicit spaces support n <= 64, got n = {}",
                doc.n
            )));
        }
        let mut table = HashMap::with_capacity(doc.entries.len());
        for entry in &doc.entries {
            let set = checked_set(&entry.set, doc.n, "set")?;
            let violators = checked_set(&entry.violators, doc.n, "violators")?;
            if set.intersects(violators) {
                return Err(SpaceError::ConsistencyViolation { set, overlap: set & violators });
            }
            if table.insert(set.0, violators.0).is_some() {
                return Err(SpaceError::InvalidInstance(format!("duplicate entry for set {set}")));
            }
        }
        Ok(ExplicitSpace { n: doc.n, table })
    }

    /// Build directly from (set, violators) pairs without the consistency
    /// validation. Duplicate keys keep the last pair.
    pub fn new_unchecked(
        n: usize,
        entries: impl IntoIterator<Item = (ConstraintSet, ConstraintSet)>,
    ) -> Self {
        assert!(n <= 64);
        let table = entries.into_iter().map(|(s, v)| (s.0, v.0)).collect();
        ExplicitSpace { n, table }
    }

    /// Build from a dense table indexed by subset mask (`table[mask] = V`).
    pub fn from_dense(n: usize, dense: &[u64]) -> Self {
        assert!(n <= 20 && dense.len() == 1 << n);
        let table = dense
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(m, &v)| (m as u64, v))
            .collect();
        ExplicitSpace { n, table }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut keys: Vec<u64> = self.table.keys().copied().collect();
        keys.sort_by_key(|&m| ConstraintSet(m));
        let entries: Vec<serde_json::Value> = keys
            .iter()
            .map(|&m| {
                serde_json::json!({
                    "set": ConstraintSet(m).to_ids(),
                    "violators": ConstraintSet(self.table[&m]).to_ids(),
                })
            })
            .collect();
        serde_json::json!({ "n": self.n, "entries": entries, "default": "empty" })
    }
}

fn checked_set(ids: &[u32], n: usize, what: &str) -> Result<ConstraintSet, SpaceError> {
    let mut mask = ConstraintSet::EMPTY;
    for &i in ids {
        if i as usize >= n {
            return Err(SpaceError::InvalidInstance(format!(
                "{what} index {i} out of range for n = {n}"
            )));
        }
        if mask.contains(i) {
            return Err(SpaceError::InvalidInstance(format!("{what} repeats index {i}")));
        }
        mask = mask.insert(i);
    }
    Ok(mask)
}

impl Space for ExplicitSpace {
    fn n(&self) -> usize {
        self.n
    }

    fn violators(&self, set: &[u32]) -> Result<Vec<u32>, SpaceError> {
        let mask = checked_set(set, self.n, "query")?;
        let v = self.table.get(&mask.0).copied().unwrap_or(0);
        Ok(ConstraintSet(v).to_ids())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Oracle;

    #[test]
    fn loads_and_defaults_to_empty() {
        let space = ExplicitSpace::from_json(
            r#"{ "n": 3,
                 "entries": [ { "set": [0, 2], "violators": [1] } ],
                 "default": "empty" }"#,
        )
        .unwrap();
        let oracle = Oracle::from_space(space);
        assert_eq!(
            oracle.violators(ConstraintSet::from_indices([0, 2])).unwrap(),
            ConstraintSet::singleton(1)
        );
        assert_eq!(oracle.violators(ConstraintSet::singleton(1)).unwrap(), ConstraintSet::EMPTY);
    }

    #[test]
    fn rejects_inconsistent_entries() {
        let err = ExplicitSpace::from_json(
            r#"{ "n": 2, "entries": [ { "set": [1], "violators": [1] } ] }"#,
        )
        .unwrap_err();
        assert!(matches!(err, SpaceError::ConsistencyViolation { .. }));
    }

    #[test]
    fn rejects_duplicates_and_bad_indices() {
        assert!(ExplicitSpace::from_json(
            r#"{ "n": 2, "entries": [ { "set": [0], "violators": [] },
                                      { "set": [0], "violators": [1] } ] }"#,
        )
        .is_err());
        assert!(ExplicitSpace::from_json(
            r#"{ "n": 2, "entries": [ { "set": [5], "violators": [] } ] }"#,
        )
        .is_err());
    }

    #[test]
    fn unchecked_allows_broken_tables() {
        let space = ExplicitSpace::new_unchecked(
            2,
            [(ConstraintSet::singleton(1), ConstraintSet::singleton(1))],
        );
        let oracle = Oracle::from_space(space);
        assert!(matches!(
            oracle.violators(ConstraintSet::singleton(1)),
            Err(SpaceError::ConsistencyViolation { .. })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{ "n": 4,
                        "entries": [ { "set": [1, 3], "violators": [0] },
                                     { "set": [], "violators": [2] } ] }"#;
        let space = ExplicitSpace::from_json(text).unwrap();
        let doc = space.to_json();
        let reloaded = ExplicitSpace::from_json(&doc.to_string()).unwrap();
        for mask in 0..16u64 {
            let ids = ConstraintSet(mask).to_ids();
            assert_eq!(space.violators(&ids).unwrap(), reloaded.violators(&ids).unwrap());
        }
    }
}
