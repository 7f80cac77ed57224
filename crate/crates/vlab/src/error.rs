//! Error type shared by oracle evaluation and the structural operations.

use thiserror::Error;

use crate::bitset::ConstraintSet;

#[derive(Debug, Clone, Error)]
pub enum SpaceError {
    /// The oracle returned a violator set that intersects its argument.
    #[error("consistency violation: V({set}) returned violators overlapping the set at {overlap}")]
    ConsistencyViolation { set: ConstraintSet, overlap: ConstraintSet },

    /// An exhaustive operation was asked for outside its supported regime.
    #[error("{op} supports n <= {max} ({detail}); got n = {n}")]
    ModeUnsupported { op: &'static str, n: usize, max: usize, detail: &'static str },

    /// An enumeration would exceed the configured work budget.
    #[error("budget exceeded in {op}: would need {needed} {unit}, budget is {budget}")]
    BudgetExceeded { op: &'static str, needed: u128, budget: u64, unit: &'static str },

    /// Floating-point mode could not classify a point robustly.
    #[error("numeric instability: {0}; switch to exact mode")]
    NumericInstability(String),

    /// Instance parameters fall outside the regime the construction supports.
    #[error("parameter regime unsupported: {0}")]
    RegimeUnsupported(String),

    /// A removal rule cannot produce a k-element removal for this input.
    #[error("removal rule not applicable: {0}")]
    RuleInapplicable(String),

    /// A structural operation was refused because this oracle already
    /// recorded a consistency failure.
    #[error("oracle recorded a consistency failure; refusing {op}")]
    Poisoned { op: &'static str },

    /// Dimension-1 canonicalization was asked of a space with a different
    /// combinatorial dimension.
    #[error("not a dimension-1 space: combinatorial dimension is {dimension}")]
    NotDimensionOne { dimension: usize },

    /// Locality does not hold; `f ⊆ g` is a witness pair with
    /// `g ∩ V(f) = ∅` but `V(g) ≠ V(f)`.
    #[error("locality violation: witness F = {f}, G = {g}")]
    LocalityViolation { f: ConstraintSet, g: ConstraintSet },

    /// The layered dimension-1 structure broke down: `element`'s violator
    /// set is not the union of the earlier layers.
    #[error(
        "dimension-1 structure violation at element {element}: V = {actual}, expected {expected}"
    )]
    StructureViolation { element: u32, actual: ConstraintSet, expected: ConstraintSet },

    /// Instance construction rejected its inputs.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

impl SpaceError {
    pub fn mode(op: &'static str, n: usize, max: usize, detail: &'static str) -> Self {
        SpaceError::ModeUnsupported { op, n, max, detail }
    }
}
