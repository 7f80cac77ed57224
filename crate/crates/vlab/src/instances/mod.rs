//! Concrete space families.
//!
//! Each family builds a [`crate::space::Space`] implementation:
//!
//! * [`explicit`] — table-backed spaces loaded from JSON,
//! * [`dsmallest`] — the d-smallest-number violator space,
//! * [`repetitions`] — smallest number over a multiset (dimension 1),
//! * [`all_extreme`] — a consistent space where every element of the full
//!   set is extreme (locality fails, `|X|` exceeds the dimension),
//! * [`random_consistent`] — a seeded consistent space with planted
//!   violator sets for uniformly random constraints,
//! * [`seb`] — smallest enclosing ball, exact rational or float,
//! * [`lp`] — objective-induced spaces and their axiom checks.

pub mod all_extreme;
pub mod dsmallest;
pub mod explicit;
pub mod lp;
pub mod random_consistent;
pub mod repetitions;
pub mod seb;
