//! A laboratory for random sampling with removal over violator and
//! consistent spaces.
//!
//! The crate models a ground set of constraints together with a violator
//! oracle `V : 2^H -> 2^H`, and provides:
//!
//! * structural verifiers (consistency, locality, bases, combinatorial
//!   dimension, extreme constraints, nondegeneracy),
//! * concrete instance families (d-smallest, smallest-with-repetitions,
//!   smallest enclosing ball, a planted random consistent space, an
//!   all-extreme consistent space, table-backed spaces, LP-type adapters),
//! * exact rational and Monte Carlo estimators for the sampling
//!   expectations `v_r`, `x_r` and their removal variants `v_{r,k}`,
//!   `x_{r,k}`, plus the identities that tie them together,
//! * removal rules (random, smallest, adversarial, objective-minimizing,
//!   basis-avoiding) and the upper/lower bound envelopes they are checked
//!   against,
//! * a canonicalization of dimension-1 violator spaces into layered
//!   "smallest number with repetitions" form.
//!
//! The `vlab` binary exposes the same machinery as a command line tool.

pub mod bitset;
pub mod dim1;
pub mod error;
pub mod fileio;
pub mod instances;
pub mod removal;
pub mod sampling;
pub mod space;
pub mod stream;
pub mod structure;

pub use bitset::ConstraintSet;
pub use error::SpaceError;
pub use space::{GroundSet, Oracle, Space};
