//! Online min-sum set cover laboratory.
//!
//! A sequence of r-element subsets of `{1..n}` arrives online; the server
//! maintains a permutation, pays the position of the first requested element
//! it contains (access cost) and the Kendall tau distance of any
//! rearrangement (moving cost). This crate provides the permutation
//! primitives, the online algorithms (move-to-front family, move-all-equally,
//! and lazy rounding over a multiplicative-weights distribution), offline
//! oracles (static and dynamic optima, greedy cover, replay bounds), the
//! adversarial request generators behind the known lower bounds, and a
//! harness that runs algorithm/source pairs while auditing the per-step
//! inequalities the analysis relies on.

pub mod adversaries;
pub mod algorithms;
pub mod error;
pub mod harness;
pub mod index;
pub mod ledger;
pub mod oracles;
pub mod perm;
pub mod trace;

pub use error::{Error, Result};
pub use index::{decode, encode, factorial, PermTable, PermutationIndex, DEFAULT_CAP, MAX_CAP};
pub use ledger::{CostLedger, StepRecord};
pub use perm::{
    access_cost, kendall_tau, move_elements, move_to_front, ElementId, Permutation, RequestSet,
};
pub use trace::Trace;
