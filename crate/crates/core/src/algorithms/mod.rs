//! Online algorithms behind one serve-step interface.
//!
//! Every algorithm owns its current permutation; a serve step charges the
//! access cost of the current permutation on the request, then applies the
//! algorithm's move rule and charges the Kendall tau distance to the new
//! permutation.

mod lazy;
mod mae;
mod mtf;
mod mwu;
mod rounding;

pub use lazy::{LazyRounding, LazyStepStats};
pub use mae::Mae;
pub use mtf::{MtfAll, MtfCount, MtfFirst, MtfLast, MtfRandom, MtfRelative};
pub use mwu::{expected_access, tv_distance, DistributionOverPermutations, MwuState};
pub use rounding::{greedy_rounding, greedy_rounding_blocks, RoundingBlock};

use crate::error::Result;
use crate::perm::{Permutation, RequestSet};

/// Costs charged by one serve step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepOutcome {
    pub access: u64,
    pub moving: u64,
}

pub trait OnlineAlgorithm {
    fn name(&self) -> &'static str;

    /// The permutation the next request will be served with.
    fn current(&self) -> &Permutation;

    fn serve(&mut self, s: &RequestSet) -> Result<StepOutcome>;
}
