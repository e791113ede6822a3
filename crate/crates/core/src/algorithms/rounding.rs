//! Deterministic rounding of a distribution over permutations: repeatedly
//! pick the r-subset of the remaining elements with the smallest expected
//! access cost and append it as the next block.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::perm::{ElementId, Permutation, RequestSet};

use super::mwu::{expected_access, DistributionOverPermutations};

/// One block chosen by the rounding pass, with its expected access cost at
/// selection time.
#[derive(Clone, Debug)]
pub struct RoundingBlock {
    pub elements: Vec<ElementId>,
    pub expected: f64,
}

/// Rounds `d` to a single permutation in blocks of size `r` (the final
/// block may be smaller when r does not divide n). Argmin ties go to the
/// lexicographically smallest sorted element tuple; within a block elements
/// are placed in increasing id order.
pub fn greedy_rounding(d: &DistributionOverPermutations, r: usize) -> Result<Permutation> {
    Ok(greedy_rounding_blocks(d, r)?.0)
}

pub fn greedy_rounding_blocks(
    d: &DistributionOverPermutations,
    r: usize,
) -> Result<(Permutation, Vec<RoundingBlock>)> {
    let n = d.n();
    if r < 1 {
        return Err(Error::InvalidInput("block size must be at least 1".into()));
    }
    let mut remaining: Vec<ElementId> = (1..=n as ElementId).collect();
    let mut order: Vec<ElementId> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    while !remaining.is_empty() {
        let size = r.min(remaining.len());
        let mut best: Option<(Vec<ElementId>, f64)> = None;
        // combinations() of a sorted slice is lexicographic, so the first
        // strict minimum realizes the tie-break.
        for combo in remaining.iter().copied().combinations(size) {
            let s = RequestSet::new(combo.clone(), n)?;
            let e = expected_access(d, &s)?;
            if best.as_ref().map_or(true, |(_, b)| e < *b) {
                best = Some((combo, e));
            }
        }
        let (chosen, expected) = best.expect("nonempty remaining set");
        remaining.retain(|e| !chosen.contains(e));
        order.extend(&chosen); // combinations are already ascending
        blocks.push(RoundingBlock { elements: chosen, expected });
    }
    Ok((Permutation::from_order(order)?, blocks))
}
