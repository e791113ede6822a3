//! The move-to-front family: six generalizations of the classic list-update
//! MTF rule to r-element requests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::perm::{access_cost, kendall_tau, move_elements, move_to_front, ElementId, Permutation, RequestSet};

use super::{OnlineAlgorithm, StepOutcome};

fn finish(current: &mut Permutation, next: Permutation, access: u64) -> Result<StepOutcome> {
    let moving = kendall_tau(current, &next)?;
    *current = next;
    Ok(StepOutcome { access, moving })
}

/// Moves to the front the element of the request appearing first.
pub struct MtfFirst {
    current: Permutation,
}

impl MtfFirst {
    pub fn new(initial: Permutation) -> Self {
        MtfFirst { current: initial }
    }
}

impl OnlineAlgorithm for MtfFirst {
    fn name(&self) -> &'static str {
        "mtf_first"
    }

    fn current(&self) -> &Permutation {
        &self.current
    }

    fn serve(&mut self, s: &RequestSet) -> Result<StepOutcome> {
        let access = access_cost(&self.current, s)?;
        let e = self.current.element_at(access as usize);
        let next = move_to_front(&self.current, e)?;
        finish(&mut self.current, next, access)
    }
}

/// Moves to the front the element of the request appearing last.
pub struct MtfLast {
    current: Permutation,
}

impl MtfLast {
    pub fn new(initial: Permutation) -> Self {
        MtfLast { current: initial }
    }
}

impl OnlineAlgorithm for MtfLast {
    fn name(&self) -> &'static str {
        "mtf_last"
    }

    fn current(&self) -> &Permutation {
        &self.current
    }

    fn serve(&mut self, s: &RequestSet) -> Result<StepOutcome> {
        let access = access_cost(&self.current, s)?;
        let e = *s
            .elements()
            .iter()
            .max_by_key(|&&e| self.current.position_of(e))
            .expect("nonempty request");
        let next = move_to_front(&self.current, e)?;
        finish(&mut self.current, next, access)
    }
}

/// Moves all requested elements to the first r positions, preserving their
/// relative order.
pub struct MtfAll {
    current: Permutation,
}

impl MtfAll {
    pub fn new(initial: Permutation) -> Self {
        MtfAll { current: initial }
    }
}

impl OnlineAlgorithm for MtfAll {
    fn name(&self) -> &'static str {
        "mtf_all"
    }

    fn current(&self) -> &Permutation {
        &self.current
    }

    fn serve(&mut self, s: &RequestSet) -> Result<StepOutcome> {
        let access = access_cost(&self.current, s)?;
        let mut by_pos: Vec<ElementId> = s.elements().to_vec();
        by_pos.sort_by_key(|&e| self.current.position_of(e));
        let targets: Vec<(ElementId, usize)> =
            by_pos.iter().enumerate().map(|(i, &e)| (e, i + 1)).collect();
        let next = move_elements(&self.current, &targets)?;
        finish(&mut self.current, next, access)
    }
}

/// Moves to the front a uniformly random element of the request.
pub struct MtfRandom {
    current: Permutation,
    rng: ChaCha8Rng,
}

impl MtfRandom {
    pub fn new(initial: Permutation, seed: u64) -> Self {
        MtfRandom {
            current: initial,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl OnlineAlgorithm for MtfRandom {
    fn name(&self) -> &'static str {
        "mtf_random"
    }

    fn current(&self) -> &Permutation {
        &self.current
    }

    fn serve(&mut self, s: &RequestSet) -> Result<StepOutcome> {
        let access = access_cost(&self.current, s)?;
        let e = s.elements()[self.rng.gen_range(0..s.r())];
        let next = move_to_front(&self.current, e)?;
        finish(&mut self.current, next, access)
    }
}

/// With first hit at position i, moves to the front (preserving relative
/// order) all requested elements at positions up to c*i.
pub struct MtfRelative {
    current: Permutation,
    c: usize,
}

impl MtfRelative {
    /// Requires `c >= 1`.
    pub fn new(initial: Permutation, c: usize) -> Result<Self> {
        if c < 1 {
            return Err(crate::error::Error::InvalidInput(
                "mtf_relative requires c >= 1".into(),
            ));
        }
        Ok(MtfRelative { current: initial, c })
    }
}

impl OnlineAlgorithm for MtfRelative {
    fn name(&self) -> &'static str {
        "mtf_relative"
    }

    fn current(&self) -> &Permutation {
        &self.current
    }

    fn serve(&mut self, s: &RequestSet) -> Result<StepOutcome> {
        let access = access_cost(&self.current, s)?;
        let window = self.c * access as usize;
        let mut chosen: Vec<ElementId> = s
            .elements()
            .iter()
            .copied()
            .filter(|&e| self.current.position_of(e) <= window)
            .collect();
        chosen.sort_by_key(|&e| self.current.position_of(e));
        let targets: Vec<(ElementId, usize)> =
            chosen.iter().enumerate().map(|(i, &e)| (e, i + 1)).collect();
        let next = move_elements(&self.current, &targets)?;
        finish(&mut self.current, next, access)
    }
}

/// Moves to the front the requested element with the highest appearance
/// count over all previous requests; frequency ties go to the smaller id.
pub struct MtfCount {
    current: Permutation,
    counts: Vec<u64>,
}

impl MtfCount {
    pub fn new(initial: Permutation) -> Self {
        let n = initial.n();
        MtfCount {
            current: initial,
            counts: vec![0; n],
        }
    }

    pub fn count_of(&self, e: ElementId) -> u64 {
        self.counts[e as usize - 1]
    }
}

impl OnlineAlgorithm for MtfCount {
    fn name(&self) -> &'static str {
        "mtf_count"
    }

    fn current(&self) -> &Permutation {
        &self.current
    }

    fn serve(&mut self, s: &RequestSet) -> Result<StepOutcome> {
        let access = access_cost(&self.current, s)?;
        // elements() is ascending, so strict > keeps the smallest id on ties
        let mut chosen = s.elements()[0];
        for &e in &s.elements()[1..] {
            if self.counts[e as usize - 1] > self.counts[chosen as usize - 1] {
                chosen = e;
            }
        }
        for &e in s.elements() {
            self.counts[e as usize - 1] += 1;
        }
        let next = move_to_front(&self.current, chosen)?;
        finish(&mut self.current, next, access)
    }
}
