//! Move-All-Equally: every requested element moves towards the front by the
//! same amount, until the first hit reaches position 1.

use crate::error::Result;
use crate::perm::{access_cost, kendall_tau, move_elements, ElementId, Permutation, RequestSet};

use super::{OnlineAlgorithm, StepOutcome};

pub struct Mae {
    current: Permutation,
}

impl Mae {
    pub fn new(initial: Permutation) -> Self {
        Mae { current: initial }
    }
}

impl OnlineAlgorithm for Mae {
    fn name(&self) -> &'static str {
        "mae"
    }

    fn current(&self) -> &Permutation {
        &self.current
    }

    fn serve(&mut self, s: &RequestSet) -> Result<StepOutcome> {
        let access = access_cost(&self.current, s)?;
        let shift = access as usize - 1;
        if shift == 0 {
            return Ok(StepOutcome { access, moving: 0 });
        }
        let targets: Vec<(ElementId, usize)> = s
            .elements()
            .iter()
            .map(|&e| (e, self.current.position_of(e) - shift))
            .collect();
        let next = move_elements(&self.current, &targets)?;
        let moving = kendall_tau(&self.current, &next)?;
        self.current = next;
        Ok(StepOutcome { access, moving })
    }
}
