//! Per-step and cumulative access/moving cost accounting for one run.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: usize,
    pub access: u64,
    pub moving: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostLedger {
    pub steps: Vec<StepRecord>,
    pub total_access: u64,
    pub total_moving: u64,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, access: u64, moving: u64) -> Result<()> {
        if access < 1 {
            return Err(Error::InvalidInput("access cost must be at least 1".into()));
        }
        let t = self.steps.len() + 1;
        self.steps.push(StepRecord { t, access, moving });
        self.total_access += access;
        self.total_moving += moving;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn total_cost(&self) -> u64 {
        self.total_access + self.total_moving
    }
}
