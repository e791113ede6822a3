//! A fixed request sequence: the non-adaptive input source.

use crate::error::{Error, Result};
use crate::perm::RequestSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    n: usize,
    r: usize,
    sets: Vec<RequestSet>,
}

impl Trace {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n == 0 || r == 0 || r > n {
            return Err(Error::InvalidInput(format!(
                "trace parameters n={n}, r={r} out of range"
            )));
        }
        Ok(Trace { n, r, sets: Vec::new() })
    }

    pub fn push(&mut self, s: RequestSet) -> Result<()> {
        if s.r() != self.r {
            return Err(Error::Trace(format!(
                "request {:?} has cardinality {}, trace is {}-uniform",
                s,
                s.r(),
                self.r
            )));
        }
        if s.elements().last().copied().unwrap_or(0) as usize > self.n {
            return Err(Error::Trace(format!(
                "request {:?} exceeds universe of size {}",
                s, self.n
            )));
        }
        self.sets.push(s);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[RequestSet] {
        &self.sets
    }
}
