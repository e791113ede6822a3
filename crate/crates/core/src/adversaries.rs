//! Lower-bound request generators. Each adversary is adaptive: it emits the
//! next request as a function of the online algorithm's current permutation.
//! A seeded uniform trace generator rounds out the input sources.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ledger::CostLedger;
use crate::oracles::mtf_opt_replay;
use crate::perm::{kendall_tau, ElementId, Permutation, RequestSet};
use crate::trace::Trace;

/// An adaptive request source: sees the online permutation, emits a request.
pub trait Adversary {
    fn name(&self) -> &'static str;
    fn next_request(&mut self, current: &Permutation) -> Result<RequestSet>;
}

/// Requests the r elements at the tail of the current permutation, forcing
/// access cost exactly n-r+1 on every step.
pub struct LastR {
    r: usize,
}

impl LastR {
    pub fn new(r: usize) -> Self {
        LastR { r }
    }
}

impl Adversary for LastR {
    fn name(&self) -> &'static str {
        "last_r"
    }

    fn next_request(&mut self, current: &Permutation) -> Result<RequestSet> {
        let n = current.n();
        if self.r > n {
            return Err(Error::InvalidInput(format!(
                "r={} exceeds universe of size {n}",
                self.r
            )));
        }
        let elems: Vec<ElementId> = (n - self.r + 1..=n).map(|p| current.element_at(p)).collect();
        RequestSet::new(elems, n)
    }
}

/// Pads a two-element construction up to r elements using the rearmost
/// elements not yet requested (falling back to rearmost unused).
fn pad_from_tail(
    mut elems: Vec<ElementId>,
    current: &Permutation,
    r: usize,
    requested: &HashSet<ElementId>,
) -> Result<RequestSet> {
    let n = current.n();
    let mut pos = n;
    while elems.len() < r && pos >= 1 {
        let e = current.element_at(pos);
        if !elems.contains(&e) && !requested.contains(&e) {
            elems.push(e);
        }
        pos -= 1;
    }
    let mut pos = n;
    while elems.len() < r && pos >= 1 {
        let e = current.element_at(pos);
        if !elems.contains(&e) {
            elems.push(e);
        }
        pos -= 1;
    }
    RequestSet::new(elems, n)
}

/// Pairs one fixed element with the current last element.
pub struct FixedPlusLast {
    fixed: ElementId,
    r: usize,
    requested: HashSet<ElementId>,
}

impl FixedPlusLast {
    pub fn new(fixed: ElementId, r: usize) -> Result<Self> {
        if r < 2 || fixed == 0 {
            return Err(Error::InvalidInput(
                "fixed_plus_last needs r >= 2 and a valid fixed element".into(),
            ));
        }
        Ok(FixedPlusLast {
            fixed,
            r,
            requested: HashSet::new(),
        })
    }
}

impl Adversary for FixedPlusLast {
    fn name(&self) -> &'static str {
        "fixed_plus_last"
    }

    fn next_request(&mut self, current: &Permutation) -> Result<RequestSet> {
        let n = current.n();
        if !current.contains(self.fixed) || self.r > n {
            return Err(Error::InvalidInput(format!(
                "fixed_plus_last misconfigured for universe of size {n}"
            )));
        }
        let mut last_pos = n;
        while current.element_at(last_pos) == self.fixed {
            last_pos -= 1;
        }
        let elems = vec![self.fixed, current.element_at(last_pos)];
        let s = pad_from_tail(elems, current, self.r, &self.requested)?;
        self.requested.extend(s.elements());
        Ok(s)
    }
}

/// Pairs the element at position floor(n/c)-1 with the current last element.
pub struct RelativeBad {
    c: usize,
    r: usize,
    requested: HashSet<ElementId>,
}

impl RelativeBad {
    pub fn new(c: usize, r: usize) -> Result<Self> {
        if c < 1 || r < 2 {
            return Err(Error::InvalidInput(
                "relative_bad needs c >= 1 and r >= 2".into(),
            ));
        }
        Ok(RelativeBad {
            c,
            r,
            requested: HashSet::new(),
        })
    }
}

impl Adversary for RelativeBad {
    fn name(&self) -> &'static str {
        "relative_bad"
    }

    fn next_request(&mut self, current: &Permutation) -> Result<RequestSet> {
        let n = current.n();
        let probe = n / self.c;
        if probe < 2 || self.r > n {
            return Err(Error::InvalidInput(format!(
                "relative_bad needs floor(n/c) >= 2, got n={n}, c={}",
                self.c
            )));
        }
        let elems = vec![current.element_at(probe - 1), current.element_at(n)];
        let s = pad_from_tail(elems, current, self.r, &self.requested)?;
        self.requested.extend(s.elements());
        Ok(s)
    }
}

/// Frequency trap: phases of n requests where the first n-b pair a hot
/// element with low-position partners and the last b pair each of the b
/// never-moved tail elements with whatever sits at position n-b.
pub struct CountBad {
    b: usize,
    labels: Option<Vec<ElementId>>,
    t: usize,
}

impl CountBad {
    /// `n` must be a perfect square; b = sqrt(n).
    pub fn new(n: usize) -> Result<Self> {
        let b = (n as f64).sqrt().round() as usize;
        if b * b != n || b < 2 {
            return Err(Error::InvalidInput(format!(
                "count_bad needs a square universe with sqrt(n) >= 2, got n={n}"
            )));
        }
        Ok(CountBad {
            b,
            labels: None,
            t: 0,
        })
    }

    pub fn b(&self) -> usize {
        self.b
    }
}

impl Adversary for CountBad {
    fn name(&self) -> &'static str {
        "count_bad"
    }

    fn next_request(&mut self, current: &Permutation) -> Result<RequestSet> {
        let n = current.n();
        let b = self.b;
        if n != b * b {
            return Err(Error::InvalidInput(format!(
                "count_bad built for n={}, observed n={n}",
                b * b
            )));
        }
        // element labels are fixed by the first observed permutation
        let labels = self
            .labels
            .get_or_insert_with(|| current.order().to_vec())
            .clone();
        let p = self.t % n;
        self.t += 1;
        let elems = if p < n - b {
            // x_1 paired with x_2..x_{n-b}, cycling
            vec![labels[0], labels[1 + p % (n - b - 1)]]
        } else {
            let i = p - (n - b);
            vec![current.element_at(n - b), labels[n - b + i]]
        };
        RequestSet::new(elems, n)
    }
}

/// The dynamic lower-bound machine: rounds of k+1 requests addressed by
/// position into the online permutation, each round sharing a pivot drawn
/// from the tail. Universe size is forced to n = k^2 + 2k + r - 1.
pub struct MaeDynamicLb {
    k: usize,
    r: usize,
    /// requests emitted so far
    t: usize,
    /// pivot element of each completed-or-current round
    pivots: Vec<ElementId>,
    /// the 2k elements the scheduled offline solution keeps in front,
    /// captured from the first observed permutation
    important: Option<Vec<ElementId>>,
}

impl MaeDynamicLb {
    pub fn new(k: usize, r: usize) -> Result<Self> {
        if r < 3 || k < 2 {
            return Err(Error::InvalidInput(format!(
                "dynamic lower bound needs r >= 3 and k >= 2, got r={r}, k={k}"
            )));
        }
        Ok(MaeDynamicLb {
            k,
            r,
            t: 0,
            pivots: Vec::new(),
            important: None,
        })
    }

    pub fn universe_size(k: usize, r: usize) -> usize {
        k * k + 2 * k + r - 1
    }

    pub fn n(&self) -> usize {
        Self::universe_size(self.k, self.r)
    }

    pub fn round_len(&self) -> usize {
        self.k + 1
    }

    /// Pivot element of each round started so far, in order.
    pub fn pivots(&self) -> &[ElementId] {
        &self.pivots
    }

    pub fn important(&self) -> Option<&[ElementId]> {
        self.important.as_deref()
    }

    /// Position list of the i-th request (1-based) of round j (1-based,
    /// wrapping every k rounds).
    fn positions(&self, j: usize, i: usize) -> Vec<usize> {
        let (k, r) = (self.k, self.r);
        let n = self.n();
        let mut pos: Vec<usize>;
        if i == k + 1 {
            pos = (k..=k + r - 2).collect();
            pos.push(2 * k + r - 1);
        } else if (j == 1 && i == k) || (j >= 2 && i == k - j + 2) {
            pos = (k + 1..=k + r - 1).collect();
            // round 1's special request targets the pivot one round deep
            let jj = if j == 1 { 2 } else { j };
            pos.push((jj + 1) * k + r - 1);
        } else {
            pos = (k + 1..=k + r - 2).collect();
            pos.push((j + 1) * k + r - 1 + i);
            pos.push(n - (i - 1) * k);
        }
        pos
    }
}

impl Adversary for MaeDynamicLb {
    fn name(&self) -> &'static str {
        "mae_dynamic_lb"
    }

    fn next_request(&mut self, current: &Permutation) -> Result<RequestSet> {
        let n = self.n();
        if current.n() != n {
            return Err(Error::InvalidInput(format!(
                "dynamic lower bound for k={}, r={} needs n={n}, observed {}",
                self.k,
                self.r,
                current.n()
            )));
        }
        let (k, r) = (self.k, self.r);
        if self.important.is_none() {
            // the elements initially in the second and last block
            let mut imp: Vec<ElementId> =
                (k + r..=2 * k + r - 1).map(|p| current.element_at(p)).collect();
            imp.extend((k * k + k + r..=n).map(|p| current.element_at(p)));
            self.important = Some(imp);
        }
        let round_len = self.round_len();
        let j = (self.t / round_len) % k + 1;
        let i = self.t % round_len + 1;
        self.t += 1;
        if i == 1 {
            self.pivots.push(current.element_at(n));
        }
        let elems: Vec<ElementId> = self
            .positions(j, i)
            .into_iter()
            .map(|p| current.element_at(p))
            .collect();
        RequestSet::new(elems, n)
    }
}

/// The offline solution scheduled against [`MaeDynamicLb`]: a one-time
/// setup that fronts the 2k important elements, then one pivot-to-front
/// move per round.
#[derive(Clone, Debug)]
pub struct ScheduledOptResult {
    pub setup_cost: u64,
    pub ledger: CostLedger,
}

impl ScheduledOptResult {
    pub fn total_cost(&self) -> u64 {
        self.setup_cost + self.ledger.total_cost()
    }
}

/// Replays the scheduled solution for a realized [`MaeDynamicLb`] run:
/// `pivots` holds one element per round (as recorded by the adversary) and
/// covers every request of its round.
pub fn scheduled_opt(
    trace: &Trace,
    pivots: &[ElementId],
    important: &[ElementId],
    round_len: usize,
    initial: &Permutation,
) -> Result<ScheduledOptResult> {
    if round_len == 0 || trace.len() > pivots.len() * round_len {
        return Err(Error::InvalidInput(
            "pivot list does not cover the trace".into(),
        ));
    }
    let mut order: Vec<ElementId> = important.to_vec();
    for e in initial.order() {
        if !important.contains(e) {
            order.push(*e);
        }
    }
    let setup = Permutation::from_order(order)?;
    let setup_cost = kendall_tau(initial, &setup)?;
    let schedule: Vec<ElementId> = (0..trace.len()).map(|t| pivots[t / round_len]).collect();
    let ledger = mtf_opt_replay(trace, &schedule, &setup)?;
    Ok(ScheduledOptResult { setup_cost, ledger })
}

/// m uniformly random r-subsets of {1..n}, reproducible by seed.
pub fn random_trace(n: usize, r: usize, m: usize, seed: u64) -> Result<Trace> {
    let mut trace = Trace::new(n, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe: Vec<ElementId> = (1..=n as ElementId).collect();
    for _ in 0..m {
        let elems: Vec<ElementId> = universe.choose_multiple(&mut rng, r).copied().collect();
        trace.push(RequestSet::new(elems, n)?)?;
    }
    Ok(trace)
}
