//! Permutations over a universe `{1..n}` and the two cost primitives of the
//! problem: access cost (position of the first requested element) and moving
//! cost (Kendall tau distance between consecutive permutations).
//!
//! Positions are 1-based throughout: the front element has position 1 and
//! costs 1 to access.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elements are the integers `1..=n`.
pub type ElementId = u32;

/// A bijection position -> element together with its inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    /// `order[p-1]` is the element at position `p`.
    order: Vec<ElementId>,
    /// `positions[e-1]` is the (1-based) position of element `e`.
    positions: Vec<u32>,
}

impl Permutation {
    /// The identity permutation `[1, 2, .., n]`.
    pub fn identity(n: usize) -> Self {
        let order: Vec<ElementId> = (1..=n as ElementId).collect();
        let positions: Vec<u32> = (1..=n as u32).collect();
        Permutation { order, positions }
    }

    /// Builds a permutation from a position -> element listing.
    pub fn from_order(order: Vec<ElementId>) -> Result<Self> {
        let n = order.len();
        if n == 0 {
            return Err(Error::InvalidInput("permutation must be nonempty".into()));
        }
        let mut positions = vec![0u32; n];
        for (i, &e) in order.iter().enumerate() {
            if e == 0 || e as usize > n {
                return Err(Error::InvalidInput(format!(
                    "element {e} out of range for universe of size {n}"
                )));
            }
            if positions[e as usize - 1] != 0 {
                return Err(Error::InvalidInput(format!("element {e} repeated")));
            }
            positions[e as usize - 1] = (i + 1) as u32;
        }
        Ok(Permutation { order, positions })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Element at 1-based position `pos`.
    pub fn element_at(&self, pos: usize) -> ElementId {
        self.order[pos - 1]
    }

    /// 1-based position of element `e`.
    pub fn position_of(&self, e: ElementId) -> usize {
        self.positions[e as usize - 1] as usize
    }

    pub fn order(&self) -> &[ElementId] {
        &self.order
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e >= 1 && (e as usize) <= self.n()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.order)
    }
}

/// An r-subset of the universe, the unit of demand.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RequestSet {
    /// Strictly increasing element ids.
    elements: Vec<ElementId>,
}

impl RequestSet {
    /// Builds a request set, sorting and validating the given elements
    /// against a universe of size `n`.
    pub fn new(mut elements: Vec<ElementId>, n: usize) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidInput("request set must be nonempty".into()));
        }
        elements.sort_unstable();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidInput(format!(
                    "duplicate element {} in request set",
                    w[0]
                )));
            }
        }
        if elements[0] == 0 || *elements.last().unwrap() as usize > n {
            return Err(Error::InvalidInput(format!(
                "request set {elements:?} not contained in universe of size {n}"
            )));
        }
        Ok(RequestSet { elements })
    }

    pub fn r(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ElementId] {
        &self.elements
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.elements.binary_search(&e).is_ok()
    }
}

impl fmt::Debug for RequestSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{:?}}}", self.elements)
    }
}

/// Position of the first element of `s` in `p`; always in `[1, n-r+1]`.
pub fn access_cost(p: &Permutation, s: &RequestSet) -> Result<u64> {
    let mut best = usize::MAX;
    for &e in s.elements() {
        if !p.contains(e) {
            return Err(Error::InvalidInput(format!(
                "element {e} not in universe of size {}",
                p.n()
            )));
        }
        best = best.min(p.position_of(e));
    }
    Ok(best as u64)
}

/// Number of unordered element pairs whose relative order differs between
/// the two permutations.
pub fn kendall_tau(a: &Permutation, b: &Permutation) -> Result<u64> {
    let n = a.n();
    if n != b.n() {
        return Err(Error::InvalidInput(format!(
            "kendall tau over mismatched universes ({} vs {})",
            n,
            b.n()
        )));
    }
    let mut inversions = 0u64;
    for x in 1..=n as ElementId {
        for y in (x + 1)..=n as ElementId {
            let in_a = a.position_of(x) < a.position_of(y);
            let in_b = b.position_of(x) < b.position_of(y);
            if in_a != in_b {
                inversions += 1;
            }
        }
    }
    Ok(inversions)
}

/// Moves each `(element, new_position)` target to exactly its new position;
/// all other elements keep their relative order and fill the remaining
/// positions front to back (stable fill). Each target may only move towards
/// the front.
pub fn move_elements(p: &Permutation, targets: &[(ElementId, usize)]) -> Result<Permutation> {
    let n = p.n();
    let mut slot: Vec<Option<ElementId>> = vec![None; n];
    let mut moved = vec![false; n];
    for &(e, pos) in targets {
        if !p.contains(e) {
            return Err(Error::InvalidInput(format!("unknown element {e}")));
        }
        if pos < 1 || pos > p.position_of(e) {
            return Err(Error::InvalidInput(format!(
                "element {e} cannot move from position {} to {pos}",
                p.position_of(e)
            )));
        }
        if moved[e as usize - 1] {
            return Err(Error::InvalidInput(format!("element {e} targeted twice")));
        }
        if slot[pos - 1].is_some() {
            return Err(Error::InvalidInput(format!("colliding target position {pos}")));
        }
        slot[pos - 1] = Some(e);
        moved[e as usize - 1] = true;
    }
    let mut rest = p
        .order()
        .iter()
        .copied()
        .filter(|&e| !moved[e as usize - 1]);
    let order: Vec<ElementId> = slot
        .into_iter()
        .map(|s| s.unwrap_or_else(|| rest.next().expect("stable fill exhausted")))
        .collect();
    Permutation::from_order(order)
}

/// Move-to-front of a single element.
pub fn move_to_front(p: &Permutation, e: ElementId) -> Result<Permutation> {
    move_elements(p, &[(e, 1)])
}
