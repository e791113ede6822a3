//! Dense indexing of the n! permutation space via Lehmer codes.
//!
//! Index 0 is the identity permutation and indices follow lexicographic
//! order of the position -> element listing. The cap keeps exact n!-state
//! computations at desk scale (default 8, hard maximum 9).

use crate::error::{Error, Result};
use crate::perm::{ElementId, Permutation};

/// Default cap on `n` for n!-sized structures (40320 permutations).
pub const DEFAULT_CAP: usize = 8;
/// Hard maximum the cap may be raised to.
pub const MAX_CAP: usize = 9;

/// `n!` for `n <= 12` (fits comfortably in u64 far beyond the cap).
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// A permutation's rank in the Lehmer-code ordering of its universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PermutationIndex {
    pub index: u64,
    pub n: usize,
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(MAX_CAP);
    if n > cap {
        return Err(Error::Capacity { n, cap });
    }
    Ok(())
}

/// Lehmer rank of `p`, under the default cap.
pub fn encode(p: &Permutation) -> Result<PermutationIndex> {
    encode_capped(p, DEFAULT_CAP)
}

pub fn encode_capped(p: &Permutation, cap: usize) -> Result<PermutationIndex> {
    let n = p.n();
    check_cap(n, cap)?;
    let order = p.order();
    let mut index = 0u64;
    for i in 0..n {
        let smaller_after = order[i + 1..].iter().filter(|&&e| e < order[i]).count() as u64;
        index += smaller_after * factorial(n - 1 - i);
    }
    Ok(PermutationIndex { index, n })
}

/// Inverse of [`encode`].
pub fn decode(i: PermutationIndex) -> Result<Permutation> {
    decode_capped(i, DEFAULT_CAP)
}

pub fn decode_capped(i: PermutationIndex, cap: usize) -> Result<Permutation> {
    let n = i.n;
    check_cap(n, cap)?;
    if i.index >= factorial(n) {
        return Err(Error::InvalidInput(format!(
            "index {} out of range for n={}",
            i.index, n
        )));
    }
    let mut remaining: Vec<ElementId> = (1..=n as ElementId).collect();
    let mut order = Vec::with_capacity(n);
    let mut rest = i.index;
    for pos in 0..n {
        let f = factorial(n - 1 - pos);
        let digit = (rest / f) as usize;
        rest %= f;
        order.push(remaining.remove(digit));
    }
    Permutation::from_order(order)
}

/// All n! permutations of `{1..n}` in index order, built once and shared.
pub struct PermTable {
    n: usize,
    perms: Vec<Permutation>,
}

impl PermTable {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_cap(n, DEFAULT_CAP)
    }

    pub fn with_cap(n: usize, cap: usize) -> Result<Self> {
        check_cap(n, cap)?;
        let count = factorial(n);
        let mut perms = Vec::with_capacity(count as usize);
        for index in 0..count {
            perms.push(decode_capped(PermutationIndex { index, n }, cap)?);
        }
        Ok(PermTable { n, perms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn perm(&self, index: usize) -> &Permutation {
        &self.perms[index]
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_index_zero() {
        for n in 1..=8 {
            let id = Permutation::identity(n);
            assert_eq!(encode(&id).unwrap().index, 0);
        }
    }

    #[test]
    fn acb_has_index_one() {
        // Second permutation of n=3 in Lehmer order, checked against the
        // enumeration of all 6 codes.
        let p = Permutation::from_order(vec![1, 3, 2]).unwrap();
        assert_eq!(encode(&p).unwrap().index, 1);
        let all: Vec<Vec<ElementId>> = PermTable::new(3)
            .unwrap()
            .perms()
            .iter()
            .map(|p| p.order().to_vec())
            .collect();
        assert_eq!(
            all,
            vec![
                vec![1, 2, 3],
                vec![1, 3, 2],
                vec![2, 1, 3],
                vec![2, 3, 1],
                vec![3, 1, 2],
                vec![3, 2, 1],
            ]
        );
    }

    #[test]
    fn round_trip_all_n_up_to_8() {
        for n in 1..=8usize {
            let table = PermTable::new(n).unwrap();
            assert_eq!(table.len() as u64, factorial(n));
            for (index, p) in table.perms().iter().enumerate() {
                let i = encode(p).unwrap();
                assert_eq!(i.index, index as u64);
                assert_eq!(&decode(i).unwrap(), p);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let p = Permutation::identity(9);
        assert!(matches!(encode(&p), Err(Error::Capacity { .. })));
        assert!(encode_capped(&p, 9).is_ok());
        assert!(matches!(
            PermTable::with_cap(10, 99),
            Err(Error::Capacity { cap: 9, .. })
        ));
    }
}
