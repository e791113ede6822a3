//! Multiplicative weights over the n! permutation space.
//!
//! The state keeps exact integer cumulative costs per permutation; weights
//! exp(-cum/n^3) are materialized on demand with a max-shift so arbitrarily
//! long runs never underflow.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::index::PermTable;
use crate::perm::{access_cost, RequestSet};

pub struct MwuState {
    table: Arc<PermTable>,
    cum: Vec<u64>,
    t: u64,
}

impl MwuState {
    pub fn new(table: Arc<PermTable>) -> Self {
        let len = table.len();
        MwuState {
            table,
            cum: vec![0; len],
            t: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn table(&self) -> &Arc<PermTable> {
        &self.table
    }

    pub fn cumulative_costs(&self) -> &[u64] {
        &self.cum
    }

    /// Charges every permutation its access cost on `s`.
    pub fn update(&mut self, s: &RequestSet) -> Result<()> {
        for (i, p) in self.table.perms().iter().enumerate() {
            self.cum[i] += access_cost(p, s)?;
        }
        self.t += 1;
        Ok(())
    }

    /// Normalized weights exp(-cum/n^3), shifted by the minimum cumulative
    /// cost before exponentiation.
    pub fn distribution(&self) -> DistributionOverPermutations {
        let n3 = (self.n() as f64).powi(3);
        let min = self.cum.iter().copied().min().unwrap_or(0);
        let mut probs: Vec<f64> = self
            .cum
            .iter()
            .map(|&c| (-((c - min) as f64) / n3).exp())
            .collect();
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        DistributionOverPermutations {
            table: Arc::clone(&self.table),
            probs,
        }
    }
}

/// A probability distribution over the n! permutations of a shared table.
#[derive(Clone)]
pub struct DistributionOverPermutations {
    table: Arc<PermTable>,
    probs: Vec<f64>,
}

impl DistributionOverPermutations {
    pub fn uniform(table: Arc<PermTable>) -> Self {
        let len = table.len();
        DistributionOverPermutations {
            table,
            probs: vec![1.0 / len as f64; len],
        }
    }

    /// Normalizes arbitrary nonnegative weights into a distribution.
    pub fn from_weights(table: Arc<PermTable>, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != table.len() {
            return Err(Error::InvalidInput(format!(
                "{} weights for a table of {} permutations",
                weights.len(),
                table.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidInput("weights must be finite and nonnegative".into()));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::InvalidInput("weights must not all be zero".into()));
        }
        let probs = weights.into_iter().map(|w| w / total).collect();
        Ok(DistributionOverPermutations { table, probs })
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }

    pub fn table(&self) -> &Arc<PermTable> {
        &self.table
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Expected access cost of `s` under `d`.
pub fn expected_access(d: &DistributionOverPermutations, s: &RequestSet) -> Result<f64> {
    let mut total = 0.0;
    for (i, p) in d.table.perms().iter().enumerate() {
        total += d.probs[i] * access_cost(p, s)? as f64;
    }
    Ok(total)
}

/// One-sided positive-part total variation distance.
pub fn tv_distance(
    a: &DistributionOverPermutations,
    b: &DistributionOverPermutations,
) -> Result<f64> {
    if a.probs.len() != b.probs.len() {
        return Err(Error::InvalidInput(format!(
            "tv distance over mismatched supports ({} vs {})",
            a.probs.len(),
            b.probs.len()
        )));
    }
    Ok(a.probs
        .iter()
        .zip(&b.probs)
        .map(|(&x, &y)| (x - y).max(0.0))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{ElementId, RequestSet};

    fn set(elems: &[ElementId], n: usize) -> RequestSet {
        RequestSet::new(elems.to_vec(), n).unwrap()
    }

    #[test]
    fn cumulative_costs_for_two_elements() {
        let table = Arc::new(PermTable::new(2).unwrap());
        let mut mwu = MwuState::new(table);
        mwu.update(&set(&[1], 2)).unwrap();
        assert_eq!(mwu.cumulative_costs(), &[1, 2]);
        mwu.update(&set(&[1], 2)).unwrap();
        assert_eq!(mwu.cumulative_costs(), &[2, 4]);
        assert_eq!(mwu.t(), 2);
    }

    #[test]
    fn full_set_charges_everyone_one() {
        let table = Arc::new(PermTable::new(3).unwrap());
        let mut mwu = MwuState::new(table);
        mwu.update(&set(&[1, 2, 3], 3)).unwrap();
        assert!(mwu.cumulative_costs().iter().all(|&c| c == 1));
    }

    #[test]
    fn two_element_distribution_after_one_request() {
        let table = Arc::new(PermTable::new(2).unwrap());
        let mut mwu = MwuState::new(table);
        mwu.update(&set(&[1], 2)).unwrap();
        let d = mwu.distribution();
        let beta = (-1.0f64 / 8.0).exp();
        assert!((d.probs()[0] - 1.0 / (1.0 + beta)).abs() < 1e-12);
        assert!((d.probs()[1] - beta / (1.0 + beta)).abs() < 1e-12);
    }

    #[test]
    fn distributions_stay_normalized_on_long_runs() {
        let table = Arc::new(PermTable::new(4).unwrap());
        let mut mwu = MwuState::new(table);
        let s = set(&[4], 4);
        for _ in 0..20_000 {
            mwu.update(&s).unwrap();
        }
        let d = mwu.distribution();
        let sum: f64 = d.probs().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-9);
        assert!(d.probs().iter().all(|p| p.is_finite()));
    }

    #[test]
    fn uniform_expected_access_matches_closed_form() {
        // (n+1)/(r+1) for the uniform distribution
        let table = Arc::new(PermTable::new(3).unwrap());
        let d = DistributionOverPermutations::uniform(table);
        assert!((expected_access(&d, &set(&[1], 3)).unwrap() - 2.0).abs() < 1e-12);

        let table4 = Arc::new(PermTable::new(4).unwrap());
        let d4 = DistributionOverPermutations::uniform(table4);
        for a in 1..=4u32 {
            for b in (a + 1)..=4 {
                let e = expected_access(&d4, &set(&[a, b], 4)).unwrap();
                assert!((e - 5.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn point_mass_expected_access_is_exact() {
        let table = Arc::new(PermTable::new(4).unwrap());
        let mut w = vec![0.0; table.len()];
        w[5] = 1.0;
        let d = DistributionOverPermutations::from_weights(Arc::clone(&table), w).unwrap();
        let s = set(&[2, 4], 4);
        let expect = crate::perm::access_cost(table.perm(5), &s).unwrap() as f64;
        assert_eq!(expected_access(&d, &s).unwrap(), expect);
    }

    #[test]
    fn tv_distance_examples() {
        let table = Arc::new(PermTable::new(3).unwrap());
        let u = DistributionOverPermutations::uniform(Arc::clone(&table));
        assert_eq!(tv_distance(&u, &u).unwrap(), 0.0);
        let mut w = vec![0.0; 6];
        w[0] = 1.0;
        let point = DistributionOverPermutations::from_weights(table, w).unwrap();
        let d = tv_distance(&point, &u).unwrap();
        assert!((d - 5.0 / 6.0).abs() < 1e-12);
        // symmetric on normalized distributions
        assert!((tv_distance(&u, &point).unwrap() - d).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn per_step_tv_is_bounded_by_scaled_expected_access() {
        use rand::{Rng, SeedableRng};
        let n = 4;
        let table = Arc::new(PermTable::new(n).unwrap());
        let mut mwu = MwuState::new(Arc::clone(&table));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n3 = (n as f64).powi(3);
        for _ in 0..300 {
            let a = rng.gen_range(1..=n as u32);
            let mut b = rng.gen_range(1..=n as u32);
            while b == a {
                b = rng.gen_range(1..=n as u32);
            }
            let s = set(&[a, b], n);
            let before = mwu.distribution();
            let exp = expected_access(&before, &s).unwrap();
            mwu.update(&s).unwrap();
            let after = mwu.distribution();
            assert!(tv_distance(&before, &after).unwrap() <= exp / n3 + 1e-9);
        }
    }
}
