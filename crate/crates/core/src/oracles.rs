//! Offline baselines and combinatorial identities: brute-force static OPT,
//! the greedy cover heuristic, exact dynamic OPT by value iteration over the
//! n! state space, the MTF replay of a cover schedule, and the closed-form
//! counting formulas for uniformly random permutations.

use std::collections::HashMap;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::index::{factorial, PermTable};
use crate::ledger::CostLedger;
use crate::perm::{access_cost, kendall_tau, move_to_front, ElementId, Permutation, RequestSet};
use crate::trace::Trace;

/// Best single permutation for a trace, paying access cost only.
#[derive(Clone, Debug)]
pub struct StaticOptResult {
    pub permutation: Permutation,
    pub cost: u64,
}

/// Best permutation trajectory for a trace, paying access plus movement.
#[derive(Clone, Debug)]
pub struct DynamicOptResult {
    pub trajectory: Vec<Permutation>,
    pub cost: u64,
}

/// Exact static optimum by enumerating all n! permutations. Ties go to the
/// smallest permutation index. Repeated request sets are collapsed to a
/// weighted sum so adaptive traces with few distinct sets stay cheap.
pub fn opt_static_bruteforce(trace: &Trace) -> Result<StaticOptResult> {
    let n = trace.n();
    let table = PermTable::new(n)?;
    let mut weighted: HashMap<&RequestSet, u64> = HashMap::new();
    for s in trace.sets() {
        *weighted.entry(s).or_insert(0) += 1;
    }
    let mut best_cost = u64::MAX;
    let mut best_index = 0usize;
    for (index, p) in table.perms().iter().enumerate() {
        let mut cost = 0u64;
        for (s, &count) in &weighted {
            cost += access_cost(p, s)? * count;
            if cost >= best_cost {
                break;
            }
        }
        if cost < best_cost {
            best_cost = cost;
            best_index = index;
        }
    }
    Ok(StaticOptResult {
        permutation: table.perm(best_index).clone(),
        cost: best_cost,
    })
}

/// Total access cost of serving a whole trace with one fixed permutation.
pub fn access_total(p: &Permutation, trace: &Trace) -> Result<u64> {
    trace.sets().iter().map(|s| access_cost(p, s)).sum()
}

/// Greedy cover order: repeatedly front the element hitting the most
/// not-yet-covered sets (ties to the smallest id), then append the rest by
/// id. A 4-approximation of the static optimum.
pub fn greedy_static(trace: &Trace) -> Permutation {
    let n = trace.n();
    let mut covered = vec![false; trace.len()];
    let mut placed = vec![false; n];
    let mut order: Vec<ElementId> = Vec::with_capacity(n);
    loop {
        let mut best: Option<(usize, ElementId)> = None;
        for e in 1..=n as ElementId {
            if placed[e as usize - 1] {
                continue;
            }
            let hits = trace
                .sets()
                .iter()
                .zip(&covered)
                .filter(|(s, &c)| !c && s.elements().contains(&e))
                .count();
            if hits > 0 && best.map_or(true, |(h, _)| hits > h) {
                best = Some((hits, e));
            }
        }
        match best {
            Some((_, e)) => {
                placed[e as usize - 1] = true;
                order.push(e);
                for (s, c) in trace.sets().iter().zip(covered.iter_mut()) {
                    if s.elements().contains(&e) {
                        *c = true;
                    }
                }
            }
            None => break,
        }
    }
    for e in 1..=n as ElementId {
        if !placed[e as usize - 1] {
            order.push(e);
        }
    }
    Permutation::from_order(order).expect("greedy order is a permutation by construction")
}

/// Default cap for the dynamic program (n! states with an n! x n! metric).
pub const DYNAMIC_CAP: usize = 6;

/// Exact dynamic optimum by value iteration over all n! permutations.
/// Movement from `initial` is charged at the first step; ties (both in the
/// predecessor choice and in the final state) go to the smallest index.
pub fn opt_dynamic_dp(trace: &Trace, initial: &Permutation) -> Result<DynamicOptResult> {
    let n = trace.n();
    if initial.n() != n {
        return Err(Error::InvalidInput(format!(
            "initial permutation has n={}, trace has n={}",
            initial.n(),
            n
        )));
    }
    let table = PermTable::with_cap(n, DYNAMIC_CAP)?;
    let states = table.len();
    let mut dist = vec![0u64; states * states];
    for a in 0..states {
        for b in (a + 1)..states {
            let d = kendall_tau(table.perm(a), table.perm(b))?;
            dist[a * states + b] = d;
            dist[b * states + a] = d;
        }
    }

    let mut cost: Vec<u64> = (0..states)
        .map(|i| kendall_tau(initial, table.perm(i)))
        .collect::<Result<_>>()?;
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(trace.len());
    for s in trace.sets() {
        let mut next = vec![u64::MAX; states];
        let mut from = vec![0usize; states];
        for (prev, &c) in cost.iter().enumerate() {
            for (state, slot) in next.iter_mut().enumerate() {
                let candidate = c + dist[prev * states + state];
                if candidate < *slot {
                    *slot = candidate;
                    from[state] = prev;
                }
            }
        }
        for (state, slot) in next.iter_mut().enumerate() {
            *slot += access_cost(table.perm(state), s)?;
        }
        back.push(from);
        cost = next;
    }

    let (mut state, &total) = cost
        .iter()
        .enumerate()
        .min_by_key(|&(i, &c)| (c, i))
        .expect("state space is nonempty");
    let mut trajectory = vec![table.perm(state).clone(); trace.len()];
    for t in (0..trace.len()).rev() {
        trajectory[t] = table.perm(state).clone();
        state = back[t][state];
    }
    Ok(DynamicOptResult {
        trajectory,
        cost: total,
    })
}

/// The cover schedule a trajectory induces: at each step, the trajectory
/// permutation's first element of the request set.
pub fn cover_schedule(trace: &Trace, trajectory: &[Permutation]) -> Result<Vec<ElementId>> {
    if trajectory.len() != trace.len() {
        return Err(Error::InvalidInput(
            "trajectory length differs from trace length".into(),
        ));
    }
    trace
        .sets()
        .iter()
        .zip(trajectory)
        .map(|(s, p)| {
            let pos = access_cost(p, s)?;
            Ok(p.element_at(pos as usize))
        })
        .collect()
}

/// Replays a cover schedule with move-to-front: each step fronts the
/// scheduled element, then serves at access cost 1.
pub fn mtf_opt_replay(
    trace: &Trace,
    schedule: &[ElementId],
    initial: &Permutation,
) -> Result<CostLedger> {
    if schedule.len() != trace.len() {
        return Err(Error::InvalidInput(
            "schedule length differs from trace length".into(),
        ));
    }
    let mut p = initial.clone();
    let mut ledger = CostLedger::new();
    for (s, &e) in trace.sets().iter().zip(schedule) {
        if !s.elements().contains(&e) {
            return Err(Error::InvalidInput(format!(
                "scheduled element {e} not in request {s:?}"
            )));
        }
        let moving = (p.position_of(e) - 1) as u64;
        p = move_to_front(&p, e)?;
        ledger.push(1, moving)?;
    }
    Ok(ledger)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Number of permutations of `{1..n}` giving a fixed r-set access cost
/// exactly `i`: choose the r-1 non-leading requested elements behind
/// position i, times the orderings of requested and unrequested elements.
pub fn count_perms_with_cost(n: usize, r: usize, i: usize) -> Result<u64> {
    if r < 1 || r > n || i < 1 || i > n - r + 1 {
        return Err(Error::InvalidInput(format!(
            "cost index i={i} out of range for n={n}, r={r}"
        )));
    }
    Ok(binomial((n - i) as u64, (r - 1) as u64) * factorial(r) * factorial(n - r))
}

/// Mean access cost of an r-set under a uniformly random permutation.
pub fn average_access(n: usize, r: usize) -> Result<Rational64> {
    if r < 1 || r > n {
        return Err(Error::InvalidInput(format!("r={r} out of range for n={n}")));
    }
    Ok(Rational64::new(n as i64 + 1, r as i64 + 1))
}

/// Lower bound on the competitive ratio of any deterministic algorithm
/// against the static optimum: (r+1)(1 - r/(n+1)).
pub fn theorem1_bound(n: usize, r: usize) -> Result<Rational64> {
    if r < 1 || r > n {
        return Err(Error::InvalidInput(format!("r={r} out of range for n={n}")));
    }
    let one = Rational64::from_integer(1);
    Ok(Rational64::from_integer(r as i64 + 1) * (one - Rational64::new(r as i64, n as i64 + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(elems: &[ElementId], n: usize) -> RequestSet {
        RequestSet::new(elems.to_vec(), n).unwrap()
    }

    fn trace_of(n: usize, r: usize, sets: &[&[ElementId]]) -> Trace {
        let mut t = Trace::new(n, r).unwrap();
        for s in sets {
            t.push(set(s, n)).unwrap();
        }
        t
    }

    #[test]
    fn static_opt_fronts_the_hot_element() {
        let t = trace_of(3, 1, &[&[3], &[3], &[2]]);
        let res = opt_static_bruteforce(&t).unwrap();
        assert_eq!(res.cost, 4);
        assert_eq!(res.permutation.order(), &[3, 2, 1]);
    }

    #[test]
    fn static_opt_trivial_cases() {
        let t = trace_of(4, 2, &[&[2, 4]]);
        assert_eq!(opt_static_bruteforce(&t).unwrap().cost, 1);
        let t = trace_of(4, 2, &[&[2, 4], &[2, 4], &[2, 4]]);
        assert_eq!(opt_static_bruteforce(&t).unwrap().cost, 3);
    }

    #[test]
    fn static_opt_ties_break_to_smallest_index() {
        // every permutation costs the same on the full set, so the identity
        // (index 0) must win
        let t = trace_of(3, 3, &[&[1, 2, 3], &[1, 2, 3]]);
        let res = opt_static_bruteforce(&t).unwrap();
        assert_eq!(res.permutation.order(), &[1, 2, 3]);
    }

    #[test]
    fn greedy_fronts_the_common_element() {
        let t = trace_of(4, 2, &[&[1, 2], &[1, 3], &[1, 4]]);
        let p = greedy_static(&t);
        assert_eq!(p.position_of(1), 1);
        let cost: u64 = t.sets().iter().map(|s| access_cost(&p, s).unwrap()).sum();
        assert_eq!(cost, 3);
    }

    #[test]
    fn greedy_on_empty_trace_is_identity() {
        let t = trace_of(4, 2, &[]);
        assert_eq!(greedy_static(&t).order(), &[1, 2, 3, 4]);
    }

    #[test]
    fn greedy_is_a_four_approximation_on_random_traces() {
        use crate::adversaries::random_trace;
        for seed in 0..30 {
            let n = 4 + (seed as usize % 4); // 4..=7
            let r = 1 + (seed as usize % 3);
            let t = random_trace(n, r, 25, seed).unwrap();
            let opt = opt_static_bruteforce(&t).unwrap().cost;
            let g = greedy_static(&t);
            let cost: u64 = t.sets().iter().map(|s| access_cost(&g, s).unwrap()).sum();
            assert!(cost <= 4 * opt, "greedy {cost} > 4x opt {opt} (seed {seed})");
        }
    }

    #[test]
    fn dynamic_dp_moves_once_for_a_hot_tail_element() {
        let t = trace_of(3, 1, &[&[3], &[3], &[3], &[3], &[3]]);
        let res = opt_dynamic_dp(&t, &Permutation::identity(3)).unwrap();
        assert_eq!(res.cost, 7); // move e3 front (2 inversions), then 5 x 1
        assert_eq!(res.trajectory[0].position_of(3), 1);
    }

    #[test]
    fn dynamic_never_beats_nothing_and_never_loses_to_static() {
        use crate::adversaries::random_trace;
        for seed in 0..20 {
            let t = random_trace(4, 2, 15, seed).unwrap();
            let stat = opt_static_bruteforce(&t).unwrap();
            let dynamic = opt_dynamic_dp(&t, &Permutation::identity(4)).unwrap();
            // staying on the static optimum forever is a feasible trajectory
            let static_as_trajectory =
                stat.cost + kendall_tau(&Permutation::identity(4), &stat.permutation).unwrap();
            assert!(dynamic.cost <= static_as_trajectory);
            assert_eq!(dynamic.trajectory.len(), t.len());
        }
    }

    #[test]
    fn dynamic_dp_trajectory_cost_matches_reported_cost() {
        use crate::adversaries::random_trace;
        for seed in 0..10 {
            let t = random_trace(4, 2, 12, seed).unwrap();
            let initial = Permutation::identity(4);
            let res = opt_dynamic_dp(&t, &initial).unwrap();
            let mut total = 0u64;
            let mut prev = initial.clone();
            for (s, p) in t.sets().iter().zip(&res.trajectory) {
                total += kendall_tau(&prev, p).unwrap() + access_cost(p, s).unwrap();
                prev = p.clone();
            }
            assert_eq!(total, res.cost);
        }
    }

    #[test]
    fn separation_between_static_and_dynamic() {
        let b = 50;
        let mut t = Trace::new(4, 1).unwrap();
        for e in 1..=4u32 {
            for _ in 0..b {
                t.push(set(&[e], 4)).unwrap();
            }
        }
        let stat = opt_static_bruteforce(&t).unwrap();
        assert_eq!(stat.cost, b * (1 + 2 + 3 + 4));
        let dynamic = opt_dynamic_dp(&t, &Permutation::identity(4)).unwrap();
        // front each element in turn: 200 access + 2 inversions per switch
        assert_eq!(dynamic.cost, 4 * b + 6);
    }

    #[test]
    fn mtf_replay_rejects_uncovering_schedule() {
        let t = trace_of(3, 1, &[&[2]]);
        let err = mtf_opt_replay(&t, &[3], &Permutation::identity(3));
        assert!(err.is_err());
    }

    #[test]
    fn mtf_replay_single_step_costs() {
        let t = trace_of(4, 2, &[&[3, 4]]);
        let ledger = mtf_opt_replay(&t, &[4], &Permutation::identity(4)).unwrap();
        assert_eq!(ledger.total_access, 1);
        assert_eq!(ledger.total_moving, 3);
    }

    #[test]
    fn constant_schedule_pays_one_front_move() {
        let n = 5;
        let m = 30;
        let mut t = Trace::new(n, 2).unwrap();
        for _ in 0..m {
            t.push(set(&[2, 4], n)).unwrap();
        }
        let ledger = mtf_opt_replay(&t, &vec![4; m], &Permutation::identity(n)).unwrap();
        assert!(ledger.total_cost() <= (m as u64) + (n * (n - 1) / 2) as u64);
    }

    #[test]
    fn replay_of_the_dp_schedule_is_within_twice_dynamic_opt() {
        use crate::adversaries::random_trace;
        for seed in 0..25 {
            let n = 3 + (seed as usize % 3);
            let t = random_trace(n, 2, 20, seed).unwrap();
            let initial = Permutation::identity(n);
            let dynamic = opt_dynamic_dp(&t, &initial).unwrap();
            let schedule = cover_schedule(&t, &dynamic.trajectory).unwrap();
            let replay = mtf_opt_replay(&t, &schedule, &initial).unwrap();
            assert!(dynamic.cost <= replay.total_cost());
            assert!(replay.total_cost() <= 2 * dynamic.cost);
        }
    }

    #[test]
    fn counting_identity_matches_the_hand_enumeration() {
        assert_eq!(count_perms_with_cost(4, 2, 1).unwrap(), 12);
        assert_eq!(count_perms_with_cost(4, 2, 2).unwrap(), 8);
        assert_eq!(count_perms_with_cost(4, 2, 3).unwrap(), 4);
        assert!(count_perms_with_cost(4, 2, 4).is_err());
    }

    #[test]
    fn counts_sum_to_n_factorial() {
        for n in 1..=8usize {
            for r in 1..=n {
                let total: u64 = (1..=n - r + 1)
                    .map(|i| count_perms_with_cost(n, r, i).unwrap())
                    .sum();
                assert_eq!(total, factorial(n), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn average_access_agrees_with_brute_force() {
        for n in 1..=7usize {
            let table = PermTable::new(n).unwrap();
            for r in 1..=n {
                let s = set(&(1..=r as ElementId).collect::<Vec<_>>(), n);
                let total: u64 = table
                    .perms()
                    .iter()
                    .map(|p| access_cost(p, &s).unwrap())
                    .sum();
                let mean = Rational64::new(total as i64, factorial(n) as i64);
                assert_eq!(mean, average_access(n, r).unwrap(), "n={n} r={r}");
            }
        }
    }

    #[test]
    fn average_access_weighted_by_counts() {
        let weighted: u64 = (1..=3)
            .map(|i| count_perms_with_cost(4, 2, i).unwrap() * i as u64)
            .sum();
        assert_eq!(weighted, 40);
        assert_eq!(average_access(4, 2).unwrap(), Rational64::new(5, 3));
    }

    #[test]
    fn theorem1_values() {
        assert_eq!(theorem1_bound(3, 1).unwrap(), Rational64::new(3, 2));
        assert_eq!(theorem1_bound(7, 2).unwrap(), Rational64::new(9, 4));
        for n in 2..=12usize {
            let expect =
                Rational64::from_integer(2) - Rational64::new(2, n as i64 + 1);
            assert_eq!(theorem1_bound(n, 1).unwrap(), expect);
        }
    }

    #[test]
    fn static_opt_never_exceeds_the_uniform_mean() {
        use crate::adversaries::random_trace;
        for seed in 0..15 {
            let t = random_trace(5, 2, 30, seed).unwrap();
            let opt = opt_static_bruteforce(&t).unwrap().cost;
            let mean = average_access(5, 2).unwrap() * Rational64::from_integer(t.len() as i64);
            assert!(Rational64::from_integer(opt as i64) <= mean);
        }
    }
}
