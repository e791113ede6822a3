//! Randomized property checks for the permutation primitives.

use proptest::prelude::*;

use omssc::harness::{read_trace_from, write_trace_to};
use omssc::{
    access_cost, decode, encode, kendall_tau, move_elements, Permutation, PermutationIndex,
    RequestSet, Trace,
};

fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n as u32).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|order| Permutation::from_order(order).unwrap())
}

proptest! {
    #[test]
    fn kendall_is_a_metric(
        n in 2usize..=7,
        seed_a in any::<u64>(),
        seed_b in any::<u64>(),
        seed_c in any::<u64>(),
    ) {
        let mk = |seed: u64| {
            let mut order: Vec<u32> = (1..=n as u32).collect();
            // cheap seeded Fisher-Yates so all three perms share one n
            let mut state = seed | 1;
            for i in (1..n).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (state >> 33) as usize % (i + 1));
            }
            Permutation::from_order(order).unwrap()
        };
        let (a, b, c) = (mk(seed_a), mk(seed_b), mk(seed_c));
        let ab = kendall_tau(&a, &b).unwrap();
        let ba = kendall_tau(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(kendall_tau(&a, &a).unwrap(), 0);
        prop_assert_eq!(ab == 0, a == b);
        let ac = kendall_tau(&a, &c).unwrap();
        let cb = kendall_tau(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb);
        prop_assert!(ab <= (n * (n - 1) / 2) as u64);
    }

    #[test]
    fn encode_decode_round_trip(n in 1usize..=8, p in (1usize..=8).prop_flat_map(perm_strategy)) {
        let _ = n;
        let idx = encode(&p).unwrap();
        prop_assert_eq!(decode(idx).unwrap(), p);
    }

    #[test]
    fn lehmer_index_in_range(p in (1usize..=8).prop_flat_map(perm_strategy)) {
        let PermutationIndex { index, n } = encode(&p).unwrap();
        let fact: u64 = (1..=n as u64).product();
        prop_assert!(index < fact);
    }

    #[test]
    fn uniform_left_shift_moves_at_most_r_d(
        p in (4usize..=7).prop_flat_map(perm_strategy),
        picks in proptest::collection::vec(any::<u16>(), 1..=3),
        d in 1usize..=3,
    ) {
        let n = p.n();
        // pick distinct positions deep enough to shift left by d
        let mut positions: Vec<usize> = picks
            .iter()
            .map(|&x| d + 1 + (x as usize) % (n - d))
            .collect();
        positions.sort_unstable();
        positions.dedup();
        let targets: Vec<(u32, usize)> = positions
            .iter()
            .map(|&pos| (p.element_at(pos), pos - d))
            .collect();
        let moved = move_elements(&p, &targets).unwrap();
        let dist = kendall_tau(&p, &moved).unwrap();
        prop_assert!(dist <= (targets.len() * d) as u64);
        for (e, pos) in &targets {
            prop_assert_eq!(moved.position_of(*e), *pos);
        }
    }

    #[test]
    fn access_cost_is_min_position(
        p in (3usize..=8).prop_flat_map(perm_strategy),
        picks in proptest::collection::vec(any::<u16>(), 1..=4),
    ) {
        let n = p.n();
        let mut elems: Vec<u32> = picks.iter().map(|&x| 1 + (x as u32) % n as u32).collect();
        elems.sort_unstable();
        elems.dedup();
        let s = RequestSet::new(elems.clone(), n).unwrap();
        let cost = access_cost(&p, &s).unwrap();
        let expect = elems.iter().map(|&e| p.position_of(e) as u64).min().unwrap();
        prop_assert_eq!(cost, expect);
    }

    #[test]
    fn trace_files_round_trip(
        n in 3usize..=8,
        r in 1usize..=3,
        m in 0usize..=20,
        seed in any::<u64>(),
    ) {
        prop_assume!(r <= n);
        let trace = omssc::adversaries::random_trace(n, r, m, seed).unwrap();
        let mut buf = Vec::new();
        write_trace_to(&trace, &mut buf).unwrap();
        let back: Trace = read_trace_from(&buf[..]).unwrap();
        prop_assert_eq!(trace, back);
    }
}
