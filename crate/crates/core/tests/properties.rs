use std::collections::BTreeMap;

use lkgain::gain::{has_consecutive_nonpositive, GainLedger};
use lkgain::instance::random_symmetric_matrix;
use lkgain::{CandidateSets, Engine, ExchangeMove, GainKind, GainPolicy, Instance, SearchConfig, Tour};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn instance(n: usize, seed: u64) -> Instance<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_symmetric_matrix("p", n, 1, 100, &mut rng)
}

fn edge(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Edge multiset after the exchange, or `None` unless it is one cycle
/// through all `n` vertices.
fn exchanged_cycle(
    n: usize,
    tour: &[usize],
    deleted: &[(usize, usize)],
    added: &[(usize, usize)],
) -> Option<BTreeMap<(usize, usize), usize>> {
    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for p in 0..n {
        *edges.entry(edge(tour[p], tour[(p + 1) % n])).or_default() += 1;
    }
    for &(a, b) in deleted {
        let e = edges.get_mut(&edge(a, b))?;
        *e -= 1;
    }
    for &(a, b) in added {
        *edges.entry(edge(a, b)).or_default() += 1;
    }
    edges.retain(|_, c| *c > 0);
    let mut adj = vec![Vec::new(); n];
    for (&(a, b), &c) in &edges {
        for _ in 0..c {
            adj[a].push(b);
            adj[b].push(a);
        }
    }
    if adj.iter().any(|l| l.len() != 2) {
        return None;
    }
    let mut seen = vec![false; n];
    let (mut prev, mut cur) = (usize::MAX, 0);
    for _ in 0..n {
        if seen[cur] {
            return None;
        }
        seen[cur] = true;
        let next = if adj[cur][0] != prev { adj[cur][0] } else { adj[cur][1] };
        prev = cur;
        cur = next;
    }
    (cur == 0 && seen.iter().all(|&s| s)).then_some(edges)
}

fn tour_edges(t: &Tour<i64>) -> BTreeMap<(usize, usize), usize> {
    let mut m = BTreeMap::new();
    for (a, b) in t.edges() {
        *m.entry(edge(a, b)).or_default() += 1;
    }
    m
}

/// Random sequential vertex list `t1 .. t2k`: each `x` a tour edge, each
/// `y` an arbitrary pair of distinct vertices.
fn random_sequence(tour: &Tour<i64>, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = tour.len();
    let mut t = Vec::with_capacity(2 * k);
    let mut v = rng.gen_range(0..n);
    for _ in 0..k {
        let u = if rng.gen_bool(0.5) { tour.next(v) } else { tour.prev(v) };
        t.push(v);
        t.push(u);
        v = loop {
            let w = rng.gen_range(0..n);
            if w != u {
                break w;
            }
        };
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cost_is_symmetric(n in 3usize..30, seed: u64, i in 0usize..30, j in 0usize..30) {
        let inst = instance(n, seed);
        let (i, j) = (i % n, j % n);
        prop_assert_eq!(inst.cost(i, j), inst.cost(j, i));
        if i == j {
            prop_assert!(inst.edge_cost(i, j).is_err());
        } else {
            prop_assert_eq!(inst.edge_cost(i, j).unwrap(), inst.cost(i, j));
        }
    }

    #[test]
    fn between_is_cyclic_order(n in 3usize..40, seed: u64, a in 0usize..40, b in 0usize..40, c in 0usize..40) {
        let inst = instance(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tour = Tour::random(&inst, &mut rng);
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assume!(a != b && b != c && a != c);
        let fwd = tour.between(a, b, c).unwrap();
        // walking forward from a, b comes no later than c
        let mut v = a;
        let mut hit_b = false;
        while v != c {
            hit_b |= v == b;
            v = tour.next(v);
        }
        prop_assert_eq!(fwd, hit_b);
        prop_assert_ne!(tour.between(a, b, c).unwrap(), tour.between(a, c, b).unwrap());
    }

    #[test]
    fn exchange_feasibility_matches_cycle_oracle(n in 6usize..24, seed: u64, k in 2usize..6) {
        let inst = instance(n, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let tour = Tour::random(&inst, &mut rng);
        let t = random_sequence(&tour, k, &mut rng);
        let m = ExchangeMove::from_vertices(&inst, t);
        let deleted = m.deleted();
        let added = m.added();
        let distinct = {
            let mut d: Vec<_> = deleted.iter().map(|&(a, b)| edge(a, b)).collect();
            d.sort();
            d.windows(2).all(|w| w[0] != w[1])
        };
        let self_loop = added.iter().any(|&(a, b)| a == b);
        let planned = tour.exchange_is_tour(&deleted, &added);
        if !distinct || self_loop {
            prop_assert!(planned.is_err());
        } else {
            let expected = exchanged_cycle(n, tour.order(), &deleted, &added);
            prop_assert_eq!(planned.unwrap(), expected.is_some());
            if let Some(edges) = expected {
                let mut after = tour.clone();
                after.apply_move(&inst, &m).unwrap();
                prop_assert_eq!(tour_edges(&after), edges);
                prop_assert_eq!(after.cost(), tour.cost() - m.gain);
                prop_assert_eq!(after.validate(&inst), Ok(()));

                let back = m.inverse(&inst);
                prop_assert_eq!(back.gain, -m.gain);
                after.apply_move(&inst, &back).unwrap();
                prop_assert!(after.same_cycle(&tour));
                prop_assert_eq!(after.cost(), tour.cost());
            }
        }
    }

    #[test]
    fn ledger_steps_sum(steps in proptest::collection::vec(-50i64..50, 0..12)) {
        let mut ledger = GainLedger::<i64>::new();
        for &g in &steps {
            ledger.push_step(g);
        }
        prop_assert_eq!(ledger.len(), steps.len());
        prop_assert_eq!(ledger.last(), steps.iter().sum::<i64>());
        for i in 1..=steps.len() {
            prop_assert_eq!(ledger.step(i), steps[i - 1]);
            prop_assert_eq!(ledger.prefix(i) - ledger.prefix(i - 1), steps[i - 1]);
        }
    }

    #[test]
    fn admitted_ledgers_respect_policy(steps in proptest::collection::vec(-20i64..20, 1..10), period in 2usize..6) {
        for policy in [GainPolicy::strict(), GainPolicy::homogeneous(), GainPolicy::tilted(period).unwrap()] {
            let mut state = policy.begin_move(policy.init_state());
            let mut ledger = GainLedger::<i64>::new();
            for (idx, &g) in steps.iter().enumerate() {
                let i = idx + 1;
                let g_prev = ledger.last();
                let g_i = g_prev + g;
                if !policy.admits(state, i, g_i, g_prev).unwrap() {
                    break;
                }
                ledger.push_step(g);
                state = policy.record(state, i, g_i);
            }
            match policy.kind() {
                GainKind::Strict => prop_assert!(ledger.all_positive()),
                _ => prop_assert!(!has_consecutive_nonpositive(ledger.as_slice())),
            }
        }
    }

    #[test]
    fn trial_invariants(n in 8usize..40, seed: u64, kind_idx in 0usize..3) {
        let inst = instance(n, seed);
        let cands = lkgain::candidates::nn_candidates(&inst, 6).unwrap();
        let kind = GainKind::ALL[kind_idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tour = Tour::random(&inst, &mut rng);
        let start = tour.cost();
        let mut engine = Engine::new(&inst, &cands, SearchConfig::new(kind)).unwrap();
        engine.record_moves(true);
        let outcome = engine.run_trial(&mut tour, &mut rng);
        prop_assert!(outcome.completed);
        prop_assert_eq!(tour.validate(&inst), Ok(()));
        prop_assert!(tour.cost() <= start);
        prop_assert_eq!(engine.stats().invariant_violations, 0);
        prop_assert_eq!(start - tour.cost(), engine.stats().total_gain);
        for m in engine.recorded_moves() {
            prop_assert!(m.gain > 0);
            prop_assert!(m.depth() >= 2 && m.depth() <= 5);
            prop_assert_eq!(*m.ledger.last().unwrap(), m.gain);
            if kind != GainKind::Strict {
                prop_assert!(!has_consecutive_nonpositive(&m.ledger));
            } else {
                prop_assert!(m.ledger.iter().all(|&g| g > 0));
            }
        }
        // a completed trial leaves no improving move from any vertex
        let mut again = tour.clone();
        for t1 in 0..n {
            prop_assert!(engine.improve_from_vertex(&mut again, t1).is_none());
        }
    }

    #[test]
    fn trials_are_deterministic(n in 8usize..30, seed: u64) {
        let inst = instance(n, seed);
        let cands = CandidateSets::complete(&inst);
        let run = || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let mut tour = Tour::from_order(&inst, order).unwrap();
            let mut engine = Engine::new(&inst, &cands, SearchConfig::new(GainKind::Tilted)).unwrap();
            engine.run_trial(&mut tour, &mut rng);
            tour.order().to_vec()
        };
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn policy_inclusion_exhaustive() {
    let values = [-2i64, -1, 0, 1, 2];
    for period in 2..=6 {
        let strict = GainPolicy::strict();
        let homogeneous = GainPolicy::homogeneous();
        let tilted = GainPolicy::tilted(period).unwrap();
        for i in 1..=6 {
            for &g_i in &values {
                for &g_prev in &values {
                    for violated in [false, true] {
                        for prev_violated in [false, true] {
                            for g0_positive in [false, true] {
                                let state = lkgain::GainState { violated, prev_violated, g0_positive };
                                let h = homogeneous.admits(state, i, g_i, g_prev).unwrap();
                                if strict.admits(state, i, g_i, g_prev).unwrap() {
                                    assert!(h);
                                }
                                if tilted.admits(state, i, g_i, g_prev).unwrap() {
                                    assert!(h);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
