use std::collections::HashSet;

use lkgain::instance::{random_euclidean, random_symmetric_matrix};
use lkgain::oracle::{brute_force_optimum, enumerate_closing_moves, held_karp_optimum, OracleError};
use lkgain::{CandidateSets, Engine, GainKind, GainPolicy, Instance, SearchConfig, Tour};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_instance(n: usize, rng: &mut ChaCha8Rng) -> Instance<i64> {
    if rng.gen_bool(0.5) {
        random_euclidean("e", n, 200, rng)
    } else {
        random_symmetric_matrix("m", n, 1, 60, rng)
    }
}

#[test]
fn dynamic_program_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [3, 4, 5, 6, 7, 8, 8, 9, 10, 10] {
        let inst = random_instance(n, &mut rng);
        let hk = held_karp_optimum(&inst).unwrap();
        let bf = brute_force_optimum(&inst).unwrap();
        assert_eq!(hk.optimum, bf.optimum, "n = {n}");
        assert_eq!(inst.tour_cost(&hk.witness).unwrap(), hk.optimum);
        assert_eq!(inst.tour_cost(&bf.witness).unwrap(), bf.optimum);
    }
}

#[test]
fn brute_force_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let inst = random_instance(11, &mut rng);
    assert_eq!(brute_force_optimum(&inst), Err(OracleError::InstanceTooLarge { n: 11, limit: 10 }));
    let tour = Tour::random(&inst, &mut rng);
    let cands = CandidateSets::complete(&inst);
    assert!(matches!(
        enumerate_closing_moves(&inst, &tour, 5, GainPolicy::strict(), &cands),
        Err(OracleError::DepthTooLarge { .. })
    ));
}

#[test]
fn enumerated_moves_apply_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let n = rng.gen_range(6..=10);
        let inst = random_instance(n, &mut rng);
        let tour = Tour::random(&inst, &mut rng);
        let cands = CandidateSets::complete(&inst);
        for policy in [GainPolicy::strict(), GainPolicy::homogeneous()] {
            for m in enumerate_closing_moves(&inst, &tour, 4, policy, &cands).unwrap() {
                assert!(m.gain > 0);
                let mut after = tour.clone();
                after.apply_move(&inst, &m).unwrap();
                assert_eq!(after.cost(), tour.cost() - m.gain);
                assert_eq!(after.validate(&inst), Ok(()));
            }
        }
    }
}

#[test]
fn strict_moves_are_homogeneous_moves() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..15 {
        let n = rng.gen_range(5..=10);
        let inst = random_instance(n, &mut rng);
        let tour = Tour::random(&inst, &mut rng);
        let cands = lkgain::candidates::nn_candidates(&inst, 5).unwrap();
        let strict = enumerate_closing_moves(&inst, &tour, 4, GainPolicy::strict(), &cands).unwrap();
        let relaxed: HashSet<Vec<usize>> = enumerate_closing_moves(&inst, &tour, 4, GainPolicy::homogeneous(), &cands)
            .unwrap()
            .into_iter()
            .map(|m| m.t)
            .collect();
        for m in strict {
            assert!(m.ledger.iter().all(|&g| g > 0));
            assert!(relaxed.contains(&m.t));
        }
    }
}

#[test]
fn engine_moves_are_enumerated_moves() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let n = rng.gen_range(6..=10);
        let inst = random_instance(n, &mut rng);
        let cands = CandidateSets::complete(&inst);
        for kind in [GainKind::Strict, GainKind::Homogeneous] {
            let cfg = SearchConfig::with_depth(kind, 4, 5).unwrap();
            let mut tour = Tour::random(&inst, &mut rng);
            let before = tour.clone();
            let mut engine = Engine::new(&inst, &cands, cfg).unwrap();
            engine.record_moves(true);
            let t1 = rng.gen_range(0..n);
            if engine.improve_from_vertex(&mut tour, t1).is_some() {
                let m = &engine.recorded_moves()[0];
                let all = enumerate_closing_moves(&inst, &before, 4, cfg.policy, &cands).unwrap();
                assert!(all.iter().any(|e| e.t == m.t && e.ledger == m.ledger), "{kind} move {:?}", m.t);
            }
        }
    }
}

#[test]
fn trial_never_beats_optimum() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..8 {
        let inst = random_instance(10, &mut rng);
        let opt = held_karp_optimum(&inst).unwrap().optimum;
        let cands = lkgain::candidates::build_candidate_sets(&inst, lkgain::CandidateKind::Alpha, 5, 50).unwrap();
        for kind in GainKind::ALL {
            let mut tour = Tour::random(&inst, &mut rng);
            let start = tour.cost();
            let mut engine = Engine::new(&inst, &cands, SearchConfig::new(kind)).unwrap();
            engine.run_trial(&mut tour, &mut rng);
            assert!(tour.cost() >= opt);
            assert!(tour.cost() <= start);
            assert_eq!(tour.validate(&inst), Ok(()));
            assert_eq!(engine.stats().invariant_violations, 0);
        }
    }
}
