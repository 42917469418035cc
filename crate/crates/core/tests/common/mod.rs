#![allow(dead_code)]

use std::path::PathBuf;

use acsfa_core::acs::{
    construct_tour, global_update, local_update, run_acs, transition_probabilities,
};
use acsfa_core::acsfa::run_acsfa;
use acsfa_core::firefly::{move_toward, reduce_alpha, DIMS};
use acsfa_core::tsplib::check_permutation;
use acsfa_core::{
    parse_instance, AcsParams, FaState, HybridConfig, Metric, ParamBounds, ParamVector,
    PheromoneMatrix, Tour, TspInstance,
};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn load(name: &str) -> TspInstance {
    let text = std::fs::read_to_string(data_path(name)).expect("bundled instance");
    parse_instance(&text).expect("bundled instance parses")
}

pub fn random_euc(rng: &mut impl Rng, n: usize) -> TspInstance {
    let coords = (0..n)
        .map(|_| {
            (
                rng.random_range(0..100) as f64,
                rng.random_range(0..100) as f64,
            )
        })
        .collect();
    TspInstance::from_coords("random", Metric::Euc2d, coords).unwrap()
}

/// Integer-valued coordinates in a 1000 × 1000 box.
pub fn coords(min: usize, max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec(
        (0u32..1000, 0u32..1000).prop_map(|(x, y)| (x as f64, y as f64)),
        min..=max,
    )
}

/// Real-valued coordinates, including fractional parts.
pub fn real_coords(min: usize, max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1000.0..1000.0f64, -1000.0..1000.0f64), min..=max)
}

pub fn euc(c: Vec<(f64, f64)>) -> TspInstance {
    TspInstance::from_coords("prop", Metric::Euc2d, c).unwrap()
}

fn in_range(lo: f64, hi: f64) -> BoxedStrategy<f64> {
    prop_oneof![1 => Just(lo), 1 => Just(hi), 6 => lo..=hi].boxed()
}

/// Parameter vectors inside the standard tuning box, bounds included.
pub fn param_vector() -> impl Strategy<Value = ParamVector> {
    let b = ParamBounds::standard();
    let dims: Vec<BoxedStrategy<f64>> = (0..DIMS).map(|d| in_range(b.low(d), b.high(d))).collect();
    dims.prop_map(|v| ParamVector::new(v[0], v[1], v[2], v[3], v[4]))
}

#[derive(Debug, Clone)]
pub enum Update {
    Local(usize, usize, f64),
    Global(u64, f64),
}

fn update() -> impl Strategy<Value = Update> {
    prop_oneof![
        (0usize..64, 0usize..64, 0.001..=1.0f64).prop_map(|(r, s, rho)| Update::Local(r, s, rho)),
        (any::<u64>(), 0.0..0.99f64).prop_map(|(seed, alpha)| Update::Global(seed, alpha)),
    ]
}

/// A random instance plus a pheromone matrix produced by random updates.
pub fn colony_case() -> impl Strategy<Value = (Vec<(f64, f64)>, Vec<Update>)> {
    (coords(3, 12), prop::collection::vec(update(), 0..40))
}

fn shuffled(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.random_range(0..=i));
    }
    v
}

/// Applies `updates` to a fresh matrix; also returns the baseline and `τ0·Π(1−α)` over the global updates.
pub fn apply_updates(inst: &TspInstance, updates: &[Update]) -> (PheromoneMatrix, AcsParams, f64) {
    let n = inst.dimension();
    let base = AcsParams::baseline_for(inst);
    let mut tau = PheromoneMatrix::new(n, base.tau0);
    let mut floor = base.tau0;
    for u in updates {
        match *u {
            Update::Local(r, s, rho) => {
                let (r, s) = (r % n, s % n);
                if r != s {
                    local_update(&mut tau, r, s, &AcsParams { rho, ..base });
                }
            }
            Update::Global(seed, alpha) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let tour = Tour::new(inst, shuffled(n, &mut rng)).unwrap();
                global_update(&mut tau, &tour, &AcsParams { alpha, ..base });
                floor *= 1.0 - alpha;
            }
        }
    }
    (tau, base, floor)
}

pub fn prop_probability_normalization(
    (c, updates, p, r, mask): (Vec<(f64, f64)>, Vec<Update>, ParamVector, usize, u64),
) -> Result<(), TestCaseError> {
    let inst = euc(c);
    let n = inst.dimension();
    let (tau, base, _) = apply_updates(&inst, &updates);
    let r = r % n;
    let mut cands: Vec<usize> = (0..n).filter(|&u| u != r && mask >> u & 1 == 1).collect();
    if cands.is_empty() {
        cands.push((r + 1) % n);
    }
    let probs = transition_probabilities(r, &cands, &tau, &inst, &base.with_tuned(&p)).unwrap();
    let sum: f64 = probs.iter().sum();
    prop_assert!((sum - 1.0).abs() <= 1e-12, "sum {sum}");
    prop_assert!(probs.iter().all(|&x| x >= 0.0));
    Ok(())
}

pub fn prop_pheromone_symmetry_positivity(
    (c, updates): (Vec<(f64, f64)>, Vec<Update>),
) -> Result<(), TestCaseError> {
    let inst = euc(c);
    let (tau, base, floor) = apply_updates(&inst, &updates);
    prop_assert!(tau.is_symmetric());
    let min = tau.min_entry();
    prop_assert!(min > 0.0);
    prop_assert!(
        min >= floor.min(base.tau0) * (1.0 - 1e-12),
        "min {min} below {floor}"
    );
    Ok(())
}

pub fn prop_tour_validity(
    (c, p, seed): (Vec<(f64, f64)>, ParamVector, u64),
) -> Result<(), TestCaseError> {
    let inst = euc(c);
    let n = inst.dimension();
    let params = AcsParams::baseline_for(&inst).with_tuned(&p);
    let mut tau = PheromoneMatrix::new(n, params.tau0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..3 {
        let start = rng.random_range(0..n);
        let tour = construct_tour(&inst, &mut tau, &params, &mut rng, start);
        prop_assert!(check_permutation(tour.order(), n).is_ok());
        prop_assert_eq!(tour.order()[0], start);
        prop_assert_eq!(tour.length(), inst.tour_length(tour.order()).unwrap());
    }
    prop_assert!(tau.is_symmetric() && tau.min_entry() > 0.0);
    Ok(())
}

pub fn prop_fa_clamping(
    (xi, xj, alpha, gamma, seed): (ParamVector, ParamVector, f64, f64, u64),
) -> Result<(), TestCaseError> {
    let b = ParamBounds::standard();
    let fa = FaState {
        alpha,
        ..FaState::standard()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let moved = move_toward(&xi, &xj, &fa, gamma, &b, &mut rng);
    prop_assert!(b.contains(&moved), "{moved:?}");
    Ok(())
}

pub fn prop_alpha_decay((delta, t): (f64, usize)) -> Result<(), TestCaseError> {
    let mut fa = FaState::standard();
    for _ in 0..t {
        reduce_alpha(&mut fa, delta);
    }
    let expected = 2.3 * delta.powi(t as i32);
    prop_assert!(
        (fa.alpha - expected).abs() <= 1e-12,
        "{} vs {expected}",
        fa.alpha
    );
    Ok(())
}

pub fn prop_reproducibility(
    (c, seed, iters, ants): (Vec<(f64, f64)>, u64, usize, usize),
) -> Result<(), TestCaseError> {
    let inst = euc(c);
    let params = AcsParams {
        ants,
        ..AcsParams::baseline_for(&inst)
    };
    let a = run_acs(&inst, &params, iters, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    let b = run_acs(&inst, &params, iters, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    prop_assert_eq!(&a.best, &b.best);
    prop_assert_eq!(&a.best_trace, &b.best_trace);
    prop_assert!(a.best_trace.windows(2).all(|w| w[1] <= w[0]));

    let cfg = HybridConfig {
        iterations: iters,
        ants,
        ..HybridConfig::default()
    };
    let (ra, ta) = run_acsfa(&inst, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    let (rb, tb) = run_acsfa(&inst, &cfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
    prop_assert_eq!(&ra.best, &rb.best);
    prop_assert_eq!(&ra.best_trace, &rb.best_trace);
    prop_assert_eq!(ra.best_params, rb.best_params);
    prop_assert_eq!(ta, tb);
    prop_assert!(ra.best_trace.windows(2).all(|w| w[1] <= w[0]));
    Ok(())
}

pub fn normalization_input(
) -> impl Strategy<Value = (Vec<(f64, f64)>, Vec<Update>, ParamVector, usize, u64)> {
    colony_case().prop_flat_map(|(c, u)| {
        (
            Just(c),
            Just(u),
            param_vector(),
            any::<usize>(),
            any::<u64>(),
        )
    })
}

pub fn tour_input() -> impl Strategy<Value = (Vec<(f64, f64)>, ParamVector, u64)> {
    (coords(3, 15), param_vector(), any::<u64>())
}

pub fn clamping_input() -> impl Strategy<Value = (ParamVector, ParamVector, f64, f64, u64)> {
    (
        param_vector(),
        param_vector(),
        0.0..10.0f64,
        0.0..=10.0f64,
        any::<u64>(),
    )
}

pub fn decay_input() -> impl Strategy<Value = (f64, usize)> {
    (0.8..=1.0f64, 0usize..1000)
}

pub fn reproducibility_input() -> impl Strategy<Value = (Vec<(f64, f64)>, u64, usize, usize)> {
    (coords(3, 8), any::<u64>(), 0usize..4, 1usize..4)
}

pub const INSTANCES: [&str; 12] = [
    "ulysses16",
    "bays29",
    "Oliver30",
    "eil51",
    "pr76",
    "kroA100",
    "lin105",
    "tsp225",
    "gil262",
    "lin318",
    "rat575",
    "rat783",
];

pub const OPTIMA: [f64; 12] = [
    6859.0, 2020.0, 420.0, 426.0, 108159.0, 21282.0, 14379.0, 3916.0, 2378.0, 42029.0, 6773.0,
    8806.0,
];

/// Best lengths reported for ACS, PSOACS and ACSFA over the twelve instances.
pub const BEST: [[f64; 12]; 3] = [
    [
        6875.0, 2038.0, 426.0, 430.0, 110281.0, 22011.0, 14844.0, 4077.0, 2722.0, 47960.0, 7819.0,
        10165.0,
    ],
    [
        6909.0, 2028.0, 425.0, 429.0, 108358.0, 21835.0, 14492.0, 4009.0, 2442.0, 43191.0, 7189.0,
        10540.0,
    ],
    [
        6859.0, 2026.0, 421.0, 428.0, 108358.0, 21396.0, 14412.0, 3978.0, 2435.0, 43061.0, 7097.0,
        10067.0,
    ],
];

pub fn best_matrix() -> acsfa_core::stats::ResponseMatrix {
    acsfa_core::stats::ResponseMatrix::new(
        vec!["ACS".into(), "PSOACS".into(), "ACSFA".into()],
        INSTANCES.iter().map(|s| s.to_string()).collect(),
        BEST.iter().map(|r| r.to_vec()).collect(),
    )
    .unwrap()
}

pub fn optima() -> Vec<(String, f64)> {
    INSTANCES
        .iter()
        .map(|s| s.to_string())
        .zip(OPTIMA)
        .collect()
}
