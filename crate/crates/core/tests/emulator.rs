use std::collections::BTreeMap;

use proptest::prelude::*;
use qwalk::analysis::{average_conditioned, AveragingScheme};
use qwalk::emulator::{
    effective_rate, reconstruct_conditioned, simulate_runs, EmulatorConfig, Simulation,
};
use qwalk::two_photon::{conditioned_distribution, ConditioningSpec, Convention};
use qwalk::{Coin, CoinSpec, Mode, ModeDistribution};

fn lossless(outcoupling_prob: f64, runs: u64, seed: u64) -> EmulatorConfig {
    EmulatorConfig {
        outcoupling_prob,
        detector_efficiency: 1.0,
        setup_klyshko: 1.0,
        pair_generation_prob: 1.0,
        dead_time_ns: 0.0,
        max_step: 8,
        runs,
        rng_seed: seed,
        ..EmulatorConfig::default()
    }
}

/// Every bin of `counts` within `k` binomial standard deviations of `expected`.
fn within_sigma(counts: &BTreeMap<Mode, u64>, total: u64, expected: &ModeDistribution, k: f64) {
    let n = total as f64;
    for mode in expected.keys().chain(counts.keys().copied()) {
        let p = expected.get(mode);
        let observed = counts.get(&mode).copied().unwrap_or(0) as f64;
        let sigma = (n * p * (1.0 - p)).sqrt().max(1.0);
        assert!(
            (observed - n * p).abs() <= k * sigma,
            "{mode}: observed {observed}, expected {}",
            n * p
        );
    }
}

fn two_click_runs(sim: &Simulation, loss_step: usize, out_step: usize) -> u64 {
    sim.clicks
        .chunk_by(|a, b| a.run_id == b.run_id)
        .filter(|run| run.len() == 2 && run[0].step == loss_step && run[1].step == out_step)
        .count() as u64
}

#[test]
fn full_outcoupling_splits_evenly() {
    let runs = 20_000;
    let sim = simulate_runs(lossless(1.0, runs, 3)).unwrap();
    assert_eq!(sim.clicks.len() as u64, 2 * runs);
    let up = sim
        .clicks
        .chunks(2)
        .filter(|pair| {
            assert_eq!(pair[0].mode(), pair[1].mode());
            assert_eq!(pair[0].step, 1);
            pair[0].mode() == Mode::new(1, Coin::H)
        })
        .count() as f64;
    let sigma = (runs as f64 * 0.25).sqrt();
    assert!((up - runs as f64 / 2.0).abs() <= 3.0 * sigma);
}

#[test]
fn reconstruction_matches_conditioned_distribution() {
    let sim = simulate_runs(lossless(0.3, 200_000, 5)).unwrap();
    let coin = CoinSpec::hadamard();
    for (mode, out_step) in [(Mode::new(1, Coin::H), 3), (Mode::new(-1, Coin::V), 4)] {
        let rec = reconstruct_conditioned(&sim.clicks, 1, mode, out_step).unwrap();
        let spec = ConditioningSpec::new(1, mode, Convention::Annihilation).unwrap();
        let (want, _) = conditioned_distribution(&spec, out_step, &coin).unwrap();
        within_sigma(&rec.counts, rec.total, &want, 3.0);
    }
}

#[test]
fn aggregate_over_loss_modes_is_born_weighted() {
    let sim = simulate_runs(lossless(0.3, 200_000, 9)).unwrap();
    let (loss_step, out_step) = (2, 4);
    let mut counts = BTreeMap::new();
    let mut total = 0;
    for x in -2..=2 {
        for coin in Coin::ALL {
            if let Ok(rec) =
                reconstruct_conditioned(&sim.clicks, loss_step, Mode::new(x, coin), out_step)
            {
                for (m, k) in rec.counts {
                    *counts.entry(m).or_insert(0) += k;
                }
                total += rec.total;
            }
        }
    }
    let want = average_conditioned(
        &[loss_step],
        out_step,
        &AveragingScheme::born_weighted(),
        Convention::Annihilation,
        &CoinSpec::hadamard(),
    )
    .unwrap();
    within_sigma(&counts, total, &want, 3.0);
}

#[test]
fn coincidence_counts_follow_effective_rate() {
    let config = EmulatorConfig {
        pair_generation_prob: 0.5,
        detector_efficiency: 0.9,
        setup_klyshko: 0.9,
        outcoupling_prob: 0.2,
        runs: 100_000,
        rng_seed: 21,
        ..EmulatorConfig::default()
    };
    let sim = simulate_runs(config.clone()).unwrap();
    for (m, n) in [(1, 2), (1, 3), (2, 4)] {
        let expected =
            effective_rate(&config, m, n) * config.runs as f64 / config.repetition_rate_hz;
        let observed = two_click_runs(&sim, m, n) as f64;
        assert!(
            (observed - expected).abs() <= 3.0 * expected.sqrt(),
            "({m}, {n}): observed {observed}, expected {expected}"
        );
    }
}

#[test]
fn dead_time_never_drops_across_bins() {
    let config = EmulatorConfig {
        detector_efficiency: 1.0,
        setup_klyshko: 1.0,
        pair_generation_prob: 1.0,
        outcoupling_prob: 0.5,
        runs: 50_000,
        ..EmulatorConfig::default()
    };
    let sim = simulate_runs(config).unwrap();
    assert!(sim.dead_time.same_bin > 0);
    assert_eq!(sim.dead_time.cross_bin, 0);
}

#[test]
fn seeds_select_streams() {
    let a = simulate_runs(lossless(0.3, 5_000, 1)).unwrap();
    let b = simulate_runs(lossless(0.3, 5_000, 1)).unwrap();
    let c = simulate_runs(lossless(0.3, 5_000, 2)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a
        .clicks
        .windows(2)
        .all(|w| (w[0].run_id, w[0].time_ns) <= (w[1].run_id, w[1].time_ns)));
}

proptest! {
    #[test]
    fn time_bins_invert(run in 0u64..10_000_000, step in 1usize..=15, x in -15i32..=15) {
        let config = EmulatorConfig { max_step: 15, ..EmulatorConfig::default() };
        prop_assume!(config.validate().is_ok());
        let b = config.time_binning();
        prop_assert_eq!(b.decode(b.encode(run, step, x)), (run, step, x));
    }
}
