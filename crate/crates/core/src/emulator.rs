//! Monte-Carlo emulation of the time-multiplexed fiber-loop experiment.
//!
//! Each run generates a photon pair (with some probability) that walks in the
//! loop. Every roundtrip each photon is routed to the detectors with
//! probability `outcoupling_prob`. The first extraction is sampled from the
//! exact two-photon state, the partner continues as the conditioned single
//! walker. Detected photons land in time bins that encode run, step and
//! position.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::ModeDistribution;
use crate::error::{Error, Result};
use crate::two_photon::{
    condition, detection_weights, evolve_joint, initial_state, pair_detection_probabilities,
    Convention,
};
use crate::walk::{self, Coin, CoinSpec, Mode};
use crate::STATE_TOLERANCE;

#[derive(Debug, Clone, PartialEq)]
pub struct EmulatorConfig {
    pub roundtrip_ns: f64,
    pub bin_separation_ns: f64,
    pub outcoupling_prob: f64,
    pub detector_efficiency: f64,
    pub dead_time_ns: f64,
    pub setup_klyshko: f64,
    pub pair_generation_prob: f64,
    pub repetition_rate_hz: f64,
    pub max_step: usize,
    pub runs: u64,
    pub rng_seed: u64,
    /// Convention used for the extraction weights and the partner state.
    pub convention: Convention,
}

impl Default for EmulatorConfig {
    fn default() -> Self {
        EmulatorConfig {
            roundtrip_ns: 5322.7,
            bin_separation_ns: 171.6,
            outcoupling_prob: 0.15,
            detector_efficiency: 0.80,
            dead_time_ns: 70.0,
            setup_klyshko: 0.20,
            pair_generation_prob: 0.1,
            repetition_rate_hz: 1e4,
            max_step: 10,
            runs: 100_000,
            rng_seed: 0,
            convention: Convention::Annihilation,
        }
    }
}

impl EmulatorConfig {
    /// Time between the starts of consecutive runs.
    pub fn period_ns(&self) -> f64 {
        1e9 / self.repetition_rate_hz
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |p: f64| (0.0..=1.0).contains(&p);
        if !(self.outcoupling_prob > 0.0 && self.outcoupling_prob <= 1.0) {
            return Err(Error::InvalidConfig("outcoupling_prob must lie in (0, 1]"));
        }
        if !(unit(self.detector_efficiency)
            && unit(self.setup_klyshko)
            && unit(self.pair_generation_prob))
        {
            return Err(Error::InvalidConfig("probabilities must lie in [0, 1]"));
        }
        if !(self.roundtrip_ns > 0.0
            && self.bin_separation_ns > 0.0
            && self.dead_time_ns >= 0.0
            && self.repetition_rate_hz > 0.0)
        {
            return Err(Error::InvalidConfig("timings must be positive"));
        }
        if self.bin_separation_ns <= self.dead_time_ns {
            return Err(Error::InvalidConfig(
                "bin separation must exceed the detector dead time",
            ));
        }
        if self.max_step == 0 || self.max_step > u16::MAX as usize {
            return Err(Error::InvalidConfig("max_step must lie in 1..=65535"));
        }
        let n = self.max_step as f64;
        // last bin of step s and first bin of step s + 1 must stay apart
        if self.roundtrip_ns - (2.0 * n - 1.0) * self.bin_separation_ns <= self.dead_time_ns {
            return Err(Error::InvalidConfig(
                "time bins of consecutive roundtrips overlap",
            ));
        }
        if n * (self.roundtrip_ns + self.bin_separation_ns) >= self.period_ns() {
            return Err(Error::InvalidConfig(
                "walk does not finish before the next run starts",
            ));
        }
        Ok(())
    }

    pub fn time_binning(&self) -> TimeBinning {
        TimeBinning {
            roundtrip_ns: self.roundtrip_ns,
            bin_separation_ns: self.bin_separation_ns,
            repetition_rate_hz: self.repetition_rate_hz,
        }
    }
}

/// Map between `(run, step, position)` and arrival time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeBinning {
    pub roundtrip_ns: f64,
    pub bin_separation_ns: f64,
    pub repetition_rate_hz: f64,
}

impl TimeBinning {
    pub fn encode(&self, run_id: u64, step: usize, position: i32) -> f64 {
        run_id as f64 / self.repetition_rate_hz * 1e9
            + step as f64 * self.roundtrip_ns
            + position as f64 * self.bin_separation_ns
    }

    /// Inverse of [`encode`](Self::encode) for times produced by a valid
    /// configuration.
    pub fn decode(&self, time_ns: f64) -> (u64, usize, i32) {
        let run_id = libm::floor(time_ns * self.repetition_rate_hz / 1e9) as u64;
        let rest = time_ns - run_id as f64 / self.repetition_rate_hz * 1e9;
        let step = libm::round(rest / self.roundtrip_ns) as usize;
        let position =
            libm::round((rest - step as f64 * self.roundtrip_ns) / self.bin_separation_ns) as i32;
        (run_id, step, position)
    }
}

/// Output port of the polarizing beam splitter in front of the detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Detector {
    HPort,
    VPort,
}

impl Detector {
    pub fn for_coin(coin: Coin) -> Detector {
        match coin {
            Coin::H => Detector::HPort,
            Coin::V => Detector::VPort,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Detector::HPort => 0,
            Detector::VPort => 1,
        }
    }

    pub fn from_index(index: u8) -> Option<Detector> {
        match index {
            0 => Some(Detector::HPort),
            1 => Some(Detector::VPort),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClickEvent {
    pub run_id: u64,
    pub step: usize,
    pub position: i32,
    pub polarization: Coin,
    pub detector: Detector,
    pub time_ns: f64,
}

impl ClickEvent {
    pub fn mode(&self) -> Mode {
        Mode::new(self.position, self.polarization)
    }
}

/// Clicks suppressed by the detector dead time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DeadTimeStats {
    /// Second photon in the same time bin as an earlier click.
    pub same_bin: u64,
    /// Second photon in a different time bin.
    pub cross_bin: u64,
}

impl DeadTimeStats {
    pub fn merge(&mut self, other: DeadTimeStats) {
        self.same_bin += other.same_bin;
        self.cross_bin += other.cross_bin;
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    /// Sorted by `(run_id, time_ns)`.
    pub clicks: Vec<ClickEvent>,
    pub dead_time: DeadTimeStats,
}

struct Categorical {
    modes: Vec<Mode>,
    index: WeightedIndex<f64>,
}

impl Categorical {
    fn new(entries: impl IntoIterator<Item = (Mode, f64)>) -> Option<Self> {
        let (modes, weights): (Vec<Mode>, Vec<f64>) =
            entries.into_iter().filter(|&(_, w)| w > 0.0).unzip();
        let index = WeightedIndex::new(weights).ok()?;
        Some(Categorical { modes, index })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Mode {
        self.modes[self.index.sample(rng)]
    }
}

struct PairCategorical {
    pairs: Vec<(Mode, Mode)>,
    index: WeightedIndex<f64>,
}

/// Partner distributions after one photon left in a given mode.
struct Partner {
    mode: Mode,
    /// Entry `k` is the distribution at step `s1 + 1 + k`.
    later: Vec<Categorical>,
}

struct StepTables {
    first: Categorical,
    both: PairCategorical,
    partners: Vec<Partner>,
}

/// Precomputed sampling tables for one configuration.
pub struct Emulator {
    config: EmulatorConfig,
    binning: TimeBinning,
    /// Entry `s - 1` belongs to step `s`.
    steps: Vec<StepTables>,
}

impl Emulator {
    pub fn new(config: EmulatorConfig) -> Result<Self> {
        config.validate()?;
        let coin = CoinSpec::hadamard();
        let mut pair = initial_state();
        let mut steps = Vec::with_capacity(config.max_step);
        for s1 in 1..=config.max_step {
            pair = evolve_joint(&pair, 1, &coin);
            let weights = detection_weights(&pair, config.convention);
            let first =
                Categorical::new(weights.iter().map(|(&m, &w)| (m, w))).ok_or(Error::ZeroVector)?;
            let (pairs, probs): (Vec<_>, Vec<_>) =
                pair_detection_probabilities(&pair).into_iter().unzip();
            let both = PairCategorical {
                pairs,
                index: WeightedIndex::new(probs).map_err(|_| Error::ZeroVector)?,
            };
            let mut partners = Vec::new();
            for (&mode, &w) in &weights {
                if w < STATE_TOLERANCE {
                    continue;
                }
                let mut survivor = condition(&pair, mode, config.convention)?.survivor;
                let mut later = Vec::with_capacity(config.max_step - s1);
                for _ in s1 + 1..=config.max_step {
                    survivor = walk::evolve(&survivor, 1, &coin);
                    let dist = walk::mode_distribution(&survivor);
                    later.push(Categorical::new(dist.iter()).ok_or(Error::ZeroVector)?);
                }
                partners.push(Partner { mode, later });
            }
            steps.push(StepTables {
                first,
                both,
                partners,
            });
        }
        Ok(Emulator {
            binning: config.time_binning(),
            config,
            steps,
        })
    }

    pub fn config(&self) -> &EmulatorConfig {
        &self.config
    }

    /// Independent generator for one run: the master seed selects the key,
    /// the run index selects the stream.
    pub fn run_rng(&self, run_id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.rng_seed);
        rng.set_stream(run_id);
        rng
    }

    /// Extraction step of each photon, `None` if it stays in the loop.
    fn outcoupling_steps<R: Rng>(&self, rng: &mut R) -> [Option<usize>; 2] {
        let mut out = [None, None];
        for step in 1..=self.config.max_step {
            for slot in out.iter_mut().filter(|s| s.is_none()) {
                if rng.random_bool(self.config.outcoupling_prob) {
                    *slot = Some(step);
                }
            }
            if out.iter().all(Option::is_some) {
                break;
            }
        }
        out
    }

    /// Photons leaving the loop in one run as `(step, mode)`.
    fn extractions<R: Rng>(&self, rng: &mut R) -> Vec<(usize, Mode)> {
        let (s1, s2) = match self.outcoupling_steps(rng) {
            [None, None] => return Vec::new(),
            [Some(a), None] | [None, Some(a)] => (a, None),
            [Some(a), Some(b)] => (a.min(b), Some(a.max(b))),
        };
        let tables = &self.steps[s1 - 1];
        if s2 == Some(s1) {
            let (m1, m2) = tables.both.pairs[tables.both.index.sample(rng)];
            return alloc::vec![(s1, m1), (s1, m2)];
        }
        let first = tables.first.sample(rng);
        let mut out = alloc::vec![(s1, first)];
        if let Some(s2) = s2 {
            let partner = tables
                .partners
                .iter()
                .find(|p| p.mode == first)
                .expect("sampled modes have partner tables");
            out.push((s2, partner.later[s2 - s1 - 1].sample(rng)));
        }
        out
    }

    /// Clicks of one run, time ordered, and the dead-time losses.
    pub fn run(&self, run_id: u64) -> (Vec<ClickEvent>, DeadTimeStats) {
        let mut rng = self.run_rng(run_id);
        let mut stats = DeadTimeStats::default();
        if !rng.random_bool(self.config.pair_generation_prob) {
            return (Vec::new(), stats);
        }
        let mut clicks: Vec<ClickEvent> = Vec::new();
        for (step, mode) in self.extractions(&mut rng) {
            let detected = rng.random_bool(self.config.detector_efficiency)
                & rng.random_bool(self.config.setup_klyshko);
            if detected {
                clicks.push(ClickEvent {
                    run_id,
                    step,
                    position: mode.x,
                    polarization: mode.coin,
                    detector: Detector::for_coin(mode.coin),
                    time_ns: self.binning.encode(run_id, step, mode.x),
                });
            }
        }
        clicks.sort_by(|a, b| a.time_ns.total_cmp(&b.time_ns));

        let mut last: [Option<&ClickEvent>; 2] = [None, None];
        let mut kept = Vec::with_capacity(clicks.len());
        for click in &clicks {
            let channel = click.detector.index() as usize;
            match last[channel] {
                Some(prev) if click.time_ns - prev.time_ns < self.config.dead_time_ns => {
                    if prev.step == click.step && prev.position == click.position {
                        stats.same_bin += 1;
                    } else {
                        stats.cross_bin += 1;
                    }
                }
                _ => {
                    last[channel] = Some(click);
                    kept.push(*click);
                }
            }
        }
        (kept, stats)
    }
}

/// Runs `0..config.runs` in order.
pub fn simulate_runs(config: EmulatorConfig) -> Result<Simulation> {
    let emulator = Emulator::new(config)?;
    let mut clicks = Vec::new();
    let mut dead_time = DeadTimeStats::default();
    for run_id in 0..emulator.config.runs {
        let (c, s) = emulator.run(run_id);
        clicks.extend(c);
        dead_time.merge(s);
    }
    Ok(Simulation { clicks, dead_time })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub distribution: ModeDistribution,
    pub counts: BTreeMap<Mode, u64>,
    pub total: u64,
}

/// Histogram of the later click over runs with exactly two clicks, the
/// earlier one at `loss_step` in `loss_mode` and the later one at
/// `out_step`. Events must be grouped by run and time ordered within a run.
pub fn reconstruct_conditioned(
    events: &[ClickEvent],
    loss_step: usize,
    loss_mode: Mode,
    out_step: usize,
) -> Result<Reconstruction> {
    if loss_step == 0 || out_step <= loss_step {
        return Err(Error::InvalidLossStep {
            loss_step,
            out_step,
        });
    }
    let mut runs = 0;
    let mut two_click_runs = 0;
    let mut loss_matches = 0;
    let mut counts = BTreeMap::new();
    let mut total = 0u64;
    for run in events.chunk_by(|a, b| a.run_id == b.run_id) {
        runs += 1;
        let [first, second] = run else {
            continue;
        };
        two_click_runs += 1;
        if first.step != loss_step || first.mode() != loss_mode {
            continue;
        }
        loss_matches += 1;
        if second.step == out_step {
            *counts.entry(second.mode()).or_insert(0) += 1;
            total += 1;
        }
    }
    if total == 0 {
        return Err(Error::EmptySelection {
            runs,
            two_click_runs,
            loss_matches,
        });
    }
    let distribution = ModeDistribution::from_entries(
        out_step,
        counts.iter().map(|(&m, &c)| (m, c as f64 / total as f64)),
    );
    Ok(Reconstruction {
        distribution,
        counts,
        total,
    })
}

/// Expected rate of runs whose two photons are detected at steps `loss_step`
/// and `out_step > loss_step`, summed over modes.
pub fn effective_rate(config: &EmulatorConfig, loss_step: usize, out_step: usize) -> f64 {
    if loss_step == 0 || out_step <= loss_step {
        return 0.0;
    }
    let p = config.outcoupling_prob;
    let exit_at = |s: usize| p * libm::pow(1.0 - p, (s - 1) as f64);
    let detect = config.detector_efficiency * config.setup_klyshko;
    // either photon can leave first
    config.repetition_rate_hz
        * config.pair_generation_prob
        * 2.0
        * exit_at(loss_step)
        * exit_at(out_step)
        * detect
        * detect
}
