//! Return probabilities to the origin under a monitoring measurement.
//!
//! After every step the origin is checked; a detection ends the walk, a miss
//! removes the origin components and the walk continues from the renormalized
//! remainder.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::two_photon::{condition, detection_weights, evolve_joint, initial_state, Convention};
use crate::walk::{self, Coin, CoinSpec, Mode, WalkerState};
use crate::STATE_TOLERANCE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RecurrenceProtocol {
    SingleMonitored,
    Civilization,
}

/// Cumulative return probabilities `R(1), ..., R(horizon)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceSeries {
    pub protocol: RecurrenceProtocol,
    values: Vec<f64>,
}

impl RecurrenceSeries {
    pub fn horizon(&self) -> usize {
        self.values.len()
    }

    /// `R(t)` for `1 <= t <= horizon`.
    pub fn at(&self, t: usize) -> f64 {
        self.values[t - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }
}

/// Cumulative return series of one walker for `horizon` steps beyond its
/// current step.
fn monitored_values(initial: &WalkerState, horizon: usize, coin: &CoinSpec) -> Vec<f64> {
    let mut state = initial.clone();
    let mut survival = 1.0;
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        if survival > 0.0 {
            state = walk::evolve(&state, 1, coin);
            let total = state.norm_sqr();
            let q = state.clear_position(0) / total;
            if q >= 1.0 {
                survival = 0.0;
            } else {
                survival *= 1.0 - q;
                state.scale(1.0 / libm::sqrt(state.norm_sqr()));
            }
        }
        out.push(1.0 - survival);
    }
    out
}

/// `R(T) = 1 − Π_{t<=T} (1 − q_t)` where `q_t` is the origin probability of
/// the not-yet-detected branch after step `t`.
pub fn monitored_recurrence_single(
    initial: &WalkerState,
    horizon: usize,
    coin: &CoinSpec,
) -> RecurrenceSeries {
    RecurrenceSeries {
        protocol: RecurrenceProtocol::SingleMonitored,
        values: monitored_values(initial, horizon, coin),
    }
}

/// A photon detected at the origin at `step` with probability `probability`
/// (first detection), leaving the partner in a weighted ensemble.
struct Detection {
    step: usize,
    probability: f64,
    survivors: Vec<(f64, WalkerState)>,
}

/// Return probability of the second photon to the origin given that the
/// first photon was detected there at an earlier step.
///
/// Starting from the two-photon input state the origin is monitored for one
/// photon. A detection at step `t` leaves the partner in an ensemble of the
/// survivors conditioned on each origin mode, weighted by their conditioning
/// weights; the partner is then monitored from `t + 1`. A miss removes the
/// components with a photon at the origin. `R(T)` averages the partner's
/// return-within-`T` over first-detection steps `t < T`, weighted by the
/// first-detection probabilities. Entries with no possible earlier
/// detection are zero.
pub fn civilization_recurrence(
    horizon: usize,
    convention: Convention,
    coin: &CoinSpec,
) -> Result<RecurrenceSeries> {
    let mut pair = initial_state();
    let mut branch = 1.0;
    let mut detections = Vec::new();
    for t in 1..horizon {
        pair = evolve_joint(&pair, 1, coin);
        let p_det = pair.occupation_probability(0).clamp(0.0, 1.0);
        if p_det > STATE_TOLERANCE {
            let weights = detection_weights(&pair, convention);
            let mut survivors = Vec::new();
            for c in Coin::ALL {
                let mode = Mode::new(0, c);
                if weights.get(&mode).copied().unwrap_or(0.0) > STATE_TOLERANCE {
                    let outcome = condition(&pair, mode, convention)?;
                    survivors.push((outcome.weight, outcome.survivor));
                }
            }
            let total: f64 = survivors.iter().map(|(w, _)| w).sum();
            for (w, _) in &mut survivors {
                *w /= total;
            }
            detections.push(Detection {
                step: t,
                probability: branch * p_det,
                survivors,
            });
        }
        pair.remove_position(0);
        branch *= 1.0 - p_det;
        let norm = pair.norm_sqr();
        if norm <= STATE_TOLERANCE {
            break;
        }
        pair.scale(1.0 / libm::sqrt(norm));
    }
    if detections.is_empty() {
        return Err(Error::NoDetection { horizon });
    }

    // partner return series, indexed by steps after the detection
    let partner: Vec<Vec<f64>> = detections
        .iter()
        .map(|d| {
            let mut acc = alloc::vec![0.0; horizon - d.step];
            for (w, s) in &d.survivors {
                for (a, r) in acc
                    .iter_mut()
                    .zip(monitored_values(s, horizon - d.step, coin))
                {
                    *a += w * r;
                }
            }
            acc
        })
        .collect();

    let values = (1..=horizon)
        .map(|big_t| {
            let (num, den) = detections
                .iter()
                .zip(&partner)
                .filter(|(d, _)| d.step < big_t)
                .fold((0.0, 0.0), |(num, den), (d, r)| {
                    (
                        num + d.probability * r[big_t - d.step - 1],
                        den + d.probability,
                    )
                });
            if den > 0.0 {
                num / den
            } else {
                0.0
            }
        })
        .collect();
    Ok(RecurrenceSeries {
        protocol: RecurrenceProtocol::Civilization,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_walker_first_steps() {
        let r = monitored_recurrence_single(
            &WalkerState::basis(Mode::new(0, Coin::H)),
            30,
            &CoinSpec::hadamard(),
        );
        assert_eq!(r.horizon(), 30);
        assert_eq!(r.at(1), 0.0);
        assert!((r.at(2) - 0.5).abs() < 1e-15);
        assert!(r.is_monotone());
        assert!(r.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn civilization_needs_a_detection() {
        let coin = CoinSpec::hadamard();
        for t in [1, 2] {
            assert_eq!(
                civilization_recurrence(t, Convention::PaperProjector, &coin),
                Err(Error::NoDetection { horizon: t })
            );
        }
        let r = civilization_recurrence(3, Convention::PaperProjector, &coin).unwrap();
        assert_eq!(r.values(), &[0.0, 0.0, 0.0]);
    }
}
