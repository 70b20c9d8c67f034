//! Quantities derived from walk outputs.

use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::distribution::{JointPositionDistribution, ModeDistribution, PositionDistribution};
use crate::error::{Error, Result};
use crate::two_photon::{
    self, condition, detection_weights, evolve_joint, initial_state, joint_position_distribution,
    ConditioningSpec, Convention,
};
use crate::walk::{self, CoinSpec, WalkerState};

mod recurrence;

pub use recurrence::{
    civilization_recurrence, monitored_recurrence_single, RecurrenceProtocol, RecurrenceSeries,
};

/// Normalized overlap `Σ p q / √(Σ p² Σ q²)` of two nonnegative arrays.
pub fn similarity(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::ShapeMismatch {
            left: p.len(),
            right: q.len(),
        });
    }
    if p.iter().chain(q).any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidEntry);
    }
    let pp: f64 = p.iter().map(|v| v * v).sum();
    let qq: f64 = q.iter().map(|v| v * v).sum();
    if pp == 0.0 || qq == 0.0 {
        return Err(Error::ZeroVector);
    }
    let pq: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
    Ok((pq / libm::sqrt(pp * qq)).min(1.0))
}

/// [`similarity`] over the union of the coin-resolved keys.
pub fn mode_similarity(a: &ModeDistribution, b: &ModeDistribution) -> Result<f64> {
    let (p, q) = a.aligned(b);
    similarity(&p, &q)
}

/// [`similarity`] over the union of the position keys.
pub fn position_similarity(a: &PositionDistribution, b: &PositionDistribution) -> Result<f64> {
    let (p, q) = a.aligned(b);
    similarity(&p, &q)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AveragingKind {
    /// Every admissible (loss step, mode) pair gets the same weight.
    #[default]
    UniformOverModes,
    /// Weights proportional to the conditioning weight of each pair.
    BornWeighted,
}

/// Weights `a_k` for averaging conditioned distributions. Loss modes whose
/// conditioning weight does not exceed `epsilon` are not admissible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingScheme {
    pub kind: AveragingKind,
    pub epsilon: f64,
}

impl AveragingScheme {
    pub fn uniform() -> Self {
        AveragingScheme {
            kind: AveragingKind::UniformOverModes,
            epsilon: 1e-12,
        }
    }

    pub fn born_weighted() -> Self {
        AveragingScheme {
            kind: AveragingKind::BornWeighted,
            epsilon: 1e-12,
        }
    }
}

impl Default for AveragingScheme {
    fn default() -> Self {
        Self::uniform()
    }
}

/// Mixture of the conditioned distributions at `out_step` over every
/// admissible loss mode of every step in `loss_steps`.
pub fn average_conditioned(
    loss_steps: &[usize],
    out_step: usize,
    scheme: &AveragingScheme,
    convention: Convention,
    coin: &CoinSpec,
) -> Result<ModeDistribution> {
    let mut steps = loss_steps.to_vec();
    steps.sort_unstable();
    steps.dedup();
    if let Some(&bad) = steps.iter().find(|&&m| m == 0 || m >= out_step) {
        return Err(Error::InvalidLossStep {
            loss_step: bad,
            out_step,
        });
    }

    let mut parts: Vec<(f64, ModeDistribution)> = Vec::new();
    let mut pair = initial_state();
    for &m in &steps {
        pair = evolve_joint(&pair, m - pair.step(), coin);
        for (mode, w) in detection_weights(&pair, convention) {
            if w <= scheme.epsilon {
                continue;
            }
            let outcome = condition(&pair, mode, convention)?;
            let survivor = walk::evolve(&outcome.survivor, out_step - m, coin);
            let a = match scheme.kind {
                AveragingKind::UniformOverModes => 1.0,
                AveragingKind::BornWeighted => outcome.weight,
            };
            parts.push((a, walk::mode_distribution(&survivor)));
        }
    }
    if parts.is_empty() {
        return Err(Error::EmptyAdmissibleSet);
    }

    let total: f64 = parts.iter().map(|(a, _)| a).sum();
    Ok(ModeDistribution::from_entries(
        out_step,
        parts
            .iter()
            .flat_map(|(a, d)| d.iter().map(move |(m, p)| (m, a / total * p))),
    ))
}

/// `Σ x² P(x) − (Σ x P(x))²`.
pub fn variance_1d(p: &PositionDistribution) -> f64 {
    let (m1, m2) = p.iter().fold((0.0, 0.0), |(m1, m2), (x, p)| {
        let x = x as f64;
        (m1 + x * p, m2 + x * x * p)
    });
    (m2 - m1 * m1).max(0.0)
}

/// Variance of the mean coordinate `(x + y) / 2`.
pub fn variance_2d(p: &JointPositionDistribution) -> f64 {
    let (m1, m2) = p.iter().fold((0.0, 0.0), |(m1, m2), ((x, y), p)| {
        let c = (x as f64 + y as f64) / 2.0;
        (m1 + c * p, m2 + c * c * p)
    });
    (m2 - m1 * m1).max(0.0)
}

/// Least-squares slope of `ln Var` against `ln t` over the steps in
/// `window`. Both window ends must appear in the series.
pub fn ballistic_fit(series: &[(usize, f64)], window: RangeInclusive<usize>) -> Result<f64> {
    let (start, end) = (*window.start(), *window.end());
    let covered = |t: usize| series.iter().any(|&(s, _)| s == t);
    if start == 0 || start >= end || !covered(start) || !covered(end) {
        return Err(Error::InvalidWindow { start, end });
    }
    let mut points = Vec::new();
    for &(t, var) in series.iter().filter(|(t, _)| window.contains(t)) {
        if var.is_nan() || var <= 0.0 {
            return Err(Error::NonPositiveVariance {
                step: t,
                variance: var,
            });
        }
        points.push((libm::log(t as f64), libm::log(var)));
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), (x, y)| {
        (sxy + (x - mx) * (y - my), sxx + (x - mx) * (x - mx))
    });
    Ok(sxy / sxx)
}

/// `(t, Var_1d)` of a single walker for every step from its current one up
/// to `max_step`.
pub fn walker_variance_series(
    initial: &WalkerState,
    max_step: usize,
    coin: &CoinSpec,
) -> Vec<(usize, f64)> {
    let mut state = initial.clone();
    let mut out = Vec::new();
    loop {
        out.push((
            state.step(),
            variance_1d(&walk::position_distribution(&state)),
        ));
        if state.step() >= max_step {
            break;
        }
        state = walk::evolve(&state, 1, coin);
    }
    out
}

/// `(t, Var_2d)` of the unconditioned two-photon walk for `t = 0..=max_step`.
pub fn joint_variance_series(max_step: usize, coin: &CoinSpec) -> Vec<(usize, f64)> {
    let mut pair = initial_state();
    let mut out = Vec::with_capacity(max_step + 1);
    loop {
        out.push((
            pair.step(),
            variance_2d(&joint_position_distribution(&pair)),
        ));
        if pair.step() >= max_step {
            break;
        }
        pair = evolve_joint(&pair, 1, coin);
    }
    out
}

/// `(t, Var_1d)` of the surviving photon from the loss step to `max_step`.
pub fn conditioned_variance_series(
    spec: &ConditioningSpec,
    max_step: usize,
    coin: &CoinSpec,
) -> Result<Vec<(usize, f64)>> {
    let outcome = two_photon::conditioned_survivor(spec, spec.loss_step(), coin)?;
    Ok(walker_variance_series(&outcome.survivor, max_step, coin))
}
