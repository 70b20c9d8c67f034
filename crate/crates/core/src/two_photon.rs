//! Two indistinguishable photons walking under `U ⊗ U`, and the heralded
//! removal of one of them.
//!
//! A two-photon state is a dense complex matrix `A[m1][m2]` over the modes of
//! a shared position range. Bosonic states keep `A` exactly symmetric: every
//! operation writes each off-diagonal pair from a single computed value.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::array;
use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;

use crate::distribution::{JointPositionDistribution, ModeDistribution};
use crate::error::{Error, Result};
use crate::walk::{self, Coin, CoinMatrix, CoinSpec, Mode, WalkerState};
use crate::STATE_TOLERANCE;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How a doubly occupied loss mode contributes to the surviving photon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// Projector with coefficient 1 on `|m>|m>` and `1/√2` on each ordered
    /// off-diagonal pair, so the survivor gets `A[m][m]` and `√2·A[m][m']`.
    #[default]
    PaperProjector,
    /// Annihilation operator `a_m`: the diagonal coefficient is also `√2`,
    /// and the Born weights over all modes sum to two.
    Annihilation,
}

impl Convention {
    fn diagonal_factor(self) -> f64 {
        match self {
            Convention::PaperProjector => 1.0,
            Convention::Annihilation => SQRT_2,
        }
    }
}

/// Dense square matrix over the modes of positions `lo..lo + width/2`.
#[derive(Debug, Clone, PartialEq)]
struct PairTensor {
    lo: i32,
    width: usize,
    data: Vec<Complex64>,
}

impl PairTensor {
    fn zeros(lo: i32, width: usize) -> Self {
        PairTensor {
            lo,
            width,
            data: vec![ZERO; width * width],
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.width + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[i * self.width + j] = value;
    }

    /// Writes `value` at `(i, j)` and `(j, i)`.
    #[inline]
    fn set_sym(&mut self, i: usize, j: usize, value: Complex64) {
        self.set(i, j, value);
        self.set(j, i, value);
    }

    fn index_of(&self, mode: Mode) -> Option<usize> {
        let offset = mode.x.checked_sub(self.lo)?;
        let i = 2 * usize::try_from(offset).ok()? + mode.coin.index();
        (i < self.width).then_some(i)
    }

    fn mode_at(&self, i: usize) -> Mode {
        Mode::new(self.lo + (i / 2) as i32, Coin::from_index(i))
    }

    fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum()
    }

    fn scale(&mut self, factor: f64) {
        for a in &mut self.data {
            *a *= factor;
        }
    }

    fn is_symmetric(&self) -> bool {
        (0..self.width).all(|i| (i + 1..self.width).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

/// Symmetric two-photon amplitude tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonState {
    step: usize,
    tensor: PairTensor,
}

impl TwoPhotonState {
    /// Builds a state from `(m1, m2, amplitude)` entries, each written to both
    /// `A[m1][m2]` and `A[m2][m1]`. Later entries overwrite earlier ones.
    pub fn from_entries(
        step: usize,
        entries: impl IntoIterator<Item = (Mode, Mode, Complex64)>,
    ) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().collect();
        let xs = entries.iter().flat_map(|(a, b, _)| [a.x, b.x]);
        let lo = xs.clone().min().unwrap_or(0);
        let hi = xs.max().unwrap_or(0);
        let mut tensor = PairTensor::zeros(lo, 2 * (hi - lo + 1) as usize);
        for (a, b, amp) in entries {
            let (i, j) = (tensor.index_of(a).unwrap(), tensor.index_of(b).unwrap());
            tensor.set_sym(i, j, amp);
        }
        let norm_sqr = tensor.norm_sqr();
        if (norm_sqr - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(TwoPhotonState { step, tensor })
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// `A[m1][m2]`; zero outside the stored range.
    pub fn amplitude(&self, m1: Mode, m2: Mode) -> Complex64 {
        match (self.tensor.index_of(m1), self.tensor.index_of(m2)) {
            (Some(i), Some(j)) => self.tensor.get(i, j),
            _ => ZERO,
        }
    }

    /// Modes of the stored range, in index order.
    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.tensor.width).map(|i| self.tensor.mode_at(i))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.tensor.norm_sqr()
    }

    pub fn is_symmetric(&self) -> bool {
        self.tensor.is_symmetric()
    }

    /// Probability that at least one photon sits at position `x`.
    pub(crate) fn occupation_probability(&self, x: i32) -> f64 {
        let w = self.tensor.width;
        let mut miss = 0.0;
        for i in 0..w {
            if self.tensor.mode_at(i).x == x {
                continue;
            }
            for j in 0..w {
                if self.tensor.mode_at(j).x != x {
                    miss += self.tensor.get(i, j).norm_sqr();
                }
            }
        }
        self.norm_sqr() - miss
    }

    /// Zeroes every component with a photon at position `x`. The result is
    /// not renormalized.
    pub(crate) fn remove_position(&mut self, x: i32) {
        let w = self.tensor.width;
        for i in 0..w {
            if self.tensor.mode_at(i).x == x {
                for j in 0..w {
                    self.tensor.set_sym(i, j, ZERO);
                }
            }
        }
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        self.tensor.scale(factor);
    }
}

/// Product `ψ1 ⊗ ψ2` of two distinguishable walkers, without symmetrization.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalPairState {
    step: usize,
    tensor: PairTensor,
}

impl ClassicalPairState {
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn amplitude(&self, m1: Mode, m2: Mode) -> Complex64 {
        match (self.tensor.index_of(m1), self.tensor.index_of(m2)) {
            (Some(i), Some(j)) => self.tensor.get(i, j),
            _ => ZERO,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.tensor.norm_sqr()
    }

    pub fn is_symmetric(&self) -> bool {
        self.tensor.is_symmetric()
    }
}

fn common_range(psi1: &WalkerState, psi2: &WalkerState) -> (i32, i32) {
    let (a, b) = (psi1.positions(), psi2.positions());
    (*a.start().min(b.start()), *a.end().max(b.end()))
}

/// Bosonic combination `(ψ1⊗ψ2 + ψ2⊗ψ1) / √(2(1 + |<ψ1|ψ2>|²))`.
pub fn symmetrize(psi1: &WalkerState, psi2: &WalkerState) -> Result<TwoPhotonState> {
    if psi1.step() != psi2.step() {
        return Err(Error::StepMismatch {
            left: psi1.step(),
            right: psi2.step(),
        });
    }
    let (lo, hi) = common_range(psi1, psi2);
    let (a, b) = (psi1.padded(lo, hi), psi2.padded(lo, hi));
    let overlap = psi1.inner(psi2).norm_sqr();
    let inv_norm = 1.0 / libm::sqrt(2.0 * (1.0 + overlap));
    let mut tensor = PairTensor::zeros(lo, a.len());
    for i in 0..a.len() {
        for j in i..a.len() {
            tensor.set_sym(i, j, (a[i] * b[j] + b[i] * a[j]) * inv_norm);
        }
    }
    Ok(TwoPhotonState {
        step: psi1.step(),
        tensor,
    })
}

/// `(|0,H>|0,V> + |0,V>|0,H>)/√2` at step 0.
pub fn initial_state() -> TwoPhotonState {
    let mut tensor = PairTensor::zeros(0, 2);
    tensor.set_sym(0, 1, Complex64::new(FRAC_1_SQRT_2, 0.0));
    TwoPhotonState { step: 0, tensor }
}

pub fn classical_product(psi1: &WalkerState, psi2: &WalkerState) -> Result<ClassicalPairState> {
    if psi1.step() != psi2.step() {
        return Err(Error::StepMismatch {
            left: psi1.step(),
            right: psi2.step(),
        });
    }
    let (lo, hi) = common_range(psi1, psi2);
    let (a, b) = (psi1.padded(lo, hi), psi2.padded(lo, hi));
    let mut tensor = PairTensor::zeros(lo, a.len());
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            tensor.set(i, j, ai * bj);
        }
    }
    Ok(ClassicalPairState {
        step: psi1.step(),
        tensor,
    })
}

/// Expectation of the symmetrized pair projector
/// `(|i,j><i,j| + |j,i><j,i|)/2` on a product state.
pub fn classical_projection_prob(state: &ClassicalPairState, i: Mode, j: Mode) -> f64 {
    0.5 * (state.amplitude(i, j).norm_sqr() + state.amplitude(j, i).norm_sqr())
}

/// One application of `U ⊗ U`, coin then shift on both slots.
fn step_pair(tensor: &PairTensor, step: usize, coin: &CoinSpec) -> PairTensor {
    let npos = tensor.width / 2;
    let mats = coin.matrices(tensor.lo, npos, step);
    let mut out = PairTensor::zeros(tensor.lo - 1, 2 * (npos + 2));
    // after the shift, (p, H) lands on position index p + 2 and (p, V) on p
    let dest = |p: usize, c: usize| if c == 0 { 2 * (p + 2) } else { 2 * p + 1 };
    for px in 0..npos {
        for py in px..npos {
            let block = coin_block(tensor, px, py, mats[px], mats[py]);
            for (a, row) in block.iter().enumerate() {
                for (b, &value) in row.iter().enumerate() {
                    out.set_sym(dest(px, a), dest(py, b), value);
                }
            }
        }
    }
    out
}

/// `Cx · X · Cyᵀ` for the 2x2 coin block `X` of positions (px, py).
#[inline]
fn coin_block(
    t: &PairTensor,
    px: usize,
    py: usize,
    cx: CoinMatrix,
    cy: CoinMatrix,
) -> [[Complex64; 2]; 2] {
    let x = [
        [t.get(2 * px, 2 * py), t.get(2 * px, 2 * py + 1)],
        [t.get(2 * px + 1, 2 * py), t.get(2 * px + 1, 2 * py + 1)],
    ];
    let y: [[Complex64; 2]; 2] =
        array::from_fn(|k| array::from_fn(|b| x[k][0] * cy.entry(b, 0) + x[k][1] * cy.entry(b, 1)));
    array::from_fn(|a| array::from_fn(|b| y[0][b] * cx.entry(a, 0) + y[1][b] * cx.entry(a, 1)))
}

/// `n` applications of `U ⊗ U`.
pub fn evolve_joint(state: &TwoPhotonState, n: usize, coin: &CoinSpec) -> TwoPhotonState {
    let mut out = state.clone();
    for _ in 0..n {
        out.tensor = step_pair(&out.tensor, out.step, coin);
        out.step += 1;
    }
    out
}

/// Surviving photon after one photon was removed in a known mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionedOutcome {
    /// Normalized state of the remaining photon.
    pub survivor: WalkerState,
    /// Squared norm of the projected state before renormalization.
    pub weight: f64,
}

/// Unnormalized survivor amplitudes, or `None` if `mode` is outside the
/// stored range.
fn projected(state: &TwoPhotonState, mode: Mode, convention: Convention) -> Option<Vec<Complex64>> {
    let t = &state.tensor;
    let i = t.index_of(mode)?;
    Some(
        (0..t.width)
            .map(|j| {
                let factor = if j == i {
                    convention.diagonal_factor()
                } else {
                    SQRT_2
                };
                t.get(i, j) * factor
            })
            .collect(),
    )
}

/// Removes one photon from `mode` and returns the renormalized survivor.
pub fn condition(
    state: &TwoPhotonState,
    mode: Mode,
    convention: Convention,
) -> Result<ConditionedOutcome> {
    let amps = projected(state, mode, convention).unwrap_or_default();
    let weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if weight < STATE_TOLERANCE {
        return Err(Error::ZeroConditioningProbability { mode, weight });
    }
    let mut survivor = WalkerState::from_raw(state.step, state.tensor.lo, amps);
    survivor.scale(1.0 / libm::sqrt(weight));
    Ok(ConditionedOutcome { survivor, weight })
}

/// Where and how a photon is removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConditioningSpec {
    loss_step: usize,
    mode: Mode,
    convention: Convention,
}

impl ConditioningSpec {
    /// Fails unless `loss_step >= 1` and `mode` is reachable from the origin
    /// in `loss_step` steps.
    pub fn new(loss_step: usize, mode: Mode, convention: Convention) -> Result<Self> {
        if loss_step == 0 {
            return Err(Error::InvalidLossStep {
                loss_step,
                out_step: loss_step,
            });
        }
        if !mode.in_light_cone(loss_step) {
            return Err(Error::OutsideLightCone {
                mode,
                step: loss_step,
            });
        }
        Ok(ConditioningSpec {
            loss_step,
            mode,
            convention,
        })
    }

    pub fn loss_step(&self) -> usize {
        self.loss_step
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }
}

/// Evolves the pair from the input state to the loss step, removes one
/// photon and evolves the survivor to `out_step`. The survivor is normalized;
/// the weight is that of the removal.
pub fn conditioned_survivor(
    spec: &ConditioningSpec,
    out_step: usize,
    coin: &CoinSpec,
) -> Result<ConditionedOutcome> {
    if out_step < spec.loss_step {
        return Err(Error::InvalidLossStep {
            loss_step: spec.loss_step,
            out_step,
        });
    }
    let pair = evolve_joint(&initial_state(), spec.loss_step, coin);
    let outcome = condition(&pair, spec.mode, spec.convention)?;
    Ok(ConditionedOutcome {
        survivor: walk::evolve(&outcome.survivor, out_step - spec.loss_step, coin),
        weight: outcome.weight,
    })
}

/// Coin-resolved distribution of the survivor at `out_step` and the
/// conditioning weight.
pub fn conditioned_distribution(
    spec: &ConditioningSpec,
    out_step: usize,
    coin: &CoinSpec,
) -> Result<(ModeDistribution, f64)> {
    let outcome = conditioned_survivor(spec, out_step, coin)?;
    Ok((walk::mode_distribution(&outcome.survivor), outcome.weight))
}

/// Conditioning weight of every mode in the stored range.
pub fn detection_weights(state: &TwoPhotonState, convention: Convention) -> BTreeMap<Mode, f64> {
    let t = &state.tensor;
    let diag = convention.diagonal_factor() * convention.diagonal_factor();
    (0..t.width)
        .map(|i| {
            let w = (0..t.width)
                .map(|j| {
                    let p = t.get(i, j).norm_sqr();
                    if i == j {
                        diag * p
                    } else {
                        2.0 * p
                    }
                })
                .sum();
            (t.mode_at(i), w)
        })
        .collect()
}

/// Single-photon marginal `Σ_m' |A[m][m']|²` (the partial trace over the
/// other slot).
pub fn marginal_distribution(state: &TwoPhotonState) -> ModeDistribution {
    let t = &state.tensor;
    ModeDistribution::from_entries(
        state.step,
        (0..t.width)
            .map(|i| {
                let p: f64 = (0..t.width).map(|j| t.get(i, j).norm_sqr()).sum();
                (t.mode_at(i), p)
            })
            .filter(|&(_, p)| p != 0.0),
    )
}

/// `P(x, y) = Σ_{c1,c2} |A[(x,c1)][(y,c2)]|²`; exact zeros are omitted.
pub fn joint_position_distribution(state: &TwoPhotonState) -> JointPositionDistribution {
    let t = &state.tensor;
    let npos = t.width / 2;
    let mut entries = Vec::new();
    for px in 0..npos {
        for py in 0..npos {
            let p: f64 = (0..2)
                .flat_map(|a| (0..2).map(move |b| (a, b)))
                .map(|(a, b)| t.get(2 * px + a, 2 * py + b).norm_sqr())
                .sum();
            if p != 0.0 {
                entries.push(((t.lo + px as i32, t.lo + py as i32), p));
            }
        }
    }
    JointPositionDistribution::from_entries(state.step, entries)
}

/// Probabilities for extracting both photons at once, over unordered mode
/// pairs `(m1 <= m2)`: `|A[m][m]|²` on the diagonal and `2|A[m1][m2]|²`
/// otherwise.
pub fn pair_detection_probabilities(state: &TwoPhotonState) -> Vec<((Mode, Mode), f64)> {
    let t = &state.tensor;
    let mut out = Vec::new();
    for i in 0..t.width {
        for j in i..t.width {
            let p = t.get(i, j).norm_sqr();
            if p != 0.0 {
                let p = if i == j { p } else { 2.0 * p };
                out.push(((t.mode_at(i), t.mode_at(j)), p));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{evolve, mode_distribution};

    const A: Mode = Mode::new(1, Coin::H);
    const B: Mode = Mode::new(-1, Coin::V);
    const H0: Mode = Mode::new(0, Coin::H);
    const V0: Mode = Mode::new(0, Coin::V);

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bunched() -> TwoPhotonState {
        TwoPhotonState::from_entries(1, [(A, A, c(FRAC_1_SQRT_2)), (B, B, c(-FRAC_1_SQRT_2))])
            .unwrap()
    }

    #[test]
    fn initial_state_is_exact() {
        let s = initial_state();
        assert_eq!(s.amplitude(H0, V0), c(FRAC_1_SQRT_2));
        assert_eq!(s.amplitude(V0, H0), c(FRAC_1_SQRT_2));
        assert_eq!(s.amplitude(H0, H0), ZERO);
        assert_eq!(s.amplitude(V0, V0), ZERO);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        let m = marginal_distribution(&s);
        assert!((m.get(H0) - 0.5).abs() < 1e-15 && (m.get(V0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn symmetrize_cases() {
        let s = symmetrize(&WalkerState::basis(H0), &WalkerState::basis(V0)).unwrap();
        assert!((s.amplitude(H0, V0) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(s.is_symmetric());

        let s = symmetrize(&WalkerState::basis(H0), &WalkerState::basis(H0)).unwrap();
        assert!((s.amplitude(H0, H0) - c(1.0)).norm() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);

        // <ψ1|ψ2> = 1/√2, normalization √3
        let plus = WalkerState::localized(0, c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)).unwrap();
        let s = symmetrize(&plus, &WalkerState::basis(H0)).unwrap();
        let n = libm::sqrt(3.0);
        assert!((s.amplitude(H0, H0) - c(2.0 * FRAC_1_SQRT_2 / n)).norm() < 1e-12);
        assert!((s.amplitude(H0, V0) - c(FRAC_1_SQRT_2 / n)).norm() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);

        let later = evolve(&WalkerState::basis(H0), 1, &CoinSpec::hadamard());
        assert_eq!(
            symmetrize(&later, &WalkerState::basis(H0)),
            Err(Error::StepMismatch { left: 1, right: 0 })
        );
    }

    #[test]
    fn classical_tensor() {
        let s = classical_product(&WalkerState::basis(H0), &WalkerState::basis(V0)).unwrap();
        assert_eq!(s.amplitude(H0, V0), c(1.0));
        assert_eq!(s.amplitude(V0, H0), ZERO);
        assert!(!s.is_symmetric());
        assert_eq!(classical_projection_prob(&s, H0, V0), 0.5);
        assert_eq!(classical_projection_prob(&s, V0, H0), 0.5);
        assert_eq!(classical_projection_prob(&s, H0, H0), 0.0);

        let plus = WalkerState::symmetric_origin();
        let same = classical_product(&plus, &plus).unwrap();
        assert!(same.is_symmetric());
        assert!((same.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn first_step_bunches() {
        let s = evolve_joint(&initial_state(), 1, &CoinSpec::hadamard());
        assert_eq!(s.step(), 1);
        assert!((s.amplitude(A, A) - c(FRAC_1_SQRT_2)).norm() < 1e-12);
        assert!((s.amplitude(B, B) - c(-FRAC_1_SQRT_2)).norm() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let p = joint_position_distribution(&s);
        assert_eq!(p.len(), 2);
        assert!((p.get((1, 1)) - 0.5).abs() < 1e-12);
        assert!((p.get((-1, -1)) - 0.5).abs() < 1e-12);

        assert_eq!(evolve_joint(&s, 0, &CoinSpec::hadamard()), s);
        assert!(evolve_joint(&s, 5, &CoinSpec::hadamard()).is_symmetric());
        assert!((joint_position_distribution(&initial_state()).get((0, 0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conditioning_on_bunched_state() {
        let out = condition(&bunched(), B, Convention::PaperProjector).unwrap();
        assert!((out.weight - 0.5).abs() < 1e-12);
        assert!((out.survivor.amplitude(B) - c(-1.0)).norm() < 1e-12);
        assert!((out.survivor.norm_sqr() - 1.0).abs() < 1e-12);

        assert!(matches!(
            condition(&bunched(), H0, Convention::PaperProjector),
            Err(Error::ZeroConditioningProbability { .. })
        ));
        assert!(matches!(
            condition(&bunched(), Mode::new(40, Coin::H), Convention::Annihilation),
            Err(Error::ZeroConditioningProbability { .. })
        ));

        let out = condition(&initial_state(), H0, Convention::PaperProjector).unwrap();
        assert!((out.weight - 1.0).abs() < 1e-12);
        assert!((out.survivor.amplitude(V0) - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn weights() {
        let w = detection_weights(&bunched(), Convention::PaperProjector);
        assert!((w[&A] - 0.5).abs() < 1e-12 && (w[&B] - 0.5).abs() < 1e-12);
        assert_eq!(w[&H0], 0.0);
        let w = detection_weights(&bunched(), Convention::Annihilation);
        assert!((w[&A] - 1.0).abs() < 1e-12 && (w[&B] - 1.0).abs() < 1e-12);
        for conv in [Convention::PaperProjector, Convention::Annihilation] {
            let w = detection_weights(&initial_state(), conv);
            assert!((w[&H0] - 1.0).abs() < 1e-12 && (w[&V0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn conditioned_distribution_step_one() {
        let spec = ConditioningSpec::new(1, B, Convention::PaperProjector).unwrap();
        let (d, w) = conditioned_distribution(&spec, 2, &CoinSpec::hadamard()).unwrap();
        assert!((w - 0.5).abs() < 1e-12);
        assert_eq!(d.len(), 2);
        assert!((d.get(Mode::new(0, Coin::H)) - 0.5).abs() < 1e-12);
        assert!((d.get(Mode::new(-2, Coin::V)) - 0.5).abs() < 1e-12);

        let (same, _) = conditioned_distribution(&spec, 1, &CoinSpec::hadamard()).unwrap();
        assert_eq!(same.get(B), 1.0);
        assert_eq!(
            conditioned_distribution(&spec, 0, &CoinSpec::hadamard()),
            Err(Error::InvalidLossStep {
                loss_step: 1,
                out_step: 0
            })
        );
    }

    #[test]
    fn spec_validation() {
        assert!(ConditioningSpec::new(0, H0, Convention::PaperProjector).is_err());
        assert!(matches!(
            ConditioningSpec::new(3, Mode::new(2, Coin::H), Convention::PaperProjector),
            Err(Error::OutsideLightCone { .. })
        ));
    }

    #[test]
    fn pair_probabilities_sum_to_one() {
        let s = evolve_joint(&initial_state(), 4, &CoinSpec::hadamard());
        let total: f64 = pair_detection_probabilities(&s)
            .iter()
            .map(|(_, p)| p)
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
        let m = mode_distribution(&evolve(&WalkerState::basis(H0), 0, &CoinSpec::hadamard()));
        assert_eq!(m.get(H0), 1.0);
    }

    #[test]
    fn position_removal() {
        let mut s = evolve_joint(&initial_state(), 2, &CoinSpec::hadamard());
        let p0 = s.occupation_probability(0);
        let before = s.norm_sqr();
        s.remove_position(0);
        assert!((before - s.norm_sqr() - p0).abs() < 1e-12);
        assert_eq!(s.occupation_probability(0), 0.0);
        assert!(s.is_symmetric());
    }
}
