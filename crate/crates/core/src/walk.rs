//! Single-walker discrete-time quantum walk on the integer line.
//!
//! A step is the coin `C(φ)` followed by the polarization-dependent shift
//! `S`: `H` moves one site right, `V` one site left. States are stored
//! densely over the contiguous position range they can occupy, which grows by
//! one site on each side per step.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;
use core::ops::RangeInclusive;
use core::str::FromStr;

use num_complex::Complex64;

use crate::distribution::{ModeDistribution, PositionDistribution};
use crate::error::{Error, Result};
use crate::STATE_TOLERANCE;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Polarization of a photon, the coin of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coin {
    H,
    V,
}

impl Coin {
    pub const ALL: [Coin; 2] = [Coin::H, Coin::V];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Coin::H => 0,
            Coin::V => 1,
        }
    }

    #[inline]
    pub fn from_index(index: usize) -> Coin {
        if index & 1 == 0 {
            Coin::H
        } else {
            Coin::V
        }
    }

    pub fn flipped(self) -> Coin {
        match self {
            Coin::H => Coin::V,
            Coin::V => Coin::H,
        }
    }

    /// Displacement applied by the shift operator.
    #[inline]
    pub fn shift(self) -> i32 {
        match self {
            Coin::H => 1,
            Coin::V => -1,
        }
    }
}

impl fmt::Display for Coin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coin::H => "H",
            Coin::V => "V",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseModeError;

impl fmt::Display for ParseModeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected a mode of the form `x,H` or `x,V`")
    }
}

impl core::error::Error for ParseModeError {}

impl FromStr for Coin {
    type Err = ParseModeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "H" | "h" => Ok(Coin::H),
            "V" | "v" => Ok(Coin::V),
            _ => Err(ParseModeError),
        }
    }
}

/// A (position, coin) basis label for one walker.
///
/// Orders by position first, then `H` before `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub x: i32,
    pub coin: Coin,
}

impl Mode {
    pub const fn new(x: i32, coin: Coin) -> Self {
        Mode { x, coin }
    }

    /// Image under `x -> -x`, `H <-> V`.
    pub fn mirrored(self) -> Mode {
        Mode::new(-self.x, self.coin.flipped())
    }

    /// Whether a walker starting at the origin can occupy this mode after
    /// `step` steps.
    pub fn in_light_cone(self, step: usize) -> bool {
        let reach = self.x.unsigned_abs() as usize;
        reach <= step && (reach % 2 == step % 2)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.coin)
    }
}

impl FromStr for Mode {
    type Err = ParseModeError;

    /// Accepts `x,c` with optional surrounding parentheses, e.g. `-1,V`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(s);
        let (x, coin) = s.split_once(',').ok_or(ParseModeError)?;
        let x = x.trim().parse().map_err(|_| ParseModeError)?;
        Ok(Mode::new(x, coin.parse()?))
    }
}

/// Real 2x2 half-wave-plate matrix `[[cos φ, sin φ], [sin φ, -cos φ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix {
    pub cos: f64,
    pub sin: f64,
}

impl CoinMatrix {
    pub fn from_degrees(degrees: f64) -> Self {
        // 45° is the Hadamard coin; use the exact constant for both entries so
        // mirror-symmetric walks stay bit-identical.
        if degrees == 45.0 {
            return CoinMatrix {
                cos: FRAC_1_SQRT_2,
                sin: FRAC_1_SQRT_2,
            };
        }
        let rad = degrees.to_radians();
        CoinMatrix {
            cos: libm::cos(rad),
            sin: libm::sin(rad),
        }
    }

    #[inline]
    pub fn apply(self, h: Complex64, v: Complex64) -> (Complex64, Complex64) {
        (h * self.cos + v * self.sin, h * self.sin - v * self.cos)
    }

    #[inline]
    pub fn entry(self, row: usize, col: usize) -> f64 {
        match (row, col) {
            (0, 0) => self.cos,
            (1, 1) => -self.cos,
            _ => self.sin,
        }
    }
}

type PhaseFn = dyn Fn(i32, usize) -> f64 + Send + Sync;

/// Coin angle as a function of position and step, in degrees.
#[derive(Clone)]
pub enum CoinSpec {
    Constant(f64),
    Varying(Arc<PhaseFn>),
}

impl CoinSpec {
    pub fn hadamard() -> Self {
        CoinSpec::Constant(45.0)
    }

    pub fn varying(phase: impl Fn(i32, usize) -> f64 + Send + Sync + 'static) -> Self {
        CoinSpec::Varying(Arc::new(phase))
    }

    pub fn angle(&self, x: i32, step: usize) -> f64 {
        match self {
            CoinSpec::Constant(deg) => *deg,
            CoinSpec::Varying(phase) => phase(x, step),
        }
    }

    pub fn matrix(&self, x: i32, step: usize) -> CoinMatrix {
        CoinMatrix::from_degrees(self.angle(x, step))
    }

    /// Coin matrices for the positions `lo..lo + count` at `step`.
    pub(crate) fn matrices(&self, lo: i32, count: usize, step: usize) -> Vec<CoinMatrix> {
        match self {
            CoinSpec::Constant(deg) => vec![CoinMatrix::from_degrees(*deg); count],
            CoinSpec::Varying(_) => (0..count)
                .map(|i| self.matrix(lo + i as i32, step))
                .collect(),
        }
    }
}

impl Default for CoinSpec {
    fn default() -> Self {
        CoinSpec::hadamard()
    }
}

impl fmt::Debug for CoinSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoinSpec::Constant(deg) => f.debug_tuple("Constant").field(deg).finish(),
            CoinSpec::Varying(_) => f.write_str("Varying(..)"),
        }
    }
}

/// Amplitudes of one walker over a contiguous position range.
///
/// `amps[2 * (x - lo) + coin]` holds the amplitude of `|x, coin>`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkerState {
    step: usize,
    lo: i32,
    amps: Vec<Complex64>,
}

impl WalkerState {
    /// `|mode>` at step 0.
    pub fn basis(mode: Mode) -> Self {
        let mut amps = vec![ZERO; 2];
        amps[mode.coin.index()] = Complex64::new(1.0, 0.0);
        WalkerState {
            step: 0,
            lo: mode.x,
            amps,
        }
    }

    /// `|x> ⊗ (h|H> + v|V>)` at step 0.
    pub fn localized(x: i32, h: Complex64, v: Complex64) -> Result<Self> {
        Self::checked(WalkerState {
            step: 0,
            lo: x,
            amps: vec![h, v],
        })
    }

    /// `|0> ⊗ (|H> + i|V>)/√2`, whose position distribution is mirror
    /// symmetric.
    pub fn symmetric_origin() -> Self {
        WalkerState {
            step: 0,
            lo: 0,
            amps: vec![
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(0.0, FRAC_1_SQRT_2),
            ],
        }
    }

    /// Builds a normalized state from (mode, amplitude) pairs. Repeated modes
    /// add up.
    pub fn from_amplitudes(
        step: usize,
        entries: impl IntoIterator<Item = (Mode, Complex64)>,
    ) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().collect();
        let lo = entries.iter().map(|(m, _)| m.x).min().unwrap_or(0);
        let hi = entries.iter().map(|(m, _)| m.x).max().unwrap_or(0);
        let mut amps = vec![ZERO; 2 * (hi - lo + 1) as usize];
        for (mode, amp) in entries {
            amps[2 * (mode.x - lo) as usize + mode.coin.index()] += amp;
        }
        Self::checked(WalkerState { step, lo, amps })
    }

    pub(crate) fn from_raw(step: usize, lo: i32, amps: Vec<Complex64>) -> Self {
        debug_assert!(amps.len().is_multiple_of(2) && !amps.is_empty());
        WalkerState { step, lo, amps }
    }

    fn checked(state: WalkerState) -> Result<Self> {
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Same amplitudes, relabelled as belonging to `step`.
    pub fn with_step(mut self, step: usize) -> Self {
        self.step = step;
        self
    }

    pub fn step(&self) -> usize {
        self.step
    }

    /// Position range covered by the storage (not necessarily all occupied).
    pub fn positions(&self) -> RangeInclusive<i32> {
        self.lo..=self.hi()
    }

    fn hi(&self) -> i32 {
        self.lo + (self.amps.len() / 2) as i32 - 1
    }

    /// Zeroes both coin amplitudes at `x` and returns the probability removed.
    pub(crate) fn clear_position(&mut self, x: i32) -> f64 {
        if !self.positions().contains(&x) {
            return 0.0;
        }
        let i = 2 * (x - self.lo) as usize;
        let removed = self.amps[i].norm_sqr() + self.amps[i + 1].norm_sqr();
        self.amps[i] = ZERO;
        self.amps[i + 1] = ZERO;
        removed
    }

    pub fn amplitude(&self, mode: Mode) -> Complex64 {
        if !self.positions().contains(&mode.x) {
            return ZERO;
        }
        self.amps[2 * (mode.x - self.lo) as usize + mode.coin.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Mode, Complex64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, &a)| (Mode::new(self.lo + (i / 2) as i32, Coin::from_index(i)), a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &WalkerState) -> Complex64 {
        self.iter()
            .map(|(m, a)| a.conj() * other.amplitude(m))
            .sum()
    }

    /// Copy of the state stored over `lo..=hi`, which must contain the
    /// current range.
    pub(crate) fn padded(&self, lo: i32, hi: i32) -> Vec<Complex64> {
        debug_assert!(lo <= self.lo && hi >= self.hi());
        let mut out = vec![ZERO; 2 * (hi - lo + 1) as usize];
        let offset = 2 * (self.lo - lo) as usize;
        out[offset..offset + self.amps.len()].copy_from_slice(&self.amps);
        out
    }

    pub(crate) fn scale(&mut self, factor: f64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }
}

/// Applies the coin at every position; the step counter is unchanged.
pub fn apply_coin(state: &WalkerState, coin: &CoinSpec) -> WalkerState {
    let mut out = state.clone();
    coin_in_place(&mut out.amps, out.lo, out.step, coin);
    out
}

pub(crate) fn coin_in_place(amps: &mut [Complex64], lo: i32, step: usize, coin: &CoinSpec) {
    let matrices = coin.matrices(lo, amps.len() / 2, step);
    for (pair, m) in amps.chunks_exact_mut(2).zip(matrices) {
        let (h, v) = m.apply(pair[0], pair[1]);
        pair[0] = h;
        pair[1] = v;
    }
}

/// Conditional shift: `|x,H> -> |x+1,H>`, `|x,V> -> |x-1,V>`.
pub fn apply_step(state: &WalkerState) -> WalkerState {
    WalkerState {
        step: state.step + 1,
        lo: state.lo - 1,
        amps: shifted(&state.amps),
    }
}

/// Shift of a raw amplitude vector starting at `lo`; the result starts at
/// `lo - 1` and covers two more positions.
pub(crate) fn shifted(amps: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![ZERO; amps.len() + 4];
    for (i, pair) in amps.chunks_exact(2).enumerate() {
        // position x = lo + i sits at index i + 1 of the output range
        out[2 * (i + 2)] = pair[0];
        out[2 * i + 1] = pair[1];
    }
    out
}

/// `n` applications of `S·C`.
pub fn evolve(state: &WalkerState, n: usize, coin: &CoinSpec) -> WalkerState {
    let mut out = state.clone();
    for _ in 0..n {
        coin_in_place(&mut out.amps, out.lo, out.step, coin);
        out = apply_step(&out);
    }
    out
}

/// Coin-summed probabilities; exactly-zero positions are omitted.
pub fn position_distribution(state: &WalkerState) -> PositionDistribution {
    PositionDistribution::from_entries(
        state.step,
        state
            .amps
            .chunks_exact(2)
            .enumerate()
            .map(|(i, pair)| (state.lo + i as i32, pair[0].norm_sqr() + pair[1].norm_sqr()))
            .filter(|&(_, p)| p != 0.0),
    )
}

/// Coin-resolved probabilities; exactly-zero modes are omitted.
pub fn mode_distribution(state: &WalkerState) -> ModeDistribution {
    ModeDistribution::from_entries(
        state.step,
        state
            .iter()
            .map(|(m, a)| (m, a.norm_sqr()))
            .filter(|&(_, p)| p != 0.0),
    )
}
