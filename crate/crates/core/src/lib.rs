//! One- and two-photon discrete-time quantum walks with heralded photon loss.
//!
//! The crate is `no_std` (it needs `alloc`) and does no IO. It covers:
//!
//! - [`walk`]: single-walker states on the integer line, the half-wave-plate
//!   coin, the conditional shift and coin/position resolved distributions.
//! - [`two_photon`]: bosonic two-photon states evolved under `U ⊗ U`, the
//!   partial projection that removes one photon in a known mode, and the
//!   distribution of the surviving photon.
//! - [`analysis`]: similarity, loss-mode averaging, variances, ballistic
//!   fits, monitored recurrence and the two-walker civilization problem.
//! - [`emulator`]: a seeded Monte-Carlo model of a time-multiplexed fiber loop
//!   producing detector click streams, plus coincidence post-selection.
//!
//! Serialization, the CLI and parallel drivers live in the `qwalk-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod distribution;
pub mod emulator;
mod error;
pub mod two_photon;
pub mod walk;

pub use distribution::{JointPositionDistribution, ModeDistribution, PositionDistribution};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use walk::{Coin, CoinSpec, Mode, WalkerState};

/// Squared-norm tolerance for states.
pub const STATE_TOLERANCE: f64 = 1e-12;

/// Tolerance on the total of a probability distribution.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;
