//! Probability tables keyed by position, mode or position pair.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::walk::Mode;
use crate::DISTRIBUTION_TOLERANCE;

macro_rules! distribution {
    ($(#[$meta:meta])* $name:ident, $key:ty) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Default)]
        pub struct $name {
            step: usize,
            probs: BTreeMap<$key, f64>,
        }

        impl $name {
            /// Repeated keys add up.
            pub fn from_entries(
                step: usize,
                entries: impl IntoIterator<Item = ($key, f64)>,
            ) -> Self {
                let mut probs = BTreeMap::new();
                for (k, p) in entries {
                    *probs.entry(k).or_insert(0.0) += p;
                }
                $name { step, probs }
            }

            pub fn step(&self) -> usize {
                self.step
            }

            /// Probability of `key`; zero when absent.
            pub fn get(&self, key: $key) -> f64 {
                self.probs.get(&key).copied().unwrap_or(0.0)
            }

            pub fn iter(&self) -> impl Iterator<Item = ($key, f64)> + '_ {
                self.probs.iter().map(|(&k, &p)| (k, p))
            }

            pub fn keys(&self) -> impl Iterator<Item = $key> + '_ {
                self.probs.keys().copied()
            }

            pub fn len(&self) -> usize {
                self.probs.len()
            }

            pub fn is_empty(&self) -> bool {
                self.probs.is_empty()
            }

            pub fn total(&self) -> f64 {
                self.probs.values().sum()
            }

            /// Every entry in `[0, 1]` and the total within `1e-9` of one;
            /// entries may overshoot by the same tolerance.
            pub fn is_valid(&self) -> bool {
                let range = -DISTRIBUTION_TOLERANCE..=1.0 + DISTRIBUTION_TOLERANCE;
                self.probs.values().all(|p| range.contains(p))
                    && (self.total() - 1.0).abs() <= DISTRIBUTION_TOLERANCE
            }

            /// Both tables as dense vectors over the union of their keys.
            pub fn aligned(&self, other: &Self) -> (Vec<f64>, Vec<f64>) {
                let mut keys: Vec<$key> = self.keys().chain(other.keys()).collect();
                keys.sort_unstable();
                keys.dedup();
                keys.iter().map(|&k| (self.get(k), other.get(k))).unzip()
            }

            /// Largest absolute entrywise difference over the union of keys.
            pub fn max_abs_diff(&self, other: &Self) -> f64 {
                let (a, b) = self.aligned(other);
                a.iter()
                    .zip(&b)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max)
            }
        }
    };
}

distribution!(
    /// `P(x)`: coin-summed output statistics.
    PositionDistribution,
    i32
);

distribution!(
    /// `P(x, c)`: coin-resolved output statistics.
    ModeDistribution,
    Mode
);

distribution!(
    /// `P(x, y)` over the positions of two photons.
    JointPositionDistribution,
    (i32, i32)
);

impl PositionDistribution {
    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, p)| x as f64 * p).sum()
    }
}

impl ModeDistribution {
    /// Coin-summed marginal.
    pub fn positions(&self) -> PositionDistribution {
        PositionDistribution::from_entries(self.step, self.iter().map(|(m, p)| (m.x, p)))
    }

    /// Image under `x -> -x`, `H <-> V`.
    pub fn mirrored(&self) -> ModeDistribution {
        ModeDistribution::from_entries(self.step, self.iter().map(|(m, p)| (m.mirrored(), p)))
    }

    /// Divides every entry by the total. Returns `None` for an all-zero table.
    pub fn normalized(mut self) -> Option<ModeDistribution> {
        let total = self.total();
        if total <= 0.0 {
            return None;
        }
        for p in self.probs.values_mut() {
            *p /= total;
        }
        Some(self)
    }
}
