//! Dense reference implementations shared by the integration tests.

#![allow(dead_code)]

use qwalk::{Coin, Complex64, Mode, WalkerState};

pub const TOL: f64 = 1e-12;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Full one-step matrices on the ring `-half..=half`, built entry by entry.
pub struct DenseWalk {
    pub half: i32,
    pub dim: usize,
}

impl DenseWalk {
    pub fn new(half: i32) -> Self {
        DenseWalk {
            half,
            dim: 2 * (2 * half as usize + 1),
        }
    }

    pub fn index(&self, m: Mode) -> usize {
        2 * (m.x + self.half) as usize + if m.coin == Coin::H { 0 } else { 1 }
    }

    pub fn mode(&self, i: usize) -> Mode {
        let x = (i / 2) as i32 - self.half;
        Mode::new(
            x,
            if i.is_multiple_of(2) {
                Coin::H
            } else {
                Coin::V
            },
        )
    }

    fn wrap(&self, x: i32) -> i32 {
        let n = 2 * self.half + 1;
        (x + self.half).rem_euclid(n) - self.half
    }

    /// `S · C(angle(x, step))` as a dense matrix, `angle` in degrees.
    pub fn step_matrix(
        &self,
        step: usize,
        angle: &dyn Fn(i32, usize) -> f64,
    ) -> Vec<Vec<Complex64>> {
        let mut u = vec![vec![c(0.0); self.dim]; self.dim];
        for x in -self.half..=self.half {
            let phi = angle(x, step).to_radians();
            let (co, si) = (phi.cos(), phi.sin());
            // coin: |H> -> cos|H> + sin|V>, |V> -> sin|H> - cos|V>
            let coin = [[co, si], [si, -co]];
            for (out, shift) in [(Coin::H, 1), (Coin::V, -1)] {
                let row = self.index(Mode::new(self.wrap(x + shift), out));
                let r = if out == Coin::H { 0 } else { 1 };
                for (input, col_c) in [(Coin::H, 0), (Coin::V, 1)] {
                    let col = self.index(Mode::new(x, input));
                    u[row][col] += c(coin[r][col_c]);
                }
            }
        }
        u
    }

    pub fn apply(&self, u: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
        u.iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn vector(&self, state: &WalkerState) -> Vec<Complex64> {
        let mut v = vec![c(0.0); self.dim];
        for (m, a) in state.iter() {
            v[self.index(m)] += a;
        }
        v
    }

    /// `n` steps starting at step `start`.
    pub fn evolve(
        &self,
        v: &[Complex64],
        start: usize,
        n: usize,
        angle: &dyn Fn(i32, usize) -> f64,
    ) -> Vec<Complex64> {
        let mut v = v.to_vec();
        for t in start..start + n {
            v = self.apply(&self.step_matrix(t, angle), &v);
        }
        v
    }

    /// Product of `n` step matrices starting at step `start`.
    pub fn propagator(
        &self,
        start: usize,
        n: usize,
        angle: &dyn Fn(i32, usize) -> f64,
    ) -> Vec<Vec<Complex64>> {
        let mut p: Vec<Vec<Complex64>> = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| c(if i == j { 1.0 } else { 0.0 }))
                    .collect()
            })
            .collect();
        for t in start..start + n {
            let u = self.step_matrix(t, angle);
            p = (0..self.dim)
                .map(|i| {
                    (0..self.dim)
                        .map(|j| (0..self.dim).map(|k| u[i][k] * p[k][j]).sum())
                        .collect()
                })
                .collect();
        }
        p
    }
}

pub fn hadamard(_: i32, _: usize) -> f64 {
    45.0
}

/// Largest amplitude difference between a state and a dense vector.
pub fn max_state_diff(dense: &DenseWalk, state: &WalkerState, v: &[Complex64]) -> f64 {
    let w = dense.vector(state);
    w.iter()
        .zip(v)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max)
}
