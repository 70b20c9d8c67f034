use crate::walk::Mode;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("states are at different steps ({left} vs {right})")]
    StepMismatch { left: usize, right: usize },

    #[error("conditioning on {mode} has zero probability (weight {weight:e})")]
    ZeroConditioningProbability { mode: Mode, weight: f64 },

    #[error("mode {mode} lies outside the step-{step} light cone")]
    OutsideLightCone { mode: Mode, step: usize },

    #[error("loss step {loss_step} is invalid for output step {out_step}")]
    InvalidLossStep { loss_step: usize, out_step: usize },

    #[error("arrays have different lengths ({left} vs {right})")]
    ShapeMismatch { left: usize, right: usize },

    #[error("array is empty or all zero")]
    ZeroVector,

    #[error("array contains a negative or non-finite entry")]
    InvalidEntry,

    #[error("no admissible loss modes to average over")]
    EmptyAdmissibleSet,

    #[error("variance at step {step} is not positive ({variance})")]
    NonPositiveVariance { step: usize, variance: f64 },

    #[error("fit window {start}..={end} is not covered by the series")]
    InvalidWindow { start: usize, end: usize },

    #[error("no detection at the origin is possible within {horizon} steps")]
    NoDetection { horizon: usize },

    #[error("invalid emulator configuration: {0}")]
    InvalidConfig(&'static str),

    #[error(
        "no coincidences selected ({runs} runs, {two_click_runs} with two clicks, \
         {loss_matches} matching the loss event)"
    )]
    EmptySelection {
        runs: usize,
        two_click_runs: usize,
        loss_matches: usize,
    },
}
