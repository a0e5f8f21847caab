//! Inference on rank matrices: normality screening, the Friedman omnibus test
//! and the Nemenyi all-pairs post-hoc test.

mod distributions;
mod friedman;
mod nemenyi;
mod shapiro;

use thiserror::Error;

pub use distributions::{chi_square_sf, normal_sf, studentized_range_sf};
pub use friedman::{friedman_statistic, friedman_test, tie_correction_factor, FriedmanResult, RankSums};
pub use nemenyi::{nemenyi, PosthocResult};
pub use shapiro::{shapiro_wilk, ShapiroResult};

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("at least 2 treatments are required, found {0}")]
    TooFewTreatments(usize),
    #[error("at least 1 trial is required")]
    NoTrials,
    #[error("significance level {0} is outside (0, 1)")]
    InvalidAlpha(f64),
    #[error("inconsistent rank sums: total {total} but {m} trials of {n} treatments require {expected}")]
    InconsistentRankSums {
        total: f64,
        expected: f64,
        m: usize,
        n: usize,
    },
    #[error("rank sum {value} of treatment {} is outside the feasible range [{lo}, {hi}]", .index + 1)]
    RankSumOutOfRange { index: usize, value: f64, lo: f64, hi: f64 },
    #[error("degenerate: no discrimination in any row")]
    Degenerate,
    #[error("sample size {0} is outside [3, 5000]")]
    SampleSize(usize),
    #[error("zero variance")]
    ZeroVariance,
    #[error("sample contains a non-finite value")]
    NonFinite,
}

pub(crate) fn check_alpha(alpha: f64) -> Result<(), StatsError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(StatsError::InvalidAlpha(alpha))
    }
}
