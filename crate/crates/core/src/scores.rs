//! Missing-data runtime scores: penalized average runtime and expected runtime.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::dataset::BenchmarkDataset;

/// Penalty multiplier applied to the cutoff for unsolved instances.
pub const PAR_FACTOR: f64 = 10.0;

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("no trials")]
    Empty,
    #[error("cutoff {0} must be positive and finite")]
    InvalidCutoff(f64),
    #[error("time {time} at trial {} is negative or non-finite", .index + 1)]
    InvalidTime { index: usize, time: f64 },
    #[error("{times} times but {flags} success flags")]
    LengthMismatch { times: usize, flags: usize },
}

fn check_time(index: usize, time: f64) -> Result<(), ScoreError> {
    if time.is_finite() && time >= 0.0 {
        Ok(())
    } else {
        Err(ScoreError::InvalidTime { index, time })
    }
}

/// PAR10: every unsolved trial (missing time) costs ten times the cutoff, and
/// the penalized times are averaged over all trials. Present times above the
/// cutoff are clamped to it.
pub fn par10(times: &[Option<f64>], cutoff: f64) -> Result<f64, ScoreError> {
    par_k(times, cutoff, PAR_FACTOR)
}

/// Penalized average runtime with an arbitrary penalty multiplier.
pub fn par_k(times: &[Option<f64>], cutoff: f64, factor: f64) -> Result<f64, ScoreError> {
    if times.is_empty() {
        return Err(ScoreError::Empty);
    }
    if !(cutoff.is_finite() && cutoff > 0.0) {
        return Err(ScoreError::InvalidCutoff(cutoff));
    }
    let mut total = 0.0;
    for (index, t) in times.iter().enumerate() {
        total += match *t {
            Some(t) => {
                check_time(index, t)?;
                t.min(cutoff)
            }
            None => factor * cutoff,
        };
    }
    Ok(total / times.len() as f64)
}

/// Expected runtime `RT_S + (1 - p_S) / p_S * RT_US`, with `p_S` the fraction
/// of successful trials and `RT_S`/`RT_US` the mean cost of successful and
/// unsuccessful trials. `None` when no trial succeeded.
pub fn ert(times: &[f64], success: &[bool]) -> Result<Option<f64>, ScoreError> {
    if times.len() != success.len() {
        return Err(ScoreError::LengthMismatch {
            times: times.len(),
            flags: success.len(),
        });
    }
    if times.is_empty() {
        return Err(ScoreError::Empty);
    }
    let (mut ok_sum, mut ok_count, mut fail_sum, mut fail_count) = (0.0, 0usize, 0.0, 0usize);
    for (index, (&t, &solved)) in times.iter().zip(success).enumerate() {
        check_time(index, t)?;
        if solved {
            ok_sum += t;
            ok_count += 1;
        } else {
            fail_sum += t;
            fail_count += 1;
        }
    }
    if ok_count == 0 {
        return Ok(None);
    }
    let rt_success = ok_sum / ok_count as f64;
    let rt_failure = if fail_count == 0 {
        0.0
    } else {
        fail_sum / fail_count as f64
    };
    // (1 - p_S) / p_S with p_S = ok / total reduces to fail / ok.
    let odds = fail_count as f64 / ok_count as f64;
    Ok(Some(rt_success + odds * rt_failure))
}

/// Why an algorithm has no expected runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErtUnavailable {
    /// No benchmark was solved.
    NoSuccess,
    /// An unsolved benchmark has neither a recorded time nor a cutoff to stand in for it.
    UnknownFailureTime,
}

impl fmt::Display for ErtUnavailable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErtUnavailable::NoSuccess => f.write_str("no successful trial"),
            ErtUnavailable::UnknownFailureTime => {
                f.write_str("unsuccessful trial without a recorded time and no cutoff")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub algorithm_names: Vec<String>,
    /// `None` when the dataset has no cutoff.
    pub par10: Option<Vec<f64>>,
    pub ert: Vec<Result<f64, ErtUnavailable>>,
    pub solved_counts: Vec<usize>,
}

/// Scores every algorithm of a dataset. Unsolved trials contribute their
/// recorded time to ERT when one exists, the cutoff otherwise.
pub fn score_dataset(dataset: &BenchmarkDataset) -> Result<ScoreReport, ScoreError> {
    let n = dataset.n();
    let cutoff = dataset.cutoff();
    let mut par10_scores = cutoff.map(|_| Vec::with_capacity(n));
    let mut ert_scores = Vec::with_capacity(n);
    let mut solved_counts = Vec::with_capacity(n);
    for j in 0..n {
        let success = dataset.success_column(j);
        solved_counts.push(success.iter().filter(|s| **s).count());
        if let (Some(scores), Some(c)) = (par10_scores.as_mut(), cutoff) {
            scores.push(par10(&dataset.solved_time_column(j), c)?);
        }
        let costs: Option<Vec<f64>> = dataset
            .time_column(j)
            .into_iter()
            .zip(&success)
            .map(|(t, &ok)| if ok { t } else { t.or(cutoff) })
            .collect();
        let outcome = match costs {
            Some(costs) => ert(&costs, &success)?.ok_or(ErtUnavailable::NoSuccess),
            None if solved_counts[j] == 0 => Err(ErtUnavailable::NoSuccess),
            None => Err(ErtUnavailable::UnknownFailureTime),
        };
        ert_scores.push(outcome);
    }
    Ok(ScoreReport {
        algorithm_names: dataset.algorithms().to_vec(),
        par10: par10_scores,
        ert: ert_scores,
        solved_counts,
    })
}
