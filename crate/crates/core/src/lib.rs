//! Statistical comparison of algorithms on benchmark suites with infeasible
//! (missing) runs.
//!
//! The pipeline ranks each benchmark row lexicographically by solution value
//! and running time, with missing entries ranked last ([`ranking`]), then
//! screens the rank columns for normality, runs the Friedman omnibus test and,
//! when it rejects, the Nemenyi post-hoc test ([`stats`]). [`scores`] provides
//! PAR10 and expected-runtime summaries of the same data.

pub mod dataset;
pub mod ranking;
pub mod scores;
pub mod stats;

pub use dataset::{parse_dataset, BenchmarkDataset, DatasetError, DatasetWarning, Direction};
pub use ranking::{
    build_rank_matrix, build_rank_matrix_sequential, rank_row, summarize, RankBucket, RankMatrix, RankSummary,
    RankingError,
};
pub use scores::{ert, par10, score_dataset, ScoreError, ScoreReport};
pub use stats::{
    chi_square_sf, friedman_statistic, friedman_test, nemenyi, shapiro_wilk, studentized_range_sf, FriedmanResult,
    PosthocResult, RankSums, ShapiroResult, StatsError,
};
