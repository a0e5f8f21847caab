//! The analysis report: everything `analyze` computes, in pipeline order.

use std::fs::File;
use std::path::Path;

use benchrank_core::{
    build_rank_matrix, friedman_test, nemenyi, parse_dataset, score_dataset, shapiro_wilk, summarize, BenchmarkDataset,
    FriedmanResult, RankMatrix, RankSummary, RankSums, ScoreReport, ShapiroResult, StatsError,
};
use serde::Serialize;

use crate::cli::{AnalysisConfig, Options};
use crate::error::CliError;

pub const SCHEMA: u32 = 1;

/// A value or the reason it is absent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome<T> {
    pub value: Option<T>,
    pub reason: Option<String>,
}

impl<T> Outcome<T> {
    pub fn present(value: T) -> Self {
        Self {
            value: Some(value),
            reason: None,
        }
    }

    pub fn absent(reason: impl Into<String>) -> Self {
        Self {
            value: None,
            reason: Some(reason.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Tool {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub m: usize,
    pub n: usize,
    pub algorithms: Vec<String>,
    pub missing_counts: Vec<usize>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketCount {
    pub rank: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmRanks {
    pub algorithm: String,
    pub rank_sum: f64,
    pub mean_rank: f64,
    pub histogram: Vec<BucketCount>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Normality {
    pub algorithm: String,
    pub shapiro_wilk: Outcome<ShapiroResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub first: String,
    pub second: String,
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Posthoc {
    pub method: &'static str,
    pub alpha: f64,
    pub comparisons: Vec<Comparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmScores {
    pub algorithm: String,
    pub solved: usize,
    pub unsolved: usize,
    pub par10: Outcome<f64>,
    pub ert: Outcome<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scores {
    pub cutoff: Option<f64>,
    pub algorithms: Vec<AlgorithmScores>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub tool: Tool,
    pub config: AnalysisConfig,
    pub dataset: DatasetSummary,
    pub ranks: Vec<AlgorithmRanks>,
    pub normality: Vec<Normality>,
    pub friedman: Outcome<FriedmanResult>,
    pub posthoc: Outcome<Posthoc>,
    pub scores: Scores,
}

impl AnalysisReport {
    /// The statistical error that makes this run fail, if any.
    pub fn degeneracy(&self) -> Option<StatsError> {
        self.friedman.value.is_none().then_some(StatsError::Degenerate)
    }
}

/// A parsed dataset with its rank matrix.
pub struct Loaded {
    pub dataset: BenchmarkDataset,
    pub warnings: Vec<String>,
    pub matrix: RankMatrix,
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

pub fn load(options: &Options, config: &AnalysisConfig) -> Result<Loaded, CliError> {
    let results = open(&options.results)?;
    let times = open(&options.times)?;
    let mut dataset = parse_dataset(results, times, config.direction, config.cutoff)?;
    let warnings = dataset.validate()?.iter().map(ToString::to_string).collect();
    if let Some(quantum) = config.time_quantum {
        dataset = dataset.quantize_times(quantum);
    }
    let matrix = build_rank_matrix(&dataset)?;
    Ok(Loaded {
        dataset,
        warnings,
        matrix,
    })
}

pub fn rank_section(summary: &RankSummary) -> Vec<AlgorithmRanks> {
    summary
        .algorithm_names
        .iter()
        .enumerate()
        .map(|(j, name)| AlgorithmRanks {
            algorithm: name.clone(),
            rank_sum: summary.rank_sums[j],
            mean_rank: summary.mean_ranks[j],
            histogram: summary.histogram[j]
                .iter()
                .map(|(bucket, &count)| BucketCount {
                    rank: bucket.rank(),
                    count,
                })
                .collect(),
        })
        .collect()
}

pub fn score_section(report: &ScoreReport, cutoff: Option<f64>, m: usize) -> Scores {
    let algorithms = report
        .algorithm_names
        .iter()
        .enumerate()
        .map(|(j, name)| AlgorithmScores {
            algorithm: name.clone(),
            solved: report.solved_counts[j],
            unsolved: m - report.solved_counts[j],
            par10: match &report.par10 {
                Some(values) => Outcome::present(values[j]),
                None => Outcome::absent("no cutoff given"),
            },
            ert: match report.ert[j] {
                Ok(v) => Outcome::present(v),
                Err(why) => Outcome::absent(why.to_string()),
            },
        })
        .collect();
    Scores { cutoff, algorithms }
}

pub fn analyze(loaded: &Loaded, config: &AnalysisConfig) -> Result<AnalysisReport, CliError> {
    let Loaded {
        dataset,
        warnings,
        matrix,
    } = loaded;
    let summary = summarize(matrix);

    let normality = (0..matrix.n())
        .map(|j| Normality {
            algorithm: matrix.algorithm_names[j].clone(),
            shapiro_wilk: match shapiro_wilk(&matrix.column(j)) {
                Ok(r) => Outcome::present(r),
                Err(e) => Outcome::absent(e.to_string()),
            },
        })
        .collect();

    let friedman = match friedman_test(matrix, config.alpha, config.tie_correction) {
        Ok(r) => Outcome::present(r),
        Err(StatsError::Degenerate) => Outcome::absent(StatsError::Degenerate.to_string()),
        Err(e) => return Err(e.into()),
    };

    let posthoc = match &friedman.value {
        None => Outcome::absent(format!(
            "Friedman test unavailable: {}",
            friedman.reason.as_deref().unwrap_or("unknown")
        )),
        Some(f) if !f.reject_null => Outcome::absent(format!(
            "Friedman test does not reject at alpha = {} (p = {})",
            f.alpha, f.p_value
        )),
        Some(_) => {
            let result = nemenyi(&RankSums::from_summary(&summary), config.alpha)?;
            let names = &matrix.algorithm_names;
            let comparisons = result
                .pairs()
                .map(|(i, j)| Comparison {
                    first: names[i].clone(),
                    second: names[j].clone(),
                    statistic: result.statistics[i][j],
                    p_value: result.p_values[i][j],
                    significant: result.significant[i][j],
                })
                .collect();
            Outcome::present(Posthoc {
                method: "nemenyi",
                alpha: result.alpha,
                comparisons,
            })
        }
    };

    let scores = score_section(&score_dataset(dataset)?, dataset.cutoff(), dataset.m());

    Ok(AnalysisReport {
        schema: SCHEMA,
        tool: Tool::current(),
        config: config.clone(),
        dataset: DatasetSummary {
            m: dataset.m(),
            n: dataset.n(),
            algorithms: dataset.algorithms().to_vec(),
            missing_counts: dataset.missing_counts(),
            warnings: warnings.clone(),
        },
        ranks: rank_section(&summary),
        normality,
        friedman,
        posthoc,
        scores,
    })
}
