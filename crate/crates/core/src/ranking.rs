//! Bi-objective lexicographic ranking of one benchmark row.
//!
//! Ordering keys, best first:
//! 1. smaller objective value (after direction normalization),
//! 2. smaller running time when values are equal,
//! 3. every present entry before every missing entry.
//!
//! Entries equal on both keys, and all missing entries, share the midrank of
//! the positions they occupy.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::Write;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dataset::{BenchmarkDataset, Direction};

#[derive(Debug, Error, PartialEq)]
pub enum RankingError {
    #[error("row needs at least 2 entries, found {0}")]
    TooShort(usize),
    #[error("values and times differ in length ({values} vs {times})")]
    LengthMismatch { values: usize, times: usize },
    #[error("entry {} has a value but no time", .0 + 1)]
    MissingTime(usize),
    #[error("benchmark {benchmark:?}: {source}")]
    InRow {
        benchmark: String,
        #[source]
        source: Box<RankingError>,
    },
}

/// Ranks one row. Output entries are midranks in `[1, n]`, multiples of 1/2.
pub fn rank_row(values: &[Option<f64>], times: &[Option<f64>], direction: Direction) -> Result<Vec<f64>, RankingError> {
    let n = values.len();
    if n < 2 {
        return Err(RankingError::TooShort(n));
    }
    if times.len() != n {
        return Err(RankingError::LengthMismatch {
            values: n,
            times: times.len(),
        });
    }

    let mut present: Vec<(usize, f64, f64)> = Vec::with_capacity(n);
    for (j, (v, t)) in values.iter().zip(times).enumerate() {
        if let Some(v) = v {
            let t = t.ok_or(RankingError::MissingTime(j))?;
            present.push((j, direction.normalize(*v), t));
        }
    }
    present.sort_by(|a, b| lexicographic(a, b).then(a.0.cmp(&b.0)));

    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < present.len() {
        let mut end = start + 1;
        while end < present.len() && lexicographic(&present[start], &present[end]) == Ordering::Equal {
            end += 1;
        }
        let mid = midrank(start, end);
        for &(j, _, _) in &present[start..end] {
            ranks[j] = mid;
        }
        start = end;
    }

    let trailing = midrank(present.len(), n);
    for (j, v) in values.iter().enumerate() {
        if v.is_none() {
            ranks[j] = trailing;
        }
    }
    Ok(ranks)
}

fn lexicographic(a: &(usize, f64, f64), b: &(usize, f64, f64)) -> Ordering {
    // Inputs are finite, so partial_cmp is total here and treats 0.0 == -0.0.
    a.1.partial_cmp(&b.1)
        .unwrap_or(Ordering::Equal)
        .then(a.2.partial_cmp(&b.2).unwrap_or(Ordering::Equal))
}

/// Midrank of zero-based sorted positions `start..end`.
#[inline]
fn midrank(start: usize, end: usize) -> f64 {
    (start + 1 + end) as f64 / 2.0
}

/// The `m x n` matrix of fractional ranks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankMatrix {
    pub algorithm_names: Vec<String>,
    pub benchmark_names: Vec<String>,
    pub ranks: Vec<Vec<f64>>,
}

impl RankMatrix {
    pub fn m(&self) -> usize {
        self.ranks.len()
    }

    pub fn n(&self) -> usize {
        self.algorithm_names.len()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.ranks.iter().map(|row| row[j]).collect()
    }

    /// Writes the matrix in the input CSV contract.
    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        wtr.write_record(std::iter::once("benchmark").chain(self.algorithm_names.iter().map(String::as_str)))?;
        for (name, row) in self.benchmark_names.iter().zip(&self.ranks) {
            let mut record = vec![name.clone()];
            record.extend(row.iter().map(|r| format!("{r}")));
            wtr.write_record(&record)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

fn rank_dataset_row(dataset: &BenchmarkDataset, k: usize) -> Result<Vec<f64>, RankingError> {
    rank_row(&dataset.results()[k], &dataset.times()[k], dataset.direction()).map_err(|e| RankingError::InRow {
        benchmark: dataset.benchmarks()[k].clone(),
        source: Box::new(e),
    })
}

fn assemble(dataset: &BenchmarkDataset, ranks: Vec<Vec<f64>>) -> RankMatrix {
    RankMatrix {
        algorithm_names: dataset.algorithms().to_vec(),
        benchmark_names: dataset.benchmarks().to_vec(),
        ranks,
    }
}

/// Ranks every benchmark row independently. Rows are processed in parallel
/// when the `parallel` feature is enabled.
pub fn build_rank_matrix(dataset: &BenchmarkDataset) -> Result<RankMatrix, RankingError> {
    #[cfg(feature = "parallel")]
    {
        let ranks = (0..dataset.m())
            .into_par_iter()
            .map(|k| rank_dataset_row(dataset, k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(assemble(dataset, ranks))
    }
    #[cfg(not(feature = "parallel"))]
    build_rank_matrix_sequential(dataset)
}

/// Single-threaded variant of [`build_rank_matrix`].
pub fn build_rank_matrix_sequential(dataset: &BenchmarkDataset) -> Result<RankMatrix, RankingError> {
    let ranks = (0..dataset.m())
        .map(|k| rank_dataset_row(dataset, k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(dataset, ranks))
}

/// A rank value usable as a histogram bucket. Ranks are multiples of 1/2, so
/// the bucket stores twice the rank as an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankBucket(u32);

impl RankBucket {
    pub fn from_rank(rank: f64) -> Self {
        let doubled = rank * 2.0;
        debug_assert_eq!(doubled.fract(), 0.0, "rank {rank} is not a midrank");
        RankBucket(doubled.round() as u32)
    }

    pub fn rank(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

impl std::fmt::Display for RankBucket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.rank())
    }
}

/// Column sums, mean ranks and per-algorithm histograms of a [`RankMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct RankSummary {
    pub algorithm_names: Vec<String>,
    pub m: usize,
    pub rank_sums: Vec<f64>,
    pub mean_ranks: Vec<f64>,
    pub histogram: Vec<BTreeMap<RankBucket, usize>>,
}

impl RankSummary {
    /// Every bucket that occurs for at least one algorithm, ascending.
    pub fn buckets(&self) -> Vec<RankBucket> {
        let mut all: Vec<RankBucket> = self.histogram.iter().flat_map(|h| h.keys().copied()).collect();
        all.sort_unstable();
        all.dedup();
        all
    }
}

pub fn summarize(matrix: &RankMatrix) -> RankSummary {
    let n = matrix.n();
    let m = matrix.m();
    let mut rank_sums = vec![0.0; n];
    let mut histogram = vec![BTreeMap::new(); n];
    for row in &matrix.ranks {
        for (j, &r) in row.iter().enumerate() {
            rank_sums[j] += r;
            *histogram[j].entry(RankBucket::from_rank(r)).or_insert(0) += 1;
        }
    }
    let mean_ranks = rank_sums.iter().map(|s| s / m as f64).collect();
    RankSummary {
        algorithm_names: matrix.algorithm_names.clone(),
        m,
        rank_sums,
        mean_ranks,
        histogram,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn some(v: &[f64]) -> Vec<Option<f64>> {
        v.iter().copied().map(Some).collect()
    }

    #[test]
    fn value_order_decides() {
        let r = rank_row(&some(&[5.0, 3.0, 7.0]), &some(&[1.0, 1.0, 1.0]), Direction::Minimize).unwrap();
        assert_eq!(r, vec![2.0, 1.0, 3.0]);
    }

    #[test]
    fn time_breaks_value_ties() {
        let r = rank_row(&some(&[4.0, 4.0, 9.0]), &some(&[10.0, 2.0, 5.0]), Direction::Minimize).unwrap();
        assert_eq!(r, vec![2.0, 1.0, 3.0]);
    }

    #[test]
    fn missing_entries_share_trailing_midrank() {
        let r = rank_row(&[None, Some(6.0), None], &[None, Some(3.0), None], Direction::Minimize).unwrap();
        assert_eq!(r, vec![2.5, 1.0, 2.5]);
    }

    #[test]
    fn full_tie() {
        let r = rank_row(&some(&[4.0, 4.0]), &some(&[7.0, 7.0]), Direction::Minimize).unwrap();
        assert_eq!(r, vec![1.5, 1.5]);
    }

    #[test]
    fn maximize_negates() {
        let r = rank_row(&some(&[5.0, 3.0]), &some(&[1.0, 1.0]), Direction::Maximize).unwrap();
        assert_eq!(r, vec![1.0, 2.0]);
    }

    #[test]
    fn all_missing_row_is_uniform() {
        let r = rank_row(&[None; 4], &[None; 4], Direction::Minimize).unwrap();
        assert_eq!(r, vec![2.5; 4]);
    }

    #[test]
    fn signed_zero_ties() {
        let r = rank_row(&some(&[0.0, -0.0]), &some(&[1.0, 1.0]), Direction::Maximize).unwrap();
        assert_eq!(r, vec![1.5, 1.5]);
    }

    #[test]
    fn precondition_errors() {
        assert_eq!(
            rank_row(&some(&[1.0]), &some(&[1.0]), Direction::Minimize),
            Err(RankingError::TooShort(1))
        );
        assert_eq!(
            rank_row(&some(&[1.0, 2.0]), &[Some(1.0), None], Direction::Minimize),
            Err(RankingError::MissingTime(1))
        );
    }

    fn dataset(results: Vec<Vec<Option<f64>>>) -> BenchmarkDataset {
        let m = results.len();
        let n = results[0].len();
        let times = results
            .iter()
            .map(|r| r.iter().map(|v| v.map(|_| 1.0)).collect())
            .collect();
        BenchmarkDataset::new(
            (0..n).map(|j| format!("a{j}")).collect(),
            (0..m).map(|i| format!("b{i}")).collect(),
            results,
            times,
            Direction::Minimize,
            None,
        )
        .unwrap()
    }

    #[test]
    fn one_row_matrix() {
        let a = build_rank_matrix(&dataset(vec![some(&[1.0, 2.0])])).unwrap();
        assert_eq!(a.ranks, vec![vec![1.0, 2.0]]);
    }

    #[test]
    fn dominant_first_column() {
        let ds = dataset(vec![
            some(&[0.0, 3.0, 2.0]),
            some(&[-1.0, 5.0, 6.0]),
            some(&[1.0, 1.5, 9.0]),
        ]);
        let a = build_rank_matrix(&ds).unwrap();
        assert_eq!(a.column(0), vec![1.0; 3]);
        assert_eq!(a, build_rank_matrix_sequential(&ds).unwrap());
        for row in &a.ranks {
            assert_eq!(row.iter().sum::<f64>(), 6.0);
        }
    }

    #[test]
    fn summary_sums_and_histogram() {
        let a = RankMatrix {
            algorithm_names: vec!["x".into(), "y".into()],
            benchmark_names: vec!["1".into(), "2".into()],
            ranks: vec![vec![1.0, 2.0], vec![2.0, 1.0]],
        };
        assert_eq!(summarize(&a).rank_sums, vec![3.0, 3.0]);

        let a = RankMatrix {
            algorithm_names: vec!["x".into(), "y".into(), "z".into()],
            benchmark_names: vec!["1".into(), "2".into(), "3".into()],
            ranks: vec![vec![1.0, 2.0, 3.0]; 3],
        };
        let s = summarize(&a);
        assert_eq!(s.rank_sums, vec![3.0, 6.0, 9.0]);
        assert_eq!(s.mean_ranks, vec![1.0, 2.0, 3.0]);
        assert_eq!(s.histogram[1][&RankBucket::from_rank(2.0)], 3);
    }

    #[test]
    fn fractional_buckets() {
        let b = RankBucket::from_rank(2.5);
        assert_eq!(b.rank(), 2.5);
        assert_eq!(b.to_string(), "2.5");
        assert_eq!(RankBucket::from_rank(3.0).to_string(), "3");
    }

    #[test]
    fn csv_output() {
        let a = RankMatrix {
            algorithm_names: vec!["x".into(), "y".into()],
            benchmark_names: vec!["p1".into()],
            ranks: vec![vec![1.5, 1.5]],
        };
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "benchmark,x,y\np1,1.5,1.5\n");
    }
}
