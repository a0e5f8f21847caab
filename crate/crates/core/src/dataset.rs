//! Experiment data model: paired results/times matrices with a missingness mask.
//!
//! Rows are benchmarks (trials) and columns are algorithms (treatments). A cell is
//! missing iff its result is absent; times never create missingness.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};

use serde::Serialize;
use thiserror::Error;

/// Optimization sense of the objective values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Minimize,
    Maximize,
}

impl Direction {
    /// Maps an objective value onto the minimization scale used by the rule engine.
    #[inline]
    pub fn normalize(self, value: f64) -> f64 {
        match self {
            Direction::Minimize => value,
            Direction::Maximize => -value,
        }
    }
}

/// Which input file a problem was found in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Results,
    Times,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Results => f.write_str("results"),
            Source::Times => f.write_str("times"),
        }
    }
}

/// A single invariant violation. `row` and `column` are zero-based data
/// coordinates (header and label column excluded).
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub row: Option<usize>,
    pub column: Option<usize>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    TooFewAlgorithms(usize),
    NoBenchmarks,
    EmptyName,
    DuplicateName(String),
    RaggedRow {
        source: Source,
        expected: usize,
        found: usize,
    },
    NonNumeric {
        source: Source,
        token: String,
    },
    NonFiniteResult(f64),
    MissingTime,
    NonFiniteTime(f64),
    NegativeTime(f64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.row, self.column) {
            (Some(r), Some(c)) => write!(f, "(row {}, column {}): ", r + 1, c + 1)?,
            (Some(r), None) => write!(f, "(row {}): ", r + 1)?,
            (None, Some(c)) => write!(f, "(column {}): ", c + 1)?,
            (None, None) => {}
        }
        match &self.kind {
            ViolationKind::TooFewAlgorithms(n) => {
                write!(f, "at least 2 algorithms are required, found {n}")
            }
            ViolationKind::NoBenchmarks => f.write_str("no benchmark rows"),
            ViolationKind::EmptyName => f.write_str("empty name"),
            ViolationKind::DuplicateName(name) => write!(f, "duplicate name {name:?}"),
            ViolationKind::RaggedRow {
                source,
                expected,
                found,
            } => {
                write!(f, "{source} row has {found} values, expected {expected}")
            }
            ViolationKind::NonNumeric { source, token } => {
                write!(f, "non-numeric token {token:?} in {source}")
            }
            ViolationKind::NonFiniteResult(v) => write!(f, "non-finite result {v}"),
            ViolationKind::MissingTime => f.write_str("present result with missing time"),
            ViolationKind::NonFiniteTime(v) => {
                write!(f, "present result with non-finite time {v}")
            }
            ViolationKind::NegativeTime(v) => write!(f, "negative time {v}"),
        }
    }
}

/// Non-fatal findings reported by [`BenchmarkDataset::validate`].
#[derive(Debug, Clone, PartialEq)]
pub enum DatasetWarning {
    /// Every algorithm is missing on this benchmark; the row ranks uniformly.
    AllMissing { benchmark: String },
    /// A present time exceeds the cutoff; PAR10 clamps it.
    TimeAboveCutoff {
        benchmark: String,
        algorithm: String,
        time: f64,
        cutoff: f64,
    },
}

impl fmt::Display for DatasetWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetWarning::AllMissing { benchmark } => {
                write!(f, "benchmark {benchmark:?} has no feasible result for any algorithm")
            }
            DatasetWarning::TimeAboveCutoff {
                benchmark,
                algorithm,
                time,
                cutoff,
            } => write!(
                f,
                "time {time} of {algorithm:?} on {benchmark:?} exceeds cutoff {cutoff}"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("malformed {file} CSV: {error}")]
    Csv {
        file: Source,
        #[source]
        error: csv::Error,
    },
    #[error("{0} file is empty")]
    Empty(Source),
    #[error("{file} file has {found} data rows but results has {expected}")]
    DimensionMismatch {
        file: Source,
        expected: usize,
        found: usize,
    },
    #[error("header mismatch: results has {results:?}, times has {times:?}")]
    HeaderMismatch { results: Vec<String>, times: Vec<String> },
    #[error("row {} label mismatch: results has {results:?}, times has {times:?}", .row + 1)]
    RowLabelMismatch { row: usize, results: String, times: String },
    #[error("invalid cutoff {0}: must be positive and finite")]
    InvalidCutoff(f64),
    #[error("invalid dataset:\n{}", format_violations(.0))]
    Invalid(Vec<Violation>),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("  {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Paired results and times for `m` benchmarks and `n` algorithms.
///
/// Instances are only obtainable through validating constructors, so every
/// value of this type satisfies the dataset invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkDataset {
    algorithms: Vec<String>,
    benchmarks: Vec<String>,
    results: Vec<Vec<Option<f64>>>,
    times: Vec<Vec<Option<f64>>>,
    direction: Direction,
    cutoff: Option<f64>,
}

impl BenchmarkDataset {
    pub fn new(
        algorithms: Vec<String>,
        benchmarks: Vec<String>,
        results: Vec<Vec<Option<f64>>>,
        times: Vec<Vec<Option<f64>>>,
        direction: Direction,
        cutoff: Option<f64>,
    ) -> Result<Self, DatasetError> {
        if let Some(c) = cutoff {
            if !(c.is_finite() && c > 0.0) {
                return Err(DatasetError::InvalidCutoff(c));
            }
        }
        let violations = check_parts(&algorithms, &benchmarks, &results, &times);
        if !violations.is_empty() {
            return Err(DatasetError::Invalid(violations));
        }
        Ok(Self {
            algorithms,
            benchmarks,
            results,
            times,
            direction,
            cutoff,
        })
    }

    pub fn algorithms(&self) -> &[String] {
        &self.algorithms
    }

    pub fn benchmarks(&self) -> &[String] {
        &self.benchmarks
    }

    /// Number of benchmarks (rows).
    pub fn m(&self) -> usize {
        self.benchmarks.len()
    }

    /// Number of algorithms (columns).
    pub fn n(&self) -> usize {
        self.algorithms.len()
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn cutoff(&self) -> Option<f64> {
        self.cutoff
    }

    pub fn results(&self) -> &[Vec<Option<f64>>] {
        &self.results
    }

    pub fn times(&self) -> &[Vec<Option<f64>>] {
        &self.times
    }

    pub fn is_missing(&self, row: usize, column: usize) -> bool {
        self.results[row][column].is_none()
    }

    /// Number of missing cells per algorithm.
    pub fn missing_counts(&self) -> Vec<usize> {
        (0..self.n())
            .map(|j| self.results.iter().filter(|row| row[j].is_none()).count())
            .collect()
    }

    /// Column `j` of the times matrix.
    pub fn time_column(&self, j: usize) -> Vec<Option<f64>> {
        self.times.iter().map(|row| row[j]).collect()
    }

    /// Column `j` of the success mask (result present).
    pub fn success_column(&self, j: usize) -> Vec<bool> {
        self.results.iter().map(|row| row[j].is_some()).collect()
    }

    /// Times of solved cells only; times recorded next to missing results are dropped.
    pub fn solved_time_column(&self, j: usize) -> Vec<Option<f64>> {
        self.results
            .iter()
            .zip(&self.times)
            .map(|(r, t)| r[j].and(t[j]))
            .collect()
    }

    pub fn with_direction(mut self, direction: Direction) -> Self {
        self.direction = direction;
        self
    }

    /// Rounds every present time to the nearest multiple of `quantum`.
    pub fn quantize_times(&self, quantum: f64) -> Self {
        assert!(quantum.is_finite() && quantum > 0.0, "time quantum must be positive");
        let mut out = self.clone();
        for row in &mut out.times {
            for t in row.iter_mut().flatten() {
                *t = (*t / quantum).round() * quantum;
            }
        }
        out
    }

    /// Re-checks every invariant and returns the non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<DatasetWarning>, DatasetError> {
        let violations = check_parts(&self.algorithms, &self.benchmarks, &self.results, &self.times);
        if !violations.is_empty() {
            return Err(DatasetError::Invalid(violations));
        }
        let mut warnings = Vec::new();
        for (i, row) in self.results.iter().enumerate() {
            if row.iter().all(Option::is_none) {
                warnings.push(DatasetWarning::AllMissing {
                    benchmark: self.benchmarks[i].clone(),
                });
            }
        }
        if let Some(cutoff) = self.cutoff {
            for (i, (r, t)) in self.results.iter().zip(&self.times).enumerate() {
                for j in 0..self.n() {
                    if let (Some(_), Some(time)) = (r[j], t[j]) {
                        if time > cutoff {
                            warnings.push(DatasetWarning::TimeAboveCutoff {
                                benchmark: self.benchmarks[i].clone(),
                                algorithm: self.algorithms[j].clone(),
                                time,
                                cutoff,
                            });
                        }
                    }
                }
            }
        }
        Ok(warnings)
    }

    /// Writes the results matrix in the input CSV contract. Missing cells are `NA`.
    pub fn write_results<W: Write>(&self, writer: W) -> csv::Result<()> {
        write_matrix(writer, &self.algorithms, &self.benchmarks, &self.results)
    }

    /// Writes the times matrix in the input CSV contract.
    pub fn write_times<W: Write>(&self, writer: W) -> csv::Result<()> {
        write_matrix(writer, &self.algorithms, &self.benchmarks, &self.times)
    }
}

fn check_parts(
    algorithms: &[String],
    benchmarks: &[String],
    results: &[Vec<Option<f64>>],
    times: &[Vec<Option<f64>>],
) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = algorithms.len();
    if n < 2 {
        out.push(Violation {
            row: None,
            column: None,
            kind: ViolationKind::TooFewAlgorithms(n),
        });
    }
    if benchmarks.is_empty() {
        out.push(Violation {
            row: None,
            column: None,
            kind: ViolationKind::NoBenchmarks,
        });
    }
    check_names(algorithms, |j| (None, Some(j)), &mut out);
    check_names(benchmarks, |i| (Some(i), None), &mut out);

    for (source, matrix) in [(Source::Results, results), (Source::Times, times)] {
        if matrix.len() != benchmarks.len() {
            out.push(Violation {
                row: None,
                column: None,
                kind: ViolationKind::RaggedRow {
                    source,
                    expected: benchmarks.len(),
                    found: matrix.len(),
                },
            });
        }
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                out.push(Violation {
                    row: Some(i),
                    column: None,
                    kind: ViolationKind::RaggedRow {
                        source,
                        expected: n,
                        found: row.len(),
                    },
                });
            }
        }
    }

    for (i, (r, t)) in results.iter().zip(times).enumerate() {
        for (j, (value, time)) in r.iter().zip(t).enumerate() {
            let at = |kind| Violation {
                row: Some(i),
                column: Some(j),
                kind,
            };
            if let Some(time) = *time {
                if !time.is_finite() {
                    if value.is_some() {
                        out.push(at(ViolationKind::NonFiniteTime(time)));
                    }
                } else if time < 0.0 {
                    out.push(at(ViolationKind::NegativeTime(time)));
                }
            }
            if let Some(value) = *value {
                if !value.is_finite() {
                    out.push(at(ViolationKind::NonFiniteResult(value)));
                }
                if time.is_none() {
                    out.push(at(ViolationKind::MissingTime));
                }
            }
        }
    }
    out
}

fn check_names(names: &[String], coord: impl Fn(usize) -> (Option<usize>, Option<usize>), out: &mut Vec<Violation>) {
    let mut seen = HashSet::new();
    for (k, name) in names.iter().enumerate() {
        let (row, column) = coord(k);
        if name.trim().is_empty() {
            out.push(Violation {
                row,
                column,
                kind: ViolationKind::EmptyName,
            });
        } else if !seen.insert(name.as_str()) {
            out.push(Violation {
                row,
                column,
                kind: ViolationKind::DuplicateName(name.clone()),
            });
        }
    }
}

/// Returns true for the tokens that denote a missing cell.
pub fn is_missing_marker(token: &str) -> bool {
    let t = token.trim();
    t.is_empty()
        || ["na", "nan", "inf", "+inf", "-inf", "infinity", "+infinity", "-infinity"]
            .iter()
            .any(|m| t.eq_ignore_ascii_case(m))
}

struct RawTable {
    header: Vec<String>,
    labels: Vec<String>,
    cells: Vec<Vec<String>>,
}

fn read_table<R: Read>(reader: R, source: Source) -> Result<RawTable, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(rec) => rec.map_err(|error| DatasetError::Csv { file: source, error })?,
        None => return Err(DatasetError::Empty(source)),
    };
    let header: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let mut labels = Vec::new();
    let mut cells = Vec::new();
    for rec in records {
        let rec = rec.map_err(|error| DatasetError::Csv { file: source, error })?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        labels.push(rec.get(0).unwrap_or_default().to_owned());
        cells.push(rec.iter().skip(1).map(str::to_owned).collect());
    }
    Ok(RawTable { header, labels, cells })
}

fn parse_cell(token: &str) -> Result<Option<f64>, ()> {
    if is_missing_marker(token) {
        return Ok(None);
    }
    token.trim().parse::<f64>().map(Some).map_err(|_| ())
}

/// Reads a results/times pair in the CSV contract and validates it.
///
/// Time cells next to a missing result are kept when they parse as a finite
/// non-negative number (ERT uses them as unsuccessful run lengths) and dropped
/// otherwise.
pub fn parse_dataset<R1: Read, R2: Read>(
    results_source: R1,
    times_source: R2,
    direction: Direction,
    cutoff: Option<f64>,
) -> Result<BenchmarkDataset, DatasetError> {
    let results = read_table(results_source, Source::Results)?;
    let times = read_table(times_source, Source::Times)?;

    if results.header != times.header {
        return Err(DatasetError::HeaderMismatch {
            results: results.header,
            times: times.header,
        });
    }
    if results.labels.len() != times.labels.len() {
        return Err(DatasetError::DimensionMismatch {
            file: Source::Times,
            expected: results.labels.len(),
            found: times.labels.len(),
        });
    }
    if let Some(row) = (0..results.labels.len()).find(|&i| results.labels[i] != times.labels[i]) {
        return Err(DatasetError::RowLabelMismatch {
            row,
            results: results.labels[row].clone(),
            times: times.labels[row].clone(),
        });
    }

    let n = results.header.len();
    let mut violations = Vec::new();
    let mut result_rows = Vec::with_capacity(results.cells.len());
    let mut time_rows = Vec::with_capacity(results.cells.len());
    for (i, (rrow, trow)) in results.cells.iter().zip(&times.cells).enumerate() {
        for (source, row) in [(Source::Results, rrow), (Source::Times, trow)] {
            if row.len() != n {
                violations.push(Violation {
                    row: Some(i),
                    column: None,
                    kind: ViolationKind::RaggedRow {
                        source,
                        expected: n,
                        found: row.len(),
                    },
                });
            }
        }
        let mut values = vec![None; n];
        let mut durations = vec![None; n];
        for j in 0..n.min(rrow.len()) {
            match parse_cell(&rrow[j]) {
                Ok(v) => values[j] = v,
                Err(()) => violations.push(Violation {
                    row: Some(i),
                    column: Some(j),
                    kind: ViolationKind::NonNumeric {
                        source: Source::Results,
                        token: rrow[j].clone(),
                    },
                }),
            }
        }
        for j in 0..n.min(trow.len()) {
            let parsed = parse_cell(&trow[j]);
            if values[j].is_some() {
                match parsed {
                    Ok(t) => durations[j] = t,
                    Err(()) => violations.push(Violation {
                        row: Some(i),
                        column: Some(j),
                        kind: ViolationKind::NonNumeric {
                            source: Source::Times,
                            token: trow[j].clone(),
                        },
                    }),
                }
            } else {
                durations[j] = parsed.ok().flatten().filter(|t| t.is_finite() && *t >= 0.0);
            }
        }
        result_rows.push(values);
        time_rows.push(durations);
    }
    if !violations.is_empty() {
        // Report the structural problems together with the invariant violations.
        let more = check_parts(&results.header, &results.labels, &[], &[]);
        violations.extend(
            more.into_iter()
                .filter(|v| !matches!(v.kind, ViolationKind::RaggedRow { .. })),
        );
        return Err(DatasetError::Invalid(violations));
    }

    BenchmarkDataset::new(
        results.header,
        results.labels,
        result_rows,
        time_rows,
        direction,
        cutoff,
    )
}

fn write_matrix<W: Write>(
    writer: W,
    algorithms: &[String],
    benchmarks: &[String],
    matrix: &[Vec<Option<f64>>],
) -> csv::Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    wtr.write_record(std::iter::once("benchmark").chain(algorithms.iter().map(String::as_str)))?;
    for (name, row) in benchmarks.iter().zip(matrix) {
        let mut record = vec![name.clone()];
        record.extend(row.iter().map(|v| match v {
            Some(x) => format!("{x}"),
            None => "NA".to_owned(),
        }));
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}
