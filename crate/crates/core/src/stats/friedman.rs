use serde::Serialize;

use super::{check_alpha, chi_square_sf, StatsError};
use crate::ranking::{summarize, RankMatrix, RankSummary};

const TOTAL_TOLERANCE: f64 = 1e-9;

/// Column rank sums of an `m x n` rank matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RankSums {
    sums: Vec<f64>,
    m: usize,
}

impl RankSums {
    /// Rank sums that must add up to `m * n(n+1)/2` (relative tolerance 1e-9).
    pub fn new(sums: Vec<f64>, m: usize) -> Result<Self, StatsError> {
        let out = Self::from_published(sums, m)?;
        let expected = out.expected_total();
        let total = out.total();
        if (total - expected).abs() > TOTAL_TOLERANCE * expected {
            return Err(StatsError::InconsistentRankSums {
                total,
                expected,
                m,
                n: out.n(),
            });
        }
        Ok(out)
    }

    /// Rank sums transcribed from a published table. Only the per-treatment
    /// bounds `[m, m*n]` are enforced, since printed sums are often rounded
    /// and need not add up exactly.
    pub fn from_published(sums: Vec<f64>, m: usize) -> Result<Self, StatsError> {
        let n = sums.len();
        if n < 2 {
            return Err(StatsError::TooFewTreatments(n));
        }
        if m == 0 {
            return Err(StatsError::NoTrials);
        }
        let lo = m as f64;
        let hi = (m * n) as f64;
        for (index, &value) in sums.iter().enumerate() {
            if !(value >= lo && value <= hi) {
                return Err(StatsError::RankSumOutOfRange { index, value, lo, hi });
            }
        }
        Ok(Self { sums, m })
    }

    pub fn from_summary(summary: &RankSummary) -> Self {
        Self {
            sums: summary.rank_sums.clone(),
            m: summary.m,
        }
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.sums.len()
    }

    pub fn total(&self) -> f64 {
        self.sums.iter().sum()
    }

    pub fn expected_total(&self) -> f64 {
        let n = self.n() as f64;
        self.m as f64 * n * (n + 1.0) / 2.0
    }
}

/// Uncorrected Friedman statistic
/// `FM = 12 / (m n (n+1)) * sum s_j^2 - 3 m (n+1)`.
pub fn friedman_statistic(rank_sums: &RankSums) -> f64 {
    let m = rank_sums.m() as f64;
    let n = rank_sums.n() as f64;
    let square_sum: f64 = rank_sums.sums().iter().map(|s| s * s).sum();
    let fm = 12.0 / (m * n * (n + 1.0)) * square_sum - 3.0 * m * (n + 1.0);
    fm.max(0.0)
}

/// `1 - sum_rows sum_groups (t^3 - t) / (m (n^3 - n))`, where `t` runs over the
/// sizes of groups of equal ranks within each row.
pub fn tie_correction_factor(matrix: &RankMatrix) -> f64 {
    let m = matrix.m() as f64;
    let n = matrix.n() as f64;
    let mut ties = 0.0;
    let mut sorted = Vec::with_capacity(matrix.n());
    for row in &matrix.ranks {
        sorted.clear();
        sorted.extend_from_slice(row);
        sorted.sort_by(f64::total_cmp);
        let mut start = 0;
        while start < sorted.len() {
            let end = start + sorted[start..].iter().take_while(|&&r| r == sorted[start]).count();
            let t = (end - start) as f64;
            ties += t * t * t - t;
            start = end;
        }
    }
    1.0 - ties / (m * (n * n * n - n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FriedmanResult {
    pub statistic: f64,
    pub degrees_of_freedom: u32,
    pub p_value: f64,
    pub tie_corrected: bool,
    pub alpha: f64,
    pub reject_null: bool,
}

/// Friedman rank-sum test on a rank matrix, optionally tie-corrected.
///
/// A matrix whose every row is fully tied carries no information and is
/// rejected as degenerate whether or not the correction is requested.
pub fn friedman_test(matrix: &RankMatrix, alpha: f64, tie_correction: bool) -> Result<FriedmanResult, StatsError> {
    check_alpha(alpha)?;
    let n = matrix.n();
    if n < 2 {
        return Err(StatsError::TooFewTreatments(n));
    }
    if matrix.m() == 0 {
        return Err(StatsError::NoTrials);
    }
    let factor = tie_correction_factor(matrix);
    if factor <= 1e-12 {
        return Err(StatsError::Degenerate);
    }
    let fm = friedman_statistic(&RankSums::from_summary(&summarize(matrix)));
    let statistic = if tie_correction { fm / factor } else { fm };
    let degrees_of_freedom = (n - 1) as u32;
    let p_value = chi_square_sf(statistic, degrees_of_freedom);
    Ok(FriedmanResult {
        statistic,
        degrees_of_freedom,
        p_value,
        tie_corrected: tie_correction,
        alpha,
        reject_null: p_value < alpha,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn matrix(ranks: Vec<Vec<f64>>) -> RankMatrix {
        let n = ranks[0].len();
        RankMatrix {
            algorithm_names: (0..n).map(|j| format!("a{j}")).collect(),
            benchmark_names: (0..ranks.len()).map(|i| format!("b{i}")).collect(),
            ranks,
        }
    }

    #[test]
    fn equal_sums_give_zero() {
        let sums = RankSums::new(vec![6.0, 6.0, 6.0], 3).unwrap();
        assert_eq!(friedman_statistic(&sums), 0.0);
    }

    #[test]
    fn hand_evaluated_statistic() {
        // 12 / (3*3*4) * (9 + 36 + 81) - 3*3*4 = 42 - 36
        let sums = RankSums::new(vec![3.0, 6.0, 9.0], 3).unwrap();
        assert_relative_eq!(friedman_statistic(&sums), 6.0, max_relative = 1e-14);
    }

    #[test]
    fn published_case_study_sums() {
        // 12/1824 * 283361 - 1824 = 283361/152 - 1824
        let sums = RankSums::from_published(vec![303.0, 376.0, 224.0], 152).unwrap();
        assert_relative_eq!(friedman_statistic(&sums), 6113.0 / 152.0, max_relative = 1e-12);
        assert!(matches!(
            RankSums::new(vec![303.0, 376.0, 224.0], 152),
            Err(StatsError::InconsistentRankSums { .. })
        ));
    }

    #[test]
    fn rank_sum_validation() {
        assert_eq!(RankSums::new(vec![1.0], 1), Err(StatsError::TooFewTreatments(1)));
        assert_eq!(RankSums::new(vec![1.0, 2.0], 0), Err(StatsError::NoTrials));
        assert!(matches!(
            RankSums::new(vec![0.5, 2.5], 1),
            Err(StatsError::RankSumOutOfRange { index: 0, .. })
        ));
    }

    #[test]
    fn identical_rows() {
        let a = matrix(vec![vec![1.0, 2.0, 3.0]; 3]);
        let r = friedman_test(&a, 0.05, true).unwrap();
        assert_relative_eq!(r.statistic, 6.0, max_relative = 1e-14);
        assert_eq!(r.degrees_of_freedom, 2);
        assert_relative_eq!(r.p_value, (-3.0f64).exp(), max_relative = 1e-12);
        assert!(r.reject_null);
        assert_eq!(friedman_test(&a, 0.05, false).unwrap().statistic, r.statistic);
    }

    #[test]
    fn fully_tied_rows_are_degenerate() {
        let a = matrix(vec![vec![1.5, 1.5]; 4]);
        assert_eq!(friedman_test(&a, 0.05, true), Err(StatsError::Degenerate));
        assert_eq!(friedman_test(&a, 0.05, false), Err(StatsError::Degenerate));
    }

    #[test]
    fn tie_correction_scales_statistic() {
        // Row ties: (1.5, 1.5, 3) contributes 2^3 - 2 = 6; m(n^3 - n) = 2 * 24.
        let a = matrix(vec![vec![1.5, 1.5, 3.0], vec![1.0, 2.0, 3.0]]);
        assert_relative_eq!(tie_correction_factor(&a), 1.0 - 6.0 / 48.0);
        let raw = friedman_test(&a, 0.05, false).unwrap();
        let corrected = friedman_test(&a, 0.05, true).unwrap();
        assert_relative_eq!(corrected.statistic, raw.statistic / 0.875, max_relative = 1e-14);
        assert!(corrected.tie_corrected && !raw.tie_corrected);
    }

    #[test]
    fn invalid_alpha() {
        let a = matrix(vec![vec![1.0, 2.0]]);
        assert_eq!(friedman_test(&a, 0.0, true), Err(StatsError::InvalidAlpha(0.0)));
        assert_eq!(friedman_test(&a, 1.0, true), Err(StatsError::InvalidAlpha(1.0)));
    }
}
