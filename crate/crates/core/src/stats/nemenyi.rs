use serde::Serialize;

use super::{check_alpha, studentized_range_sf, RankSums, StatsError};

/// Pairwise Nemenyi comparison. Matrices are indexed by algorithm position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosthocResult {
    pub statistics: Vec<Vec<f64>>,
    pub p_values: Vec<Vec<f64>>,
    pub alpha: f64,
    pub significant: Vec<Vec<bool>>,
}

impl PosthocResult {
    /// Unordered pairs `(i, j)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.statistics.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }
}

/// Nemenyi post-hoc test on Friedman rank sums using the large-sample
/// studentized range distribution:
/// `q_ij = |s_i - s_j| / sqrt(m n (n+1) / 12)`.
pub fn nemenyi(rank_sums: &RankSums, alpha: f64) -> Result<PosthocResult, StatsError> {
    check_alpha(alpha)?;
    let n = rank_sums.n();
    let m = rank_sums.m() as f64;
    let nf = n as f64;
    let scale = (m * nf * (nf + 1.0) / 12.0).sqrt();
    let sums = rank_sums.sums();

    let mut statistics = vec![vec![0.0; n]; n];
    let mut p_values = vec![vec![1.0; n]; n];
    let mut significant = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let q = (sums[i] - sums[j]).abs() / scale;
            let p = studentized_range_sf(q, n);
            statistics[i][j] = q;
            statistics[j][i] = q;
            p_values[i][j] = p;
            p_values[j][i] = p;
            significant[i][j] = p < alpha;
            significant[j][i] = p < alpha;
        }
    }
    Ok(PosthocResult {
        statistics,
        p_values,
        alpha,
        significant,
    })
}
