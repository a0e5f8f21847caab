//! Independent reference implementations used only by tests.
//!
//! Nothing here calls into the ranking or statistics code of `benchrank-core`;
//! the crate only borrows its data types.

use benchrank_core::{BenchmarkDataset, Direction};
use rand::Rng;

/// Midranks by pairwise counting: rank = 1 + #better + #tied / 2, where
/// "better" follows the lexicographic (value, time) key with missing last.
pub fn brute_midranks(values: &[Option<f64>], times: &[Option<f64>], direction: Direction) -> Vec<f64> {
    let key = |j: usize| -> Option<(f64, f64)> {
        values[j].map(|v| {
            let v = if direction == Direction::Maximize { -v } else { v };
            (v, times[j].expect("time for present value"))
        })
    };
    let n = values.len();
    (0..n)
        .map(|i| {
            let mut better = 0usize;
            let mut tied = 0usize;
            for j in (0..n).filter(|&j| j != i) {
                match (key(i), key(j)) {
                    (None, None) => tied += 1,
                    (None, Some(_)) => better += 1,
                    (Some(_), None) => {}
                    (Some(a), Some(b)) => {
                        if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                            better += 1;
                        } else if b.0 == a.0 && b.1 == a.1 {
                            tied += 1;
                        }
                    }
                }
            }
            1.0 + better as f64 + tied as f64 / 2.0
        })
        .collect()
}

/// Uncorrected Friedman statistic by direct column summation.
pub fn brute_friedman(ranks: &[Vec<f64>]) -> f64 {
    let m = ranks.len();
    let n = ranks[0].len();
    let mut total = 0.0;
    for j in 0..n {
        let mut s = 0.0;
        for row in ranks {
            s += row[j];
        }
        total += s * s;
    }
    let (mf, nf) = (m as f64, n as f64);
    12.0 / (mf * nf * (nf + 1.0)) * total - 3.0 * mf * (nf + 1.0)
}

fn permutations(items: &[f64]) -> Vec<Vec<f64>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Exact permutation p-value of the uncorrected Friedman statistic: each row
/// is permuted independently under the null, enumerating every combination.
pub fn exact_friedman_pvalue(ranks: &[Vec<f64>]) -> f64 {
    let observed = brute_friedman(ranks);
    let row_perms: Vec<Vec<Vec<f64>>> = ranks.iter().map(|r| permutations(r)).collect();
    let mut index = vec![0usize; ranks.len()];
    let (mut extreme, mut total) = (0u64, 0u64);
    loop {
        let table: Vec<Vec<f64>> = index.iter().zip(&row_perms).map(|(&k, p)| p[k].clone()).collect();
        total += 1;
        if brute_friedman(&table) >= observed - 1e-9 {
            extreme += 1;
        }
        let mut pos = 0;
        loop {
            if pos == index.len() {
                return extreme as f64 / total as f64;
            }
            index[pos] += 1;
            if index[pos] < row_perms[pos].len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// A random row with values drawn from a tiny alphabet so that value ties,
/// time ties and missing cells all occur often.
pub fn random_row<R: Rng>(rng: &mut R, n: usize) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
    let missing_rate = rng.gen_range(0.0..0.6);
    let mut values = Vec::with_capacity(n);
    let mut times = Vec::with_capacity(n);
    for _ in 0..n {
        if rng.gen_bool(missing_rate) {
            values.push(None);
            times.push(if rng.gen_bool(0.5) {
                Some(f64::from(rng.gen_range(0..5u8)))
            } else {
                None
            });
        } else {
            values.push(Some(f64::from(rng.gen_range(-3..4i8)) * 0.5));
            times.push(Some(f64::from(rng.gen_range(0..4u8))));
        }
    }
    (values, times)
}

pub fn random_dataset<R: Rng>(rng: &mut R, m: usize, n: usize, direction: Direction) -> BenchmarkDataset {
    let (results, times): (Vec<_>, Vec<_>) = (0..m).map(|_| random_row(rng, n)).unzip();
    BenchmarkDataset::new(
        (0..n).map(|j| format!("alg{j}")).collect(),
        (0..m).map(|i| format!("bench{i}")).collect(),
        results,
        times,
        direction,
        None,
    )
    .expect("generated dataset is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_examples() {
        let r = brute_midranks(&[None, Some(6.0), None], &[None, Some(3.0), None], Direction::Minimize);
        assert_eq!(r, vec![2.5, 1.0, 2.5]);
        assert_eq!(brute_friedman(&vec![vec![1.0, 2.0, 3.0]; 3]), 6.0);
    }

    #[test]
    fn permutation_pvalue_small() {
        // Two rows of two: four equally likely tables, FM in {2, 0, 0, 2}.
        let p = exact_friedman_pvalue(&[vec![1.0, 2.0], vec![1.0, 2.0]]);
        assert_eq!(p, 0.5);
    }
}
