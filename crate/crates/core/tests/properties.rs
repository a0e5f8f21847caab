use benchrank_core::dataset::parse_dataset;
use benchrank_core::stats::{chi_square_sf, studentized_range_sf};
use benchrank_core::{
    build_rank_matrix, ert, friedman_statistic, nemenyi, par10, rank_row, shapiro_wilk, BenchmarkDataset, Direction,
    RankSums,
};
use benchrank_testkit::{brute_midranks, random_dataset};
use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn direction() -> impl Strategy<Value = Direction> {
    prop_oneof![Just(Direction::Minimize), Just(Direction::Maximize)]
}

/// Rows with frequent ties: values and times from small alphabets, some missing.
fn row(max_n: usize) -> impl Strategy<Value = (Vec<Option<f64>>, Vec<Option<f64>>)> {
    vec((prop::option::weighted(0.7, -3i8..4), 0u8..4), 2..=max_n).prop_map(|cells| {
        cells
            .into_iter()
            .map(|(v, t)| (v.map(|v| f64::from(v) * 0.5), v.map(|_| f64::from(t))))
            .unzip()
    })
}

proptest! {
    #[test]
    fn ranking_matches_pairwise_oracle((values, times) in row(7), dir in direction()) {
        let ranks = rank_row(&values, &times, dir).unwrap();
        prop_assert_eq!(ranks, brute_midranks(&values, &times, dir));
    }

    #[test]
    fn row_sum_and_bounds((values, times) in row(9), dir in direction()) {
        let ranks = rank_row(&values, &times, dir).unwrap();
        let n = ranks.len() as f64;
        prop_assert_eq!(ranks.iter().sum::<f64>(), n * (n + 1.0) / 2.0);
        prop_assert!(ranks.iter().all(|&r| (1.0..=n).contains(&r)));
        // sorted ranks form a midrank sequence: each tie group of size t
        // starting at position p carries p + (t + 1) / 2
        let mut sorted = ranks.clone();
        sorted.sort_by(f64::total_cmp);
        let mut p = 0;
        while p < sorted.len() {
            let t = sorted[p..].iter().take_while(|&&r| r == sorted[p]).count();
            prop_assert_eq!(sorted[p], p as f64 + (t as f64 + 1.0) / 2.0);
            p += t;
        }
    }

    #[test]
    fn missing_ranks_last((values, times) in row(8), dir in direction()) {
        let ranks = rank_row(&values, &times, dir).unwrap();
        for (i, vi) in values.iter().enumerate() {
            for (j, vj) in values.iter().enumerate() {
                if vi.is_none() && vj.is_some() {
                    prop_assert!(ranks[i] > ranks[j]);
                }
                if vi.is_none() && vj.is_none() {
                    prop_assert_eq!(ranks[i], ranks[j]);
                }
            }
        }
    }

    #[test]
    fn permutation_equivariance((values, times) in row(7), dir in direction(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..values.len()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let pv: Vec<_> = perm.iter().map(|&k| values[k]).collect();
        let pt: Vec<_> = perm.iter().map(|&k| times[k]).collect();
        let ranks = rank_row(&values, &times, dir).unwrap();
        let permuted = rank_row(&pv, &pt, dir).unwrap();
        for (pos, &k) in perm.iter().enumerate() {
            prop_assert_eq!(permuted[pos], ranks[k]);
        }
    }

    #[test]
    fn monotone_transform_invariance((values, times) in row(7), dir in direction()) {
        let transformed: Vec<_> = values.iter().map(|v| v.map(|x| (x * 0.7).exp() + 3.0 * x.powi(3))).collect();
        prop_assert_eq!(rank_row(&values, &times, dir).unwrap(), rank_row(&transformed, &times, dir).unwrap());
    }

    #[test]
    fn direction_duality((values, times) in row(7)) {
        let negated: Vec<_> = values.iter().map(|v| v.map(|x| -x)).collect();
        prop_assert_eq!(
            rank_row(&values, &times, Direction::Maximize).unwrap(),
            rank_row(&negated, &times, Direction::Minimize).unwrap()
        );
    }

    #[test]
    fn ranking_ranks_is_idempotent(perm in Just((1..=6).map(f64::from).collect::<Vec<_>>()).prop_shuffle()) {
        let values: Vec<_> = perm.iter().copied().map(Some).collect();
        let times = vec![Some(1.0); values.len()];
        prop_assert_eq!(rank_row(&values, &times, Direction::Minimize).unwrap(), perm);
    }

    #[test]
    fn csv_round_trip(seed in any::<u64>(), m in 1usize..6, n in 2usize..5, dir in direction()) {
        let ds = random_dataset(&mut ChaCha8Rng::seed_from_u64(seed), m, n, dir);
        let (mut r, mut t) = (Vec::new(), Vec::new());
        ds.write_results(&mut r).unwrap();
        ds.write_times(&mut t).unwrap();
        let back = parse_dataset(r.as_slice(), t.as_slice(), dir, None).unwrap();
        prop_assert_eq!(back.results(), ds.results());
        prop_assert_eq!(back.times(), ds.times());
        prop_assert_eq!((back.m(), back.n()), (m, n));
        prop_assert_eq!(back.missing_counts(), ds.missing_counts());
    }

    #[test]
    fn friedman_depends_on_multiset(seed in any::<u64>(), m in 1usize..8, n in 2usize..6) {
        use rand::seq::SliceRandom;
        let ds = random_dataset(&mut ChaCha8Rng::seed_from_u64(seed), m, n, Direction::Minimize);
        let summary = benchrank_core::summarize(&build_rank_matrix(&ds).unwrap());
        let mut shuffled = summary.rank_sums.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 1));
        let a = friedman_statistic(&RankSums::new(summary.rank_sums.clone(), m).unwrap());
        let b = friedman_statistic(&RankSums::new(shuffled, m).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn nemenyi_symmetric_and_equivariant(seed in any::<u64>(), m in 1usize..8, n in 2usize..6) {
        let ds = random_dataset(&mut ChaCha8Rng::seed_from_u64(seed), m, n, Direction::Minimize);
        let sums = benchrank_core::summarize(&build_rank_matrix(&ds).unwrap()).rank_sums;
        let r = nemenyi(&RankSums::new(sums.clone(), m).unwrap(), 0.05).unwrap();
        let mut reversed = sums.clone();
        reversed.reverse();
        let rr = nemenyi(&RankSums::new(reversed, m).unwrap(), 0.05).unwrap();
        for i in 0..n {
            prop_assert_eq!(r.statistics[i][i], 0.0);
            for j in 0..n {
                prop_assert_eq!(r.statistics[i][j], r.statistics[j][i]);
                prop_assert_eq!(r.statistics[i][j], rr.statistics[n - 1 - i][n - 1 - j]);
                prop_assert_eq!(r.p_values[i][j], rr.p_values[n - 1 - i][n - 1 - j]);
                // larger statistic never has a larger p-value
                for k in 0..n {
                    for l in 0..n {
                        if r.statistics[i][j] > r.statistics[k][l] {
                            prop_assert!(r.p_values[i][j] <= r.p_values[k][l]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tails_bounded_and_monotone(x in 0.0f64..200.0, dx in 0.0f64..20.0, df in 1u32..30, k in 2usize..8) {
        let (a, b) = (chi_square_sf(x, df), chi_square_sf(x + dx, df));
        prop_assert!((0.0..=1.0).contains(&a) && b <= a);
        let q = x / 10.0;
        let (c, d) = (studentized_range_sf(q, k), studentized_range_sf(q + dx / 4.0, k));
        prop_assert!((0.0..=1.0).contains(&c) && d <= c * (1.0 + 1e-12));
    }

    #[test]
    fn chi_square_df2_is_exponential(x in 0.0f64..1000.0) {
        let expected = (-x / 2.0).exp();
        prop_assert!((chi_square_sf(x, 2) - expected).abs() <= 1e-12 * expected.max(f64::MIN_POSITIVE) + 1e-300);
    }

    #[test]
    fn shapiro_location_scale(sample in vec(-100.0f64..100.0, 3..60), a in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0], b in -1e3f64..1e3) {
        prop_assume!(sample.iter().any(|x| *x != sample[0]));
        let w = shapiro_wilk(&sample).unwrap().w_statistic;
        let moved: Vec<f64> = sample.iter().map(|x| a * x + b).collect();
        let w2 = shapiro_wilk(&moved).unwrap().w_statistic;
        prop_assert!((w - w2).abs() <= 1e-10, "{} vs {}", w, w2);
        prop_assert!(w > 0.0 && w <= 1.0);
    }

    #[test]
    fn par10_properties(times in vec(prop::option::of(0.0f64..100.0), 1..20), extra in 0usize..5) {
        let plain: Vec<_> = times.iter().flatten().map(|t| Some(*t)).collect();
        if !plain.is_empty() {
            let mean = plain.iter().flatten().sum::<f64>() / plain.len() as f64;
            prop_assert!((par10(&plain, 100.0).unwrap() - mean).abs() <= 1e-12 * mean.max(1.0));
        }
        // replacing solved entries by missing ones never lowers the score
        let mut worse = times.clone();
        for t in worse.iter_mut().take(extra) {
            *t = None;
        }
        prop_assert!(par10(&worse, 100.0).unwrap() >= par10(&times, 100.0).unwrap());
    }

    #[test]
    fn ert_properties(cells in vec((0.0f64..1e3, any::<bool>()), 1..30), c in 0.001f64..1e3) {
        let (times, success): (Vec<f64>, Vec<bool>) = cells.into_iter().unzip();
        let Some(e) = ert(&times, &success).unwrap() else {
            prop_assert!(success.iter().all(|s| !s));
            return Ok(());
        };
        let ok: Vec<f64> = times.iter().zip(&success).filter(|p| *p.1).map(|p| *p.0).collect();
        let rt_s = ok.iter().sum::<f64>() / ok.len() as f64;
        prop_assert!(e >= rt_s * (1.0 - 1e-15));
        if success.iter().all(|s| *s) {
            prop_assert_eq!(e, rt_s);
        }
        let scaled: Vec<f64> = times.iter().map(|t| t * c).collect();
        let es = ert(&scaled, &success).unwrap().unwrap();
        prop_assert!((es - c * e).abs() <= 1e-10 * (c * e).max(f64::MIN_POSITIVE));
    }
}

#[test]
fn dataset_dimensions_reported_exactly() {
    let ds: BenchmarkDataset = random_dataset(&mut ChaCha8Rng::seed_from_u64(7), 13, 4, Direction::Minimize);
    assert_eq!((ds.m(), ds.n()), (13, 4));
    let a = build_rank_matrix(&ds).unwrap();
    assert_eq!((a.m(), a.n()), (13, 4));
}
