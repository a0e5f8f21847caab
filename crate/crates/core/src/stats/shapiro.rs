//! Shapiro-Wilk W test for complete samples (Royston's AS R94).

use std::f64::consts::PI;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::{normal_sf, StatsError};

// Polynomial coefficients, ascending powers.
const C1: [f64; 6] = [0.0, 0.221_157, -0.147_981, -2.071_190, 4.434_685, -2.706_056];
const C2: [f64; 6] = [0.0, 0.042_981, -0.293_762, -1.752_461, 5.682_633, -3.582_633];
const C3: [f64; 4] = [0.544, -0.399_78, 0.025_054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.778_57, 0.062_767, -0.002_032_2];
const C5: [f64; 4] = [-1.5861, -0.310_82, -0.083_751, 0.003_891_5];
const C6: [f64; 3] = [-0.4803, -0.082_676, 0.003_030_2];
const G: [f64; 2] = [-2.273, 0.459];

const MIN_P: f64 = 1e-19;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapiroResult {
    pub w_statistic: f64,
    pub p_value: f64,
    pub sample_size: usize,
}

fn poly(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Coefficients for the upper half of the ordered sample, largest first.
fn weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let standard = Normal::new(0.0, 1.0).expect("standard normal");
    let nf = n as f64;
    let scores: Vec<f64> = (1..=half)
        .map(|i| -standard.inverse_cdf((i as f64 - 0.375) / (nf + 0.25)))
        .collect();
    let summ2 = 2.0 * scores.iter().map(|s| s * s).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / nf.sqrt();

    let mut a = vec![0.0; half];
    a[0] = poly(&C1, rsn) + scores[0] / ssumm2;
    let (first_scaled, fac) = if n > 5 {
        a[1] = poly(&C2, rsn) + scores[1] / ssumm2;
        let num = summ2 - 2.0 * scores[0].powi(2) - 2.0 * scores[1].powi(2);
        let den = 1.0 - 2.0 * a[0].powi(2) - 2.0 * a[1].powi(2);
        (2, (num / den).sqrt())
    } else {
        let num = summ2 - 2.0 * scores[0].powi(2);
        let den = 1.0 - 2.0 * a[0].powi(2);
        (1, (num / den).sqrt())
    };
    for i in first_scaled..half {
        a[i] = scores[i] / fac;
    }
    a
}

/// Shapiro-Wilk test of normality, for sample sizes 3 through 5000.
pub fn shapiro_wilk(sample: &[f64]) -> Result<ShapiroResult, StatsError> {
    let n = sample.len();
    if !(3..=5000).contains(&n) {
        return Err(StatsError::SampleSize(n));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if range <= 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    // Scaling by the range keeps the sums well conditioned; W is scale free.
    let mean = x.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = x.iter().map(|v| (v - mean) / range).collect();
    let ss: f64 = centered.iter().map(|v| v * v).sum();

    let a = weights(n);
    let numerator: f64 = a
        .iter()
        .enumerate()
        .map(|(i, ai)| ai * (centered[n - 1 - i] - centered[i]))
        .sum();
    let w = (numerator * numerator / ss).min(1.0);

    Ok(ShapiroResult {
        w_statistic: w,
        p_value: p_value(w, n),
        sample_size: n,
    })
}

fn p_value(w: f64, n: usize) -> f64 {
    let nf = n as f64;
    if n == 3 {
        let p = 1.0 - 6.0 / PI * w.sqrt().acos();
        return p.clamp(0.0, 1.0);
    }
    let y = (1.0 - w).ln();
    if n <= 11 {
        let gamma = poly(&G, nf);
        if y >= gamma {
            return MIN_P;
        }
        let y = -(gamma - y).ln();
        let mean = poly(&C3, nf);
        let sd = poly(&C4, nf).exp();
        normal_sf((y - mean) / sd)
    } else {
        let ln_n = nf.ln();
        let mean = poly(&C5, ln_n);
        let sd = poly(&C6, ln_n).exp();
        normal_sf((y - mean) / sd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn three_point_closed_form() {
        let r = shapiro_wilk(&[-1.0, 0.0, 1.0]).unwrap();
        assert_relative_eq!(r.w_statistic, 1.0, epsilon = 1e-12);
        assert_relative_eq!(r.p_value, 1.0, epsilon = 1e-6);
        assert_eq!(r.sample_size, 3);
    }

    #[test]
    fn weights_are_normalized() {
        for n in [4, 5, 6, 11, 12, 50, 999] {
            let a = weights(n);
            assert_relative_eq!(2.0 * a.iter().map(|v| v * v).sum::<f64>(), 1.0, epsilon = 1e-12);
            assert!(a.windows(2).all(|w| w[0] > w[1]), "n = {n}");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(shapiro_wilk(&[5.0, 5.0, 5.0, 5.0]), Err(StatsError::ZeroVariance));
        assert_eq!(shapiro_wilk(&[1.0, 2.0]), Err(StatsError::SampleSize(2)));
        assert_eq!(shapiro_wilk(&vec![1.0; 5001]), Err(StatsError::SampleSize(5001)));
        assert_eq!(shapiro_wilk(&[1.0, f64::NAN, 2.0]), Err(StatsError::NonFinite));
    }

    // Reference values: scipy.stats.shapiro (AS R94), computed once and frozen.
    #[test]
    fn small_sample_branch() {
        let r = shapiro_wilk(&[0.1, 0.4, 0.35, 0.8, 0.2]).unwrap();
        assert_relative_eq!(r.w_statistic, 0.915_632_848_591_184_2, epsilon = 1e-4);
        assert_relative_eq!(r.p_value, 0.502_168_061_386_609_3, epsilon = 1e-3);

        let r = shapiro_wilk(&[1.0, 2.0, 3.0, 7.5, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0]).unwrap();
        assert_relative_eq!(r.w_statistic, 0.960_243_128_498_914_8, epsilon = 1e-4);
        assert_relative_eq!(r.p_value, 0.774_721_045_440_641_2, epsilon = 1e-3);
    }

    #[test]
    fn tied_rank_column() {
        let ranks = [
            1.0, 2.0, 2.0, 3.0, 3.0, 3.0, 1.0, 1.0, 2.0, 3.0, 1.0, 2.0, 3.0, 3.0, 3.0, 1.5, 1.5, 2.5, 2.5, 1.0,
        ];
        let r = shapiro_wilk(&ranks).unwrap();
        assert_relative_eq!(r.w_statistic, 0.832_736_927_288_473, epsilon = 1e-4);
        assert_relative_eq!(r.p_value, 0.002_775_675_760_423_302, max_relative = 1e-2);
    }
}
