//! Tail probabilities of the chi-square and large-sample studentized range
//! distributions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::OnceLock;

use libm::{erfc, lgamma as ln_gamma};

/// Standard normal upper tail `P(Z > z)`, accurate in both tails.
#[inline]
pub fn normal_sf(z: f64) -> f64 {
    0.5 * erfc(z * FRAC_1_SQRT_2)
}

#[inline]
fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * PI).sqrt()
}

/// `P(X >= x)` for `X ~ chi-square(df)`.
///
/// Integer degrees of freedom admit exact finite expansions of the regularized
/// upper incomplete gamma function `Q(df/2, x/2)`:
/// even `df = 2a`: `Q = e^{-h} * sum_{k<a} h^k / k!`;
/// odd `df = 2j + 1`: `Q = erfc(sqrt h) + e^{-h} * sum_{k=1..j} h^{k-1/2} / Gamma(k + 1/2)`,
/// with `h = x/2`. All terms are positive, so there is no cancellation.
pub fn chi_square_sf(x: f64, df: u32) -> f64 {
    assert!(df >= 1, "degrees of freedom must be positive");
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 1.0;
    }
    if x == f64::INFINITY {
        return 0.0;
    }
    let h = x / 2.0;
    let ln_h = h.ln();
    let q = if df.is_multiple_of(2) {
        let a = df / 2;
        (0..a)
            .map(|k| {
                let k = f64::from(k);
                (-h + k * ln_h - ln_gamma(k + 1.0)).exp()
            })
            .sum::<f64>()
    } else {
        let j = (df - 1) / 2;
        let series: f64 = (1..=j)
            .map(|k| {
                let s = f64::from(k) - 0.5;
                (-h + s * ln_h - ln_gamma(s + 1.0)).exp()
            })
            .sum();
        erfc(h.sqrt()) + series
    };
    q.clamp(0.0, 1.0)
}

const GAUSS_ORDER: usize = 20;
const PANEL_WIDTH: f64 = 0.5;
const TAIL_TOLERANCE: f64 = 1e-18;

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GAUSS_ORDER;
        let nf = n as f64;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = nf * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

fn integrate(f: &impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    let panels = ((hi - lo) / PANEL_WIDTH).ceil().max(1.0) as usize;
    let width = (hi - lo) / panels as f64;
    let rule = gauss_legendre();
    (0..panels)
        .map(|p| {
            let a = lo + p as f64 * width;
            let mid = a + width / 2.0;
            let half = width / 2.0;
            rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>() * half
        })
        .sum()
}

/// `P(Q >= q)` where `Q` is the range of `k` independent standard normals
/// (studentized range with infinite degrees of freedom).
///
/// Writing `z` for the sample minimum, `S` for the normal upper tail,
/// `a = S(z)` and `b = S(z) - S(z + q)`:
///
/// `P(Q >= q) = k * integral phi(z) * (a^{k-1} - b^{k-1}) dz`
///
/// and `a^{k-1} - b^{k-1} = S(z+q) * sum_{i<k-1} a^i b^{k-2-i}`, which keeps the
/// integrand positive and resolves tails far below machine epsilon.
pub fn studentized_range_sf(q: f64, k: usize) -> f64 {
    assert!(k >= 2, "studentized range needs at least 2 groups");
    if q.is_nan() {
        return f64::NAN;
    }
    if q <= 0.0 {
        return 1.0;
    }
    if q == f64::INFINITY {
        return 0.0;
    }
    let kf = k as f64;
    let power = k - 1;
    let integrand = |z: f64| {
        let a = normal_sf(z);
        let upper = normal_sf(z + q);
        let b = (a - upper).max(0.0);
        let mut sum = 0.0;
        let mut a_pow = 1.0;
        for i in 0..power {
            sum += a_pow * b.powi((power - 1 - i) as i32);
            a_pow *= a;
        }
        kf * normal_pdf(z) * upper * sum
    };

    // The integrand peaks near z = -q/2 for wide ranges and near the minimum's
    // mode for narrow ones; start from a window covering both.
    let mut lo = (-q / 2.0 - 9.0).min(-9.0);
    let mut hi = 9.0;
    let mut total = integrate(&integrand, lo, hi);
    for _ in 0..16 {
        let scale = total.max(f64::MIN_POSITIVE);
        let lo_tail = integrand(lo) > TAIL_TOLERANCE * scale;
        let hi_tail = integrand(hi) > TAIL_TOLERANCE * scale;
        if !lo_tail && !hi_tail {
            break;
        }
        if lo_tail {
            total += integrate(&integrand, lo - 4.0, lo);
            lo -= 4.0;
        }
        if hi_tail {
            total += integrate(&integrand, hi, hi + 4.0);
            hi += 4.0;
        }
    }
    total.clamp(0.0, 1.0)
}
