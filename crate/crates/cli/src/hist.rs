//! Rank histogram as a standalone SVG plus the counts behind it as CSV.

use std::fmt::Write as _;

use benchrank_core::{RankBucket, RankSummary};

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f",
];

const BAR: f64 = 16.0;
const BAR_GAP: f64 = 2.0;
const GROUP_GAP: f64 = 28.0;
const PLOT_HEIGHT: f64 = 240.0;
const LEFT: f64 = 56.0;
const TOP: f64 = 48.0;
const BOTTOM: f64 = 56.0;
const LEGEND: f64 = 110.0;

fn count(summary: &RankSummary, algorithm: usize, bucket: RankBucket) -> usize {
    summary.histogram[algorithm].get(&bucket).copied().unwrap_or(0)
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn csv_cell(text: &str) -> String {
    if text.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

/// One row per algorithm, one column per rank value that occurs anywhere.
pub fn histogram_csv(summary: &RankSummary) -> String {
    let buckets = summary.buckets();
    let mut out = String::from("algorithm");
    for b in &buckets {
        let _ = write!(out, ",{b}");
    }
    out.push('\n');
    for (j, name) in summary.algorithm_names.iter().enumerate() {
        out.push_str(&csv_cell(name));
        for &b in &buckets {
            let _ = write!(out, ",{}", count(summary, j, b));
        }
        out.push('\n');
    }
    out
}

/// Smallest of 1, 2, 5 times a power of ten giving at most five ticks.
fn tick_step(max: usize) -> usize {
    let target = max.div_ceil(5).max(1);
    let mut scale = 1;
    loop {
        for f in [1, 2, 5] {
            if f * scale >= target {
                return f * scale;
            }
        }
        scale *= 10;
    }
}

pub fn histogram_svg(summary: &RankSummary) -> String {
    let buckets = summary.buckets();
    let n = summary.algorithm_names.len();
    let group = buckets.len() as f64 * (BAR + BAR_GAP) - BAR_GAP;
    let plot_width = n as f64 * group + (n as f64 + 1.0) * GROUP_GAP;
    let width = LEFT + plot_width + LEGEND;
    let height = TOP + PLOT_HEIGHT + BOTTOM;
    let max = summary
        .histogram
        .iter()
        .flat_map(|h| h.values().copied())
        .max()
        .unwrap_or(0);
    let step = tick_step(max);
    let top_tick = max.div_ceil(step).max(1) * step;
    let y = |c: usize| TOP + PLOT_HEIGHT * (1.0 - c as f64 / top_tick as f64);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">Rank histogram over {} benchmarks</text>"#,
        LEFT + plot_width / 2.0,
        summary.m
    );

    let mut tick = 0;
    while tick <= top_tick {
        let ty = y(tick);
        let _ = writeln!(
            s,
            r##"<line x1="{LEFT:.1}" y1="{ty:.1}" x2="{:.1}" y2="{ty:.1}" stroke="#dddddd"/>"##,
            LEFT + plot_width
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{tick}</text>"#,
            LEFT - 6.0,
            ty + 4.0
        );
        tick += step;
    }
    let base = y(0);
    let _ = writeln!(
        s,
        r#"<line x1="{LEFT:.1}" y1="{base:.1}" x2="{:.1}" y2="{base:.1}" stroke="black"/>"#,
        LEFT + plot_width
    );
    let _ = writeln!(
        s,
        r#"<text transform="translate(16 {:.1}) rotate(-90)" text-anchor="middle">benchmarks</text>"#,
        TOP + PLOT_HEIGHT / 2.0
    );

    for (j, name) in summary.algorithm_names.iter().enumerate() {
        let x0 = LEFT + GROUP_GAP + j as f64 * (group + GROUP_GAP);
        let name = escape(name);
        let _ = writeln!(s, r#"<g class="algorithm" data-name="{name}">"#);
        for (k, &b) in buckets.iter().enumerate() {
            let c = count(summary, j, b);
            let x = x0 + k as f64 * (BAR + BAR_GAP);
            let top = y(c);
            let _ = writeln!(
                s,
                r#"<rect x="{x:.1}" y="{top:.1}" width="{BAR:.1}" height="{:.1}" fill="{}" data-rank="{b}" data-count="{c}"><title>{name}: rank {b} on {c} benchmarks</title></rect>"#,
                base - top,
                PALETTE[k % PALETTE.len()]
            );
            if c > 0 {
                let _ = writeln!(
                    s,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{c}</text>"#,
                    x + BAR / 2.0,
                    top - 3.0
                );
            }
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{name}</text>"#,
            x0 + group / 2.0,
            base + 20.0
        );
        s.push_str("</g>\n");
    }

    let lx = LEFT + plot_width + 16.0;
    for (k, b) in buckets.iter().enumerate() {
        let ly = TOP + k as f64 * 18.0;
        let _ = writeln!(
            s,
            r#"<rect x="{lx:.1}" y="{ly:.1}" width="12" height="12" fill="{}"/>"#,
            PALETTE[k % PALETTE.len()]
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">rank {b}</text>"#, lx + 18.0, ly + 10.0);
    }
    s.push_str("</svg>\n");
    s
}
