//! Text and CSV renderings. JSON goes through [`crate::json`].

use std::ffi::OsStr;
use std::fmt::Write as _;

use benchrank_core::RankMatrix;

use crate::report::{AnalysisReport, Outcome, Scores};

pub const NO_COLOR_VAR: &str = "BENCHRANK_NO_COLOR";

/// ANSI styling; a no-op when disabled.
#[derive(Debug, Clone, Copy)]
pub struct Style {
    enabled: bool,
}

impl Style {
    pub fn plain() -> Self {
        Self { enabled: false }
    }

    /// Styled only for a terminal, and never when the opt-out variable is set.
    pub fn detect(no_color: Option<&OsStr>, terminal: bool) -> Self {
        Self {
            enabled: terminal && no_color.is_none(),
        }
    }

    fn paint(self, code: &str, text: &str) -> String {
        if self.enabled {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn heading(self, text: &str) -> String {
        self.paint("1", text)
    }

    fn good(self, text: &str) -> String {
        self.paint("32", text)
    }

    fn bad(self, text: &str) -> String {
        self.paint("31", text)
    }
}

fn opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

fn outcome_text<T: Copy>(o: &Outcome<T>, show: impl Fn(T) -> String) -> String {
    match (&o.value, &o.reason) {
        (Some(v), _) => show(*v),
        (None, Some(reason)) => format!("n/a ({reason})"),
        (None, None) => "n/a".to_string(),
    }
}

fn table(rows: &[Vec<String>]) -> String {
    let columns = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..columns)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::from(" ");
        for (c, cell) in row.iter().enumerate() {
            let _ = write!(line, " {cell:<width$}", width = widths[c]);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn rank_text(matrix: &RankMatrix) -> String {
    let mut rows = vec![std::iter::once("benchmark".to_string())
        .chain(matrix.algorithm_names.iter().cloned())
        .collect::<Vec<_>>()];
    for (name, ranks) in matrix.benchmark_names.iter().zip(&matrix.ranks) {
        rows.push(
            std::iter::once(name.clone())
                .chain(ranks.iter().map(f64::to_string))
                .collect(),
        );
    }
    table(&rows)
}

pub fn rank_csv(matrix: &RankMatrix) -> String {
    let mut out = Vec::new();
    matrix.write_csv(&mut out).expect("writing to memory");
    String::from_utf8(out).expect("CSV of UTF-8 names")
}

fn csv_line(cells: &[String]) -> String {
    let quoted: Vec<String> = cells
        .iter()
        .map(|c| {
            if c.contains([',', '"', '\n', '\r']) {
                format!("\"{}\"", c.replace('"', "\"\""))
            } else {
                c.clone()
            }
        })
        .collect();
    quoted.join(",") + "\n"
}

fn scores_rows(scores: &Scores) -> Vec<Vec<String>> {
    let mut rows = vec![["algorithm", "solved", "unsolved", "par10", "ert"]
        .map(String::from)
        .to_vec()];
    for s in &scores.algorithms {
        rows.push(vec![
            s.algorithm.clone(),
            s.solved.to_string(),
            s.unsolved.to_string(),
            outcome_text(&s.par10, |v| format!("{v:.4}")),
            outcome_text(&s.ert, |v| format!("{v:.4}")),
        ]);
    }
    rows
}

pub fn scores_text(scores: &Scores, style: Style) -> String {
    let mut out = style.heading("Runtime scores");
    match scores.cutoff {
        Some(c) => {
            let _ = writeln!(out, " (cutoff {c})");
        }
        None => out.push_str(" (no cutoff)\n"),
    }
    out + &table(&scores_rows(scores))
}

pub fn scores_csv(scores: &Scores) -> String {
    let mut out = csv_line(&["algorithm", "solved", "unsolved", "par10", "ert"].map(String::from));
    for s in &scores.algorithms {
        out += &csv_line(&[
            s.algorithm.clone(),
            s.solved.to_string(),
            s.unsolved.to_string(),
            opt(s.par10.value),
            opt(s.ert.value),
        ]);
    }
    out
}

/// One line per algorithm with its ranks, normality and scores.
pub fn analysis_csv(report: &AnalysisReport) -> String {
    let header = [
        "algorithm",
        "missing",
        "rank_sum",
        "mean_rank",
        "shapiro_w",
        "shapiro_p",
        "solved",
        "par10",
        "ert",
    ];
    let mut out = csv_line(&header.map(String::from));
    for (j, name) in report.dataset.algorithms.iter().enumerate() {
        let ranks = &report.ranks[j];
        let shapiro = &report.normality[j].shapiro_wilk.value;
        let scores = &report.scores.algorithms[j];
        out += &csv_line(&[
            name.clone(),
            report.dataset.missing_counts[j].to_string(),
            ranks.rank_sum.to_string(),
            ranks.mean_rank.to_string(),
            opt(shapiro.as_ref().map(|s| s.w_statistic)),
            opt(shapiro.as_ref().map(|s| s.p_value)),
            scores.solved.to_string(),
            opt(scores.par10.value),
            opt(scores.ert.value),
        ]);
    }
    out
}

pub fn analysis_text(report: &AnalysisReport, style: Style) -> String {
    let d = &report.dataset;
    let c = &report.config;
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", report.tool.name, report.tool.version);
    let _ = writeln!(
        out,
        "{} benchmarks, {} algorithms, {}, alpha {}, tie correction {}",
        d.m,
        d.n,
        match c.direction {
            benchrank_core::Direction::Minimize => "minimizing",
            benchrank_core::Direction::Maximize => "maximizing",
        },
        c.alpha,
        if c.tie_correction { "on" } else { "off" },
    );
    for w in &d.warnings {
        let _ = writeln!(out, "warning: {w}");
    }

    out += &format!("\n{}\n", style.heading("Ranks"));
    let mut rows = vec![["algorithm", "missing", "rank sum", "mean rank", "histogram"]
        .map(String::from)
        .to_vec()];
    for (j, r) in report.ranks.iter().enumerate() {
        let hist: Vec<String> = r.histogram.iter().map(|b| format!("{}:{}", b.rank, b.count)).collect();
        rows.push(vec![
            r.algorithm.clone(),
            d.missing_counts[j].to_string(),
            r.rank_sum.to_string(),
            format!("{:.4}", r.mean_rank),
            hist.join(" "),
        ]);
    }
    out += &table(&rows);

    out += &format!("\n{}\n", style.heading("Normality of rank columns (Shapiro-Wilk)"));
    let rows: Vec<Vec<String>> = report
        .normality
        .iter()
        .map(|n| match (&n.shapiro_wilk.value, &n.shapiro_wilk.reason) {
            (Some(s), _) => vec![
                n.algorithm.clone(),
                format!("W = {:.4}", s.w_statistic),
                format!("p = {:.4e}", s.p_value),
            ],
            (None, reason) => vec![
                n.algorithm.clone(),
                format!("n/a ({})", reason.as_deref().unwrap_or("")),
            ],
        })
        .collect();
    out += &table(&rows);

    out += &format!("\n{}\n", style.heading("Friedman test"));
    match (&report.friedman.value, &report.friedman.reason) {
        (Some(f), _) => {
            let verdict = if f.reject_null {
                style.bad("rejects equal performance")
            } else {
                style.good("does not reject equal performance")
            };
            let _ = writeln!(
                out,
                "  statistic {:.4}, df {}, p = {:.4e}: {verdict} at alpha {}",
                f.statistic, f.degrees_of_freedom, f.p_value, f.alpha
            );
        }
        (None, reason) => {
            let _ = writeln!(out, "  {}", style.bad(reason.as_deref().unwrap_or("unavailable")));
        }
    }

    out += &format!("\n{}\n", style.heading("Post-hoc comparisons (Nemenyi)"));
    match (&report.posthoc.value, &report.posthoc.reason) {
        (Some(p), _) => {
            let rows: Vec<Vec<String>> = p
                .comparisons
                .iter()
                .map(|cmp| {
                    vec![
                        format!("{} vs {}", cmp.first, cmp.second),
                        format!("q = {:.4}", cmp.statistic),
                        format!("p = {:.4e}", cmp.p_value),
                        if cmp.significant {
                            style.bad("significant")
                        } else {
                            "not significant".to_string()
                        },
                    ]
                })
                .collect();
            out += &table(&rows);
        }
        (None, reason) => {
            let _ = writeln!(out, "  skipped: {}", reason.as_deref().unwrap_or(""));
        }
    }

    out.push('\n');
    out += &scores_text(&report.scores, style);
    out
}
