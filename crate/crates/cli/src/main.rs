mod cli;
mod error;
mod hist;
mod json;
mod render;
mod report;

use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use benchrank_core::summarize;
use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use cli::{AnalysisConfig, Cli, Command, Format, Options};
use error::CliError;
use render::Style;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("benchrank: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn style_for(options: &Options) -> Style {
    if options.out.is_some() {
        return Style::plain();
    }
    Style::detect(
        std::env::var_os(render::NO_COLOR_VAR).as_deref(),
        std::io::stdout().is_terminal(),
    )
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn load(options: &Options, config: &AnalysisConfig) -> Result<report::Loaded, CliError> {
    let loaded = report::load(options, config)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    Ok(loaded)
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    schema: u32,
    tool: report::Tool,
    config: &'a AnalysisConfig,
    #[serde(flatten)]
    body: T,
}

fn envelope<T>(config: &AnalysisConfig, body: T) -> Envelope<'_, T> {
    Envelope {
        schema: report::SCHEMA,
        tool: report::Tool::current(),
        config,
        body,
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Rank(options) => {
            let config = AnalysisConfig::from_options(&options, Format::Csv)?;
            let loaded = load(&options, &config)?;
            let text = match config.output_format {
                Format::Csv => render::rank_csv(&loaded.matrix),
                Format::Text => render::rank_text(&loaded.matrix),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a> {
                        rank_matrix: &'a benchrank_core::RankMatrix,
                    }
                    json::to_string(&envelope(
                        &config,
                        Body {
                            rank_matrix: &loaded.matrix,
                        },
                    ))
                }
            };
            emit(options.out.as_deref(), &text)
        }
        Command::Analyze(options) => {
            let config = AnalysisConfig::from_options(&options, Format::Text)?;
            let loaded = load(&options, &config)?;
            let report = report::analyze(&loaded, &config)?;
            let text = match config.output_format {
                Format::Json => json::to_string(&report),
                Format::Text => render::analysis_text(&report, style_for(&options)),
                Format::Csv => render::analysis_csv(&report),
            };
            emit(options.out.as_deref(), &text)?;
            match report.degeneracy() {
                Some(e) => Err(e.into()),
                None => Ok(()),
            }
        }
        Command::Scores(options) => {
            let config = AnalysisConfig::from_options(&options, Format::Text)?;
            let loaded = load(&options, &config)?;
            let scores = report::score_section(
                &benchrank_core::score_dataset(&loaded.dataset)?,
                loaded.dataset.cutoff(),
                loaded.dataset.m(),
            );
            let text = match config.output_format {
                Format::Json => {
                    #[derive(Serialize)]
                    struct Body<'a> {
                        scores: &'a report::Scores,
                    }
                    json::to_string(&envelope(&config, Body { scores: &scores }))
                }
                Format::Text => render::scores_text(&scores, style_for(&options)),
                Format::Csv => render::scores_csv(&scores),
            };
            emit(options.out.as_deref(), &text)
        }
        Command::Hist(options) => {
            let config = AnalysisConfig::from_options(&options, Format::Csv)?;
            let svg_path = options
                .out
                .clone()
                .ok_or_else(|| CliError::Usage("hist needs --out <path> for the SVG file".into()))?;
            let csv_path = companion_csv(&svg_path)?;
            let loaded = load(&options, &config)?;
            let summary = summarize(&loaded.matrix);
            emit(Some(&svg_path), &hist::histogram_svg(&summary))?;
            emit(Some(&csv_path), &hist::histogram_csv(&summary))
        }
    }
}

/// `plot.svg` gets its counts in `plot.csv`.
fn companion_csv(svg: &Path) -> Result<PathBuf, CliError> {
    let csv = svg.with_extension("csv");
    if csv == svg {
        return Err(CliError::Usage(format!(
            "--out {} would collide with its CSV companion; use an .svg name",
            svg.display()
        )));
    }
    Ok(csv)
}
