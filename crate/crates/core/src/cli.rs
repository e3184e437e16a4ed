//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input error, 2 usage error. Failures print a
//! single `CODE=message` line on standard error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cohort::{
    analyze_corpus, corpus_stats, corpus_stats_csv, group_language_averages_with,
    group_language_csv, load_manifest, participant_language_averages, week_csv,
    week_progression, Weighting,
};
use crate::conversation::SegmentLabel;
use crate::error::{read_file, Error, Result};
use crate::ingest::MeetingMeta;
use crate::metrics::{DurationMode, RateScaleMode, SeriesUnit, VolatilityConfig};
use crate::report::{
    analyze_transcript, fmt6, fmt6_opt, render_html, write_meeting_tables, AnalysisConfig,
    MeetingReport,
};

/// File suffix of reports written by `batch` and picked up by `aggregate`.
pub const REPORT_SUFFIX: &str = ".report.json";

#[derive(Debug, Parser)]
#[command(name = "turnvol", version, about = "Turn-taking and conversational volatility analytics for WebVTT meeting transcripts")]
pub struct Cli {
    #[command(flatten)]
    pub analysis: AnalysisArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DurationModeArg {
    Span,
    Summed,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SeriesUnitArg {
    Turns,
    Utterances,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RateScaleArg {
    PerMinute,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WeightingArg {
    Unweighted,
    Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregateBy {
    GroupLanguage,
    ParticipantLanguage,
    Week,
    Stats,
}

/// Volatility and turn-building options shared by every command.
#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// How a turn's length is measured
    #[arg(long, global = true, value_enum, default_value = "span", env = "TURNVOL_DURATION_MODE")]
    pub duration_mode: DurationModeArg,
    /// Series element for volatility: merged turns or raw utterances
    #[arg(long, global = true, value_enum, default_value = "turns", env = "TURNVOL_SERIES_UNIT")]
    pub series_unit: SeriesUnitArg,
    /// Scale raw volatility by sqrt(points per minute), or not at all
    #[arg(long, global = true, value_enum, default_value = "per-minute", env = "TURNVOL_RATE_SCALE")]
    pub rate_scale: RateScaleArg,
    /// Fewest series points for which volatility is defined (>= 3)
    #[arg(long, global = true, default_value_t = 3, env = "TURNVOL_MIN_TURNS")]
    pub min_turns: usize,
    /// Split a same-speaker run when a silence exceeds this many seconds
    #[arg(long, global = true, value_name = "SECONDS", env = "TURNVOL_GAP_BREAK")]
    pub gap_break: Option<f64>,
    /// Drop cues attributed to the `unknown` speaker before analysis
    #[arg(long, global = true, env = "TURNVOL_EXCLUDE_UNKNOWN_SPEAKER")]
    pub exclude_unknown_speaker: bool,
}

impl AnalysisArgs {
    pub fn config(&self) -> AnalysisConfig {
        AnalysisConfig {
            volatility: VolatilityConfig {
                duration_mode: match self.duration_mode {
                    DurationModeArg::Span => DurationMode::Span,
                    DurationModeArg::Summed => DurationMode::Summed,
                },
                series_unit: match self.series_unit {
                    SeriesUnitArg::Turns => SeriesUnit::Turns,
                    SeriesUnitArg::Utterances => SeriesUnit::Utterances,
                },
                rate_scale_mode: match self.rate_scale {
                    RateScaleArg::PerMinute => RateScaleMode::PerMinute,
                    RateScaleArg::None => RateScaleMode::None,
                },
                min_points: self.min_turns,
            },
            gap_break_s: self.gap_break,
            exclude_unknown_speaker: self.exclude_unknown_speaker,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one transcript
    Analyze {
        /// WebVTT transcript
        vtt: PathBuf,
        /// JSON metadata sidecar (meeting_id, group_id, languages, ...)
        #[arg(long)]
        meta: Option<PathBuf>,
        /// Write the report document here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write turns/participation/transitions/volatility CSV tables here
        #[arg(long)]
        csv_dir: Option<PathBuf>,
        /// Write a self-contained HTML review page here
        #[arg(long)]
        html: Option<PathBuf>,
        /// Inline this script instead of the built-in viewer
        #[arg(long)]
        viewer_bundle: Option<PathBuf>,
    },
    /// Analyze every transcript listed in a manifest CSV
    Batch {
        manifest: PathBuf,
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Also write one HTML review page per meeting
        #[arg(long)]
        html: bool,
        #[arg(long)]
        viewer_bundle: Option<PathBuf>,
    },
    /// Fold reports into cohort tables
    Aggregate {
        /// Report files, or directories containing *.report.json
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, value_enum)]
        by: AggregateBy,
        /// Ordering language (group/participant tables) or series language (week)
        #[arg(long)]
        language: Option<String>,
        /// Language pair for corpus stats, e.g. `fr,en`
        #[arg(long)]
        compare: Option<String>,
        #[arg(long, value_enum, default_value = "unweighted")]
        weighting: WeightingArg,
        /// Output CSV (standard output when absent)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BadConfig(msg) => Failure::Usage(msg),
            other => Failure::Input(other),
        }
    }
}

fn one_line(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("USAGE={}", one_line(&msg));
            2
        }
        Err(Failure::Input(e)) => {
            eprintln!("{}={}", e.code(), one_line(&e.to_string()));
            1
        }
    }
}

fn execute(cli: Cli) -> std::result::Result<i32, Failure> {
    let config = cli.analysis.config();
    config.validate()?;
    match cli.command {
        Command::Analyze { vtt, meta, out, csv_dir, html, viewer_bundle } => {
            analyze(&vtt, meta.as_deref(), &config, out, csv_dir, html, viewer_bundle)
        }
        Command::Batch { manifest, out_dir, workers, html, viewer_bundle } => {
            if workers == 0 {
                return Err(Failure::Usage("--workers must be at least 1".into()));
            }
            batch(&manifest, &out_dir, workers, &config, html, viewer_bundle)
        }
        Command::Aggregate { inputs, by, language, compare, weighting, out } => {
            let weighting = match weighting {
                WeightingArg::Unweighted => Weighting::Unweighted,
                WeightingArg::Duration => Weighting::Duration,
            };
            aggregate(&inputs, by, language, compare, weighting, out)
        }
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn load_meta(path: Option<&Path>, vtt: &Path) -> Result<MeetingMeta> {
    match path {
        Some(path) => {
            let bytes = read_file(path)?;
            let doc: serde_json::Value = serde_json::from_slice(&bytes)
                .map_err(|e| Error::BadMeta(format!("{}: {e}", path.display())))?;
            MeetingMeta::from_json(&doc)
        }
        None => {
            let stem = vtt
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "meeting".into());
            Ok(MeetingMeta::new(stem))
        }
    }
}

fn load_bundle(path: Option<&Path>) -> Result<Option<String>> {
    path.map(|p| {
        read_file(p).map(|bytes| String::from_utf8_lossy(&bytes).into_owned())
    })
    .transpose()
}

/// One stable line per meeting: id, duration and the three volatilities.
pub fn summary_line(report: &MeetingReport) -> String {
    let mut line = format!(
        "meeting_id={} duration_s={}",
        report.meeting.meeting_id,
        fmt6(report.duration_s)
    );
    for label in SegmentLabel::ALL {
        if let Some(seg) = report.segment(label) {
            let value = seg.volatility.volatility.map(fmt6).unwrap_or_else(|| "n/a".into());
            if label.is_half() {
                line.push_str(&format!(" {label}[{}]={value}", seg.language));
            } else {
                line.push_str(&format!(" {label}={value}"));
            }
        }
    }
    line
}

fn analyze(
    vtt: &Path,
    meta_path: Option<&Path>,
    config: &AnalysisConfig,
    out: Option<PathBuf>,
    csv_dir: Option<PathBuf>,
    html: Option<PathBuf>,
    viewer_bundle: Option<PathBuf>,
) -> std::result::Result<i32, Failure> {
    let bytes = read_file(vtt)?;
    let meta = load_meta(meta_path, vtt)?;
    let bundle = load_bundle(viewer_bundle.as_deref())?;
    let report = analyze_transcript(&bytes, &meta, config)?;
    if let Some(out) = out {
        write(&out, &report.to_json())?;
    }
    if let Some(dir) = csv_dir {
        write_meeting_tables(&report, &dir)?;
    }
    if let Some(html) = html {
        write(&html, &render_html(&report, bundle.as_deref()))?;
    }
    println!("{}", summary_line(&report));
    Ok(0)
}

/// Keeps meeting ids usable as file names.
fn file_stem_for(meeting_id: &str) -> String {
    meeting_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' })
        .collect()
}

fn batch(
    manifest_path: &Path,
    out_dir: &Path,
    workers: usize,
    config: &AnalysisConfig,
    html: bool,
    viewer_bundle: Option<PathBuf>,
) -> std::result::Result<i32, Failure> {
    let manifest = load_manifest(&read_file(manifest_path)?)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let bundle = load_bundle(viewer_bundle.as_deref())?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let outcome = analyze_corpus(&manifest, base, config, workers)?;

    for report in &outcome.reports {
        let stem = file_stem_for(&report.meeting.meeting_id);
        write(&out_dir.join(format!("{stem}{REPORT_SUFFIX}")), &report.to_json())?;
        if html {
            write(
                &out_dir.join(format!("{stem}.html")),
                &render_html(report, bundle.as_deref()),
            )?;
        }
        println!("{}", summary_line(report));
    }

    let errors_path = out_dir.join("errors.csv");
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["meeting_id", "path", "code", "message"]);
    for e in &outcome.errors {
        let _ = w.write_record([&e.meeting_id, &e.path, &e.code, &one_line(&e.message)]);
    }
    let text = String::from_utf8(w.into_inner().map_err(|e| Error::io(&errors_path, e.into_error()))?)
        .expect("CSV of UTF-8 fields");
    write(&errors_path, &text)?;

    eprintln!(
        "reports={} errors={}",
        outcome.reports.len(),
        outcome.errors.len()
    );
    Ok(if outcome.reports.is_empty() { 1 } else { 0 })
}

/// Expands directories to their `*.report.json` files (sorted by name).
pub fn collect_report_paths(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(input)
                .map_err(|e| Error::io(input, e))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| {
                    p.file_name()
                        .is_some_and(|n| n.to_string_lossy().ends_with(REPORT_SUFFIX))
                })
                .collect();
            found.sort();
            paths.extend(found);
        } else {
            paths.push(input.clone());
        }
    }
    Ok(paths)
}

pub fn load_reports(inputs: &[PathBuf]) -> Result<Vec<MeetingReport>> {
    collect_report_paths(inputs)?
        .iter()
        .map(|p| {
            MeetingReport::from_json(&read_file(p)?)
                .map_err(|e| Error::BadReport(format!("{}: {e}", p.display())))
        })
        .collect()
}

fn aggregate(
    inputs: &[PathBuf],
    by: AggregateBy,
    language: Option<String>,
    compare: Option<String>,
    weighting: Weighting,
    out: Option<PathBuf>,
) -> std::result::Result<i32, Failure> {
    if by == AggregateBy::Week && language.is_none() {
        return Err(Failure::Usage("--by week needs --language".into()));
    }
    let pair = match compare.as_deref() {
        Some(text) => match text.split_once(',') {
            Some((a, b)) if !a.trim().is_empty() && !b.trim().is_empty() => {
                Some((a.trim().to_string(), b.trim().to_string()))
            }
            _ => return Err(Failure::Usage("--compare expects two tags, e.g. fr,en".into())),
        },
        None => None,
    };

    let reports = load_reports(inputs)?;
    if reports.is_empty() {
        return Err(Error::BadReport("no reports found".into()).into());
    }
    let language = language.unwrap_or_default();
    let mut slope_line = None;
    let csv = match by {
        AggregateBy::GroupLanguage => {
            group_language_csv(&group_language_averages_with(&reports, &language, weighting))
        }
        AggregateBy::ParticipantLanguage => {
            group_language_csv(&participant_language_averages(&reports, &language, weighting))
        }
        AggregateBy::Week => {
            let series = week_progression(&reports, &language);
            slope_line = Some(format!("slope={}", fmt6_opt(series.slope)));
            week_csv(&series)
        }
        AggregateBy::Stats => corpus_stats_csv(&corpus_stats(
            &reports,
            pair.as_ref().map(|(a, b)| (a.as_str(), b.as_str())),
        )),
    };
    match out {
        Some(path) => {
            write(&path, &csv)?;
            if let Some(line) = slope_line {
                println!("{line}");
            }
        }
        None => {
            print!("{csv}");
            if let Some(line) = slope_line {
                eprintln!("{line}");
            }
        }
    }
    Ok(0)
}
