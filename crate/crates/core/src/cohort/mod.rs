//! Corpus analysis and study-level aggregation.

mod aggregate;
mod manifest;
mod tables;

pub use aggregate::{
    corpus_stats, group_language_averages, group_language_averages_with,
    participant_language_averages, week_progression, CorpusStats, GroupLanguageSummary,
    GroupWeekSeries, LanguageCell, LanguageComparison, WeekMean, WeekPoint, WeekSeries, Weighting,
};
pub use manifest::{load_manifest, CohortManifest, ManifestRow, OPTIONAL_COLUMNS, REQUIRED_COLUMNS};
pub use tables::{corpus_stats_csv, group_language_csv, week_csv};

use std::path::Path;

use rayon::prelude::*;

use crate::error::{read_file, Error, Result};
use crate::report::{analyze_transcript, AnalysisConfig, MeetingReport};

/// A meeting that could not be analyzed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusError {
    pub meeting_id: String,
    pub path: String,
    pub code: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusOutcome {
    /// Successful reports, in manifest order.
    pub reports: Vec<MeetingReport>,
    /// Failures, in manifest order.
    pub errors: Vec<CorpusError>,
}

/// Analyzes every manifest row, reading transcripts relative to `base_dir`.
pub fn analyze_corpus(
    manifest: &CohortManifest,
    base_dir: &Path,
    config: &AnalysisConfig,
    workers: usize,
) -> Result<CorpusOutcome> {
    analyze_corpus_with(manifest, config, workers, |row| read_file(base_dir.join(&row.path)))
}

/// Like [`analyze_corpus`] with a caller-supplied transcript loader. Rows
/// are processed on `workers` threads; output order never depends on
/// scheduling.
pub fn analyze_corpus_with<F>(
    manifest: &CohortManifest,
    config: &AnalysisConfig,
    workers: usize,
    load: F,
) -> Result<CorpusOutcome>
where
    F: Fn(&ManifestRow) -> Result<Vec<u8>> + Sync,
{
    if workers == 0 {
        return Err(Error::BadConfig("worker count must be at least 1".into()));
    }
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::BadConfig(format!("cannot start {workers} workers: {e}")))?;
    let results: Vec<Result<MeetingReport>> = pool.install(|| {
        manifest
            .rows
            .par_iter()
            .map(|row| analyze_transcript(&load(row)?, &row.meta, config))
            .collect()
    });

    let mut outcome = CorpusOutcome::default();
    for (row, result) in manifest.rows.iter().zip(results) {
        match result {
            Ok(report) => outcome.reports.push(report),
            Err(e) => outcome.errors.push(CorpusError {
                meeting_id: row.meta.meeting_id.clone(),
                path: row.path.display().to_string(),
                code: e.code().into(),
                message: e.to_string(),
            }),
        }
    }
    Ok(outcome)
}
