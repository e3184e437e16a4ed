//! Study-level folds over per-meeting reports.
//!
//! Every aggregate reads only report fields, skips undefined volatilities
//! rather than counting them as zero, and sorts its inputs before summing so
//! the result does not depend on report order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::conversation::SegmentLabel;
use crate::ingest::UNKNOWN_LANGUAGE;
use crate::report::{MeetingReport, SegmentReport};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weighting {
    /// Each contributing segment counts once.
    #[default]
    Unweighted,
    /// Segments are weighted by their span in seconds.
    Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageCell {
    pub language: String,
    /// `None` when no contributing segment had a defined volatility.
    pub mean_volatility: Option<f64>,
    pub segment_count: usize,
}

/// Mean half-meeting volatility per language for one group, or for one
/// participant within a group when `speaker_id` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupLanguageSummary {
    pub group_id: String,
    pub speaker_id: Option<String>,
    /// Sorted by language tag.
    pub cells: Vec<LanguageCell>,
}

impl GroupLanguageSummary {
    pub fn mean(&self, language: &str) -> Option<f64> {
        self.cells
            .iter()
            .find(|c| c.language == language)
            .and_then(|c| c.mean_volatility)
    }
}

/// Order-independent mean. The incremental update keeps a constant input
/// exactly constant.
pub(crate) fn stable_mean(values: &[f64]) -> Option<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut mean = None;
    for (k, x) in sorted.into_iter().enumerate() {
        let m = mean.unwrap_or(0.0);
        mean = Some(m + (x - m) / (k + 1) as f64);
    }
    mean
}

fn weighted_mean(pairs: &[(f64, f64)]) -> Option<f64> {
    let mut sorted = pairs.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let total: f64 = sorted.iter().map(|p| p.1).sum();
    if sorted.is_empty() || total <= 0.0 {
        return None;
    }
    Some(sorted.iter().map(|(v, w)| v * w).sum::<f64>() / total)
}

fn halves(report: &MeetingReport) -> impl Iterator<Item = &SegmentReport> {
    report
        .segments
        .iter()
        .filter(|s| s.label.is_half() && s.language != UNKNOWN_LANGUAGE)
}

type Key = (String, Option<String>);

#[derive(Default)]
struct Cells {
    // value, weight
    by_language: BTreeMap<String, Vec<(f64, f64)>>,
}

impl Cells {
    fn add(&mut self, language: &str, value: Option<f64>, weight: f64) {
        let entry = self.by_language.entry(language.to_string()).or_default();
        if let Some(v) = value {
            entry.push((v, weight));
        }
    }

    fn finish(self, weighting: Weighting) -> Vec<LanguageCell> {
        self.by_language
            .into_iter()
            .map(|(language, pairs)| {
                let mean = match weighting {
                    Weighting::Unweighted => {
                        stable_mean(&pairs.iter().map(|p| p.0).collect::<Vec<_>>())
                    }
                    Weighting::Duration => weighted_mean(&pairs),
                };
                LanguageCell {
                    language,
                    mean_volatility: mean,
                    segment_count: pairs.len(),
                }
            })
            .collect()
    }
}

fn order_summaries(summaries: &mut [GroupLanguageSummary], ordering_language: &str) {
    summaries.sort_by(|a, b| {
        let by_mean = match (a.mean(ordering_language), b.mean(ordering_language)) {
            (Some(x), Some(y)) => x.total_cmp(&y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        };
        by_mean
            .then_with(|| a.group_id.cmp(&b.group_id))
            .then_with(|| a.speaker_id.cmp(&b.speaker_id))
    });
}

fn summarize(
    cells: BTreeMap<Key, Cells>,
    ordering_language: &str,
    weighting: Weighting,
) -> Vec<GroupLanguageSummary> {
    let mut out: Vec<_> = cells
        .into_iter()
        .map(|((group_id, speaker_id), c)| GroupLanguageSummary {
            group_id,
            speaker_id,
            cells: c.finish(weighting),
        })
        .collect();
    order_summaries(&mut out, ordering_language);
    out
}

/// Per-group mean volatility of language-labelled half segments, ascending
/// by the mean for `ordering_language`. Groups without a value for that
/// language sort last; ties break on group id.
pub fn group_language_averages(
    reports: &[MeetingReport],
    ordering_language: &str,
) -> Vec<GroupLanguageSummary> {
    group_language_averages_with(reports, ordering_language, Weighting::Unweighted)
}

pub fn group_language_averages_with(
    reports: &[MeetingReport],
    ordering_language: &str,
    weighting: Weighting,
) -> Vec<GroupLanguageSummary> {
    let mut cells: BTreeMap<Key, Cells> = BTreeMap::new();
    for r in reports {
        let entry = cells.entry((r.meeting.group_id.clone(), None)).or_default();
        for seg in halves(r) {
            entry.add(&seg.language, seg.volatility.volatility, seg.span_s());
        }
    }
    summarize(cells, ordering_language, weighting)
}

/// The same table at participant level: one row per (group, speaker).
pub fn participant_language_averages(
    reports: &[MeetingReport],
    ordering_language: &str,
    weighting: Weighting,
) -> Vec<GroupLanguageSummary> {
    let mut cells: BTreeMap<Key, Cells> = BTreeMap::new();
    for r in reports {
        for seg in halves(r) {
            for p in &seg.participant_volatility {
                cells
                    .entry((r.meeting.group_id.clone(), Some(p.speaker_id.clone())))
                    .or_default()
                    .add(&seg.language, p.volatility.volatility, seg.span_s());
            }
        }
    }
    summarize(cells, ordering_language, weighting)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekPoint {
    pub week_index: u32,
    pub volatility: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupWeekSeries {
    pub group_id: String,
    pub points: Vec<WeekPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekMean {
    pub week_index: u32,
    pub mean_volatility: f64,
    pub group_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeekSeries {
    pub language: String,
    pub groups: Vec<GroupWeekSeries>,
    pub means: Vec<WeekMean>,
    /// Least-squares slope of the cross-group mean against week index;
    /// `None` with fewer than two weeks.
    pub slope: Option<f64>,
}

/// Per-group volatility by week for half segments in `language`, plus the
/// cross-group mean per week and its trend.
pub fn week_progression(reports: &[MeetingReport], language: &str) -> WeekSeries {
    let mut raw: BTreeMap<String, BTreeMap<u32, Vec<f64>>> = BTreeMap::new();
    for r in reports {
        for seg in halves(r).filter(|s| s.language == language) {
            if let Some(v) = seg.volatility.volatility {
                raw.entry(r.meeting.group_id.clone())
                    .or_default()
                    .entry(r.meeting.week_index)
                    .or_default()
                    .push(v);
            }
        }
    }
    let groups: Vec<GroupWeekSeries> = raw
        .into_iter()
        .map(|(group_id, weeks)| GroupWeekSeries {
            group_id,
            points: weeks
                .into_iter()
                .filter_map(|(week_index, vs)| {
                    stable_mean(&vs).map(|volatility| WeekPoint { week_index, volatility })
                })
                .collect(),
        })
        .collect();

    let weeks: BTreeSet<u32> = groups
        .iter()
        .flat_map(|g| g.points.iter().map(|p| p.week_index))
        .collect();
    let means: Vec<WeekMean> = weeks
        .into_iter()
        .filter_map(|week| {
            let values: Vec<f64> = groups
                .iter()
                .flat_map(|g| g.points.iter().filter(|p| p.week_index == week))
                .map(|p| p.volatility)
                .collect();
            stable_mean(&values).map(|mean_volatility| WeekMean {
                week_index: week,
                mean_volatility,
                group_count: values.len(),
            })
        })
        .collect();
    let points: Vec<(f64, f64)> = means
        .iter()
        .map(|m| (f64::from(m.week_index), m.mean_volatility))
        .collect();
    WeekSeries {
        language: language.to_string(),
        slope: least_squares_slope(&points),
        groups,
        means,
    }
}

pub(crate) fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (mx, my) = (stable_mean(&xs)?, stable_mean(&ys)?);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LanguageComparison {
    pub language_a: String,
    pub language_b: String,
    /// Meetings where both halves have defined volatility.
    pub compared: usize,
    pub higher_a: usize,
    pub higher_b: usize,
    pub equal: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub meeting_count: usize,
    pub mean_duration_s: Option<f64>,
    /// Sample standard deviation; `None` below two meetings.
    pub sd_duration_s: Option<f64>,
    /// Meetings per first-half language, sorted by tag.
    pub first_half_language_counts: Vec<(String, usize)>,
    pub comparison: Option<LanguageComparison>,
}

fn language_volatility(report: &MeetingReport, language: &str) -> Option<f64> {
    [SegmentLabel::FirstHalf, SegmentLabel::SecondHalf]
        .iter()
        .filter_map(|l| report.segment(*l))
        .find(|s| s.language == language)
        .and_then(|s| s.volatility.volatility)
}

/// Corpus-level summary: meeting count, duration statistics, language-order
/// counts and, for a language pair, how many meetings were more volatile in
/// each language.
pub fn corpus_stats(reports: &[MeetingReport], compare: Option<(&str, &str)>) -> CorpusStats {
    let durations: Vec<f64> = reports.iter().map(|r| r.duration_s).collect();
    let mut sorted = durations.clone();
    sorted.sort_by(f64::total_cmp);
    let mut first_langs: BTreeMap<String, usize> = BTreeMap::new();
    for r in reports {
        *first_langs.entry(r.meeting.first_half_language.clone()).or_default() += 1;
    }
    let comparison = compare.map(|(a, b)| {
        let mut c = LanguageComparison {
            language_a: a.into(),
            language_b: b.into(),
            compared: 0,
            higher_a: 0,
            higher_b: 0,
            equal: 0,
        };
        for r in reports {
            if let (Some(va), Some(vb)) = (language_volatility(r, a), language_volatility(r, b)) {
                c.compared += 1;
                match va.total_cmp(&vb) {
                    Ordering::Greater => c.higher_a += 1,
                    Ordering::Less => c.higher_b += 1,
                    Ordering::Equal => c.equal += 1,
                }
            }
        }
        c
    });
    CorpusStats {
        meeting_count: reports.len(),
        mean_duration_s: stable_mean(&durations),
        sd_duration_s: crate::metrics::sample_std(&sorted),
        first_half_language_counts: first_langs.into_iter().collect(),
        comparison,
    }
}
