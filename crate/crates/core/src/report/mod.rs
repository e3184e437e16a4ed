//! Per-meeting report document: everything the review page shows, in one
//! canonical, diff-friendly JSON file.
//!
//! Reals are stored already rounded to six decimals, so a report held in
//! memory is identical to the same report read back from disk and every
//! downstream aggregate can be reproduced from the files alone.

mod canonical;
mod html;
mod tables;

pub use canonical::{fmt6, fmt6_opt, q6, q6_opt, to_canonical_json};
pub use html::{render_html, VIEWER_FALLBACK_JS};
pub use tables::write_meeting_tables;

use serde::{Deserialize, Serialize};

use crate::conversation::{build_turns_with, SegmentLabel, TurnOptions};
use crate::error::{Error, Result};
use crate::ingest::{parse_vtt_with_roster, MeetingMeta, ParseDiagnostics, Utterance, UNKNOWN_SPEAKER};
use crate::metrics::{
    meeting_metrics, MeetingMetrics, ParticipantShare, SegmentMetrics, TransitionMatrix,
    VolatilityConfig, VolatilityResult,
};

/// Bumped on any breaking change to the report layout.
pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Names the volatility definition used, so reports computed under different
/// definitions are never mixed silently.
pub const FORMULA: &str = "sample-sd(ln(d[i+1]/d[i])) * sqrt(points/minutes); v1";

/// Everything that influences the numbers in a report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    pub volatility: VolatilityConfig,
    pub gap_break_s: Option<f64>,
    pub exclude_unknown_speaker: bool,
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        self.volatility.validate()?;
        if let Some(gap) = self.gap_break_s {
            if !(gap.is_finite() && gap >= 0.0) {
                return Err(Error::BadConfig(format!(
                    "gap break must be a non-negative number of seconds, got {gap}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurnRow {
    pub speaker_id: String,
    pub start_s: f64,
    pub end_s: f64,
    pub duration_s: f64,
    pub utterance_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticipantVolatility {
    pub speaker_id: String,
    pub volatility: VolatilityResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentReport {
    pub label: SegmentLabel,
    pub language: String,
    pub span_start_s: f64,
    pub span_end_s: f64,
    pub volatility: VolatilityResult,
    pub participant_volatility: Vec<ParticipantVolatility>,
    pub participation: Vec<ParticipantShare>,
    pub transitions: TransitionMatrix,
    pub turns: Vec<TurnRow>,
}

impl SegmentReport {
    pub fn span_s(&self) -> f64 {
        self.span_end_s - self.span_start_s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeetingReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub formula: String,
    pub meeting: MeetingMeta,
    pub config: AnalysisConfig,
    /// Recorded duration when annotated, otherwise the last utterance end.
    pub duration_s: f64,
    pub split_s: f64,
    /// Display order: roster first, then by first appearance.
    pub speakers: Vec<String>,
    /// WHOLE, FIRST_HALF, SECOND_HALF.
    pub segments: Vec<SegmentReport>,
    pub diagnostics: ParseDiagnostics,
    pub utterances: Vec<Utterance>,
}

fn quantize_volatility(v: VolatilityResult) -> VolatilityResult {
    VolatilityResult {
        raw_sigma: q6_opt(v.raw_sigma),
        rate_scale: q6_opt(v.rate_scale),
        volatility: q6_opt(v.volatility),
        ..v
    }
}

fn segment_report(m: SegmentMetrics) -> SegmentReport {
    let seg = m.segment;
    SegmentReport {
        label: seg.label,
        language: seg.language,
        span_start_s: q6(seg.span_start_s),
        span_end_s: q6(seg.span_end_s),
        volatility: quantize_volatility(m.volatility),
        participant_volatility: m
            .participant_volatility
            .into_iter()
            .map(|(speaker_id, v)| ParticipantVolatility {
                speaker_id,
                volatility: quantize_volatility(v),
            })
            .collect(),
        participation: m
            .participation
            .shares
            .into_iter()
            .map(|s| ParticipantShare {
                speaking_time_s: q6(s.speaking_time_s),
                participation_pct: q6(s.participation_pct),
                ..s
            })
            .collect(),
        transitions: m.transitions,
        turns: seg
            .turns
            .into_iter()
            .map(|t| TurnRow {
                speaker_id: t.speaker_id,
                start_s: q6(t.start_s),
                end_s: q6(t.end_s),
                duration_s: q6(t.duration_s),
                utterance_indices: t.utterance_indices,
            })
            .collect(),
    }
}

impl MeetingReport {
    pub fn assemble(
        meta: &MeetingMeta,
        config: &AnalysisConfig,
        utterances: Vec<Utterance>,
        diagnostics: ParseDiagnostics,
        metrics: MeetingMetrics,
    ) -> Self {
        let last_end = utterances.iter().map(|u| u.end_s).fold(0.0, f64::max);
        let mut meeting = meta.clone();
        meeting.recorded_duration_s = q6_opt(meeting.recorded_duration_s);
        meeting.changeover_s = q6_opt(meeting.changeover_s);
        let mut config = *config;
        config.gap_break_s = q6_opt(config.gap_break_s);
        MeetingReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.into(),
            formula: FORMULA.into(),
            duration_s: q6(meta.recorded_duration_s.unwrap_or(last_end)),
            split_s: q6(metrics.split_s),
            speakers: metrics.speakers,
            segments: metrics.segments.into_iter().map(segment_report).collect(),
            meeting,
            config,
            diagnostics,
            utterances: utterances
                .into_iter()
                .map(|u| Utterance {
                    start_s: q6(u.start_s),
                    end_s: q6(u.end_s),
                    ..u
                })
                .collect(),
        }
    }

    pub fn segment(&self, label: SegmentLabel) -> Option<&SegmentReport> {
        self.segments.iter().find(|s| s.label == label)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let report: MeetingReport =
            serde_json::from_slice(bytes).map_err(|e| Error::BadReport(e.to_string()))?;
        report.validate()?;
        Ok(report)
    }

    /// Structural checks beyond what deserialization enforces.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadReport(msg));
        if self.schema_version != SCHEMA_VERSION {
            return bad(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let labels: Vec<_> = self.segments.iter().map(|s| s.label).collect();
        if labels != SegmentLabel::ALL {
            return bad(format!("segments must be WHOLE, FIRST_HALF, SECOND_HALF; got {labels:?}"));
        }
        for seg in &self.segments {
            let n = self.speakers.len();
            if seg.transitions.speakers.len() != seg.transitions.counts.len()
                || seg.transitions.counts.iter().any(|row| row.len() != seg.transitions.counts.len())
            {
                return bad(format!("{}: transition matrix is not square", seg.label));
            }
            if seg.participation.len() < n || seg.participant_volatility.len() < n {
                return bad(format!("{}: missing per-speaker rows", seg.label));
            }
            if seg.volatility.defined != seg.volatility.volatility.is_some() {
                return bad(format!("{}: `defined` disagrees with `volatility`", seg.label));
            }
        }
        if self.diagnostics.dropped_cue_count
            != self
                .diagnostics
                .warnings
                .iter()
                .filter(|w| w.code == crate::ingest::WarningCode::DroppedCue)
                .count()
        {
            return bad("dropped_cue_count disagrees with warnings".into());
        }
        Ok(())
    }
}

/// Runs the whole per-meeting pipeline on raw transcript bytes.
pub fn analyze_transcript(
    bytes: &[u8],
    meta: &MeetingMeta,
    config: &AnalysisConfig,
) -> Result<MeetingReport> {
    config.validate()?;
    meta.validate()?;
    let (mut utterances, diagnostics) = parse_vtt_with_roster(bytes, meta.participants.as_deref())?;
    if config.exclude_unknown_speaker {
        utterances.retain(|u| u.speaker_id != UNKNOWN_SPEAKER);
    }
    let options = TurnOptions {
        gap_break_s: config.gap_break_s,
    };
    let turns = build_turns_with(&utterances, &options)?;
    let metrics = meeting_metrics(&turns, meta, &config.volatility)?;
    Ok(MeetingReport::assemble(meta, config, utterances, diagnostics, metrics))
}
