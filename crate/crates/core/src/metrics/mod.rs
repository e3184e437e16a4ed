//! Participation, who-followed-who transitions and conversational volatility.

mod participation;
mod volatility;

pub use participation::{
    participation, transitions, ParticipantShare, ParticipationStats, TransitionMatrix,
};
pub use volatility::{
    duration_series, log_returns, participant_volatility, series_volatility, volatility,
    DurationMode, RateScaleMode, SeriesUnit, VolatilityConfig, VolatilityResult,
};
pub(crate) use volatility::sample_std;

use crate::conversation::{split_halves, split_point_for_end, whole_segment, Segment, Turn};
use crate::error::{Error, Result};
use crate::ingest::MeetingMeta;

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentMetrics {
    pub segment: Segment,
    pub participation: ParticipationStats,
    pub transitions: TransitionMatrix,
    pub volatility: VolatilityResult,
    /// One entry per meeting speaker, in [`MeetingMetrics::speakers`] order.
    pub participant_volatility: Vec<(String, VolatilityResult)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeetingMetrics {
    pub split_s: f64,
    /// Roster order first, then remaining speakers by first appearance.
    pub speakers: Vec<String>,
    /// WHOLE, FIRST_HALF, SECOND_HALF.
    pub segments: Vec<SegmentMetrics>,
}

pub fn segment_metrics(segment: Segment, speakers: &[String], config: &VolatilityConfig) -> SegmentMetrics {
    let participant_volatility = speakers
        .iter()
        .map(|s| (s.clone(), participant_volatility(&segment, s, config)))
        .collect();
    SegmentMetrics {
        participation: participation(&segment, speakers),
        transitions: transitions(&segment, speakers),
        volatility: volatility(&segment, config),
        participant_volatility,
        segment,
    }
}

/// Metrics for the whole meeting and each half. Half languages are taken
/// from `meta`; the split follows [`crate::conversation::split_point`].
pub fn meeting_metrics(
    turns: &[Turn],
    meta: &MeetingMeta,
    config: &VolatilityConfig,
) -> Result<MeetingMetrics> {
    if turns.is_empty() {
        return Err(Error::EmptyInput);
    }
    config.validate()?;
    let last_end = turns.iter().map(|t| t.end_s).fold(0.0, f64::max);
    let split_s = split_point_for_end(meta, last_end);

    let whole = whole_segment(turns);
    let speakers = participation::speaker_order(&whole, meta.participants.as_deref().unwrap_or(&[]));
    let (mut first, mut second) = split_halves(turns, split_s);
    first.language = meta.first_half_language.clone();
    second.language = meta.second_half_language.clone();

    let segments = [whole, first, second]
        .into_iter()
        .map(|s| segment_metrics(s, &speakers, config))
        .collect();
    Ok(MeetingMetrics {
        split_s,
        speakers,
        segments,
    })
}
