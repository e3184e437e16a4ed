//! Turn reconstruction and half-meeting segmentation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{MeetingMeta, Utterance, UNKNOWN_LANGUAGE};

/// A maximal same-speaker run of utterances.
#[derive(Debug, Clone, PartialEq)]
pub struct Turn {
    pub speaker_id: String,
    pub start_s: f64,
    pub end_s: f64,
    /// Floor-holding span, `end_s - start_s`.
    pub duration_s: f64,
    pub utterance_indices: Vec<usize>,
    /// Durations of the member utterances, in utterance order.
    pub utterance_durations: Vec<f64>,
}

impl Turn {
    /// Total time actually spoken, excluding silences inside the turn.
    pub fn spoken_s(&self) -> f64 {
        self.utterance_durations.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SegmentLabel {
    Whole,
    FirstHalf,
    SecondHalf,
}

impl SegmentLabel {
    pub const ALL: [SegmentLabel; 3] = [
        SegmentLabel::Whole,
        SegmentLabel::FirstHalf,
        SegmentLabel::SecondHalf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SegmentLabel::Whole => "WHOLE",
            SegmentLabel::FirstHalf => "FIRST_HALF",
            SegmentLabel::SecondHalf => "SECOND_HALF",
        }
    }

    pub fn is_half(self) -> bool {
        self != SegmentLabel::Whole
    }
}

impl fmt::Display for SegmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub label: SegmentLabel,
    pub language: String,
    pub span_start_s: f64,
    pub span_end_s: f64,
    pub turns: Vec<Turn>,
}

impl Segment {
    pub fn span_s(&self) -> f64 {
        self.span_end_s - self.span_start_s
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TurnOptions {
    /// When set, a same-speaker silence longer than this starts a new turn.
    pub gap_break_s: Option<f64>,
}

pub fn build_turns(utterances: &[Utterance]) -> Result<Vec<Turn>> {
    build_turns_with(utterances, &TurnOptions::default())
}

/// Merges consecutive same-speaker utterances into turns.
///
/// Input must be ordered as produced by the parser. A turn ends at the latest
/// end among its members, which is the last member's end unless same-speaker
/// cues overlap.
pub fn build_turns_with(utterances: &[Utterance], options: &TurnOptions) -> Result<Vec<Turn>> {
    if utterances.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut turns: Vec<Turn> = Vec::new();
    for u in utterances {
        let extend = turns.last().is_some_and(|t| {
            t.speaker_id == u.speaker_id
                && options
                    .gap_break_s
                    .is_none_or(|gap| u.start_s - t.end_s <= gap)
        });
        if extend {
            let turn = turns.last_mut().expect("checked above");
            turn.end_s = turn.end_s.max(u.end_s);
            turn.duration_s = turn.end_s - turn.start_s;
            turn.utterance_indices.push(u.index);
            turn.utterance_durations.push(u.duration_s());
        } else {
            turns.push(Turn {
                speaker_id: u.speaker_id.clone(),
                start_s: u.start_s,
                end_s: u.end_s,
                duration_s: u.duration_s(),
                utterance_indices: vec![u.index],
                utterance_durations: vec![u.duration_s()],
            });
        }
    }
    Ok(turns)
}

/// Where the meeting changes language: the annotated changeover if any,
/// else half the recorded duration, else half the last utterance end.
pub fn split_point(meta: &MeetingMeta, utterances: &[Utterance]) -> f64 {
    let last_end = utterances.iter().map(|u| u.end_s).fold(0.0, f64::max);
    split_point_for_end(meta, last_end)
}

pub(crate) fn split_point_for_end(meta: &MeetingMeta, last_end_s: f64) -> f64 {
    meta.changeover_s
        .or(meta.recorded_duration_s.map(|d| d / 2.0))
        .unwrap_or(last_end_s / 2.0)
}

fn mostly_before(turn: &Turn, split_s: f64) -> bool {
    let before = (turn.end_s.min(split_s) - turn.start_s).max(0.0);
    let after = (turn.end_s - turn.start_s.max(split_s)).max(0.0);
    before >= after
}

fn extent(turns: &[Turn]) -> Option<(f64, f64)> {
    let first = turns.first()?;
    let end = turns.iter().map(|t| t.end_s).fold(first.end_s, f64::max);
    Some((first.start_s, end))
}

/// The whole-meeting view: every turn, spanning first start to last end.
pub fn whole_segment(turns: &[Turn]) -> Segment {
    let (start, end) = extent(turns).unwrap_or((0.0, 0.0));
    Segment {
        label: SegmentLabel::Whole,
        language: UNKNOWN_LANGUAGE.into(),
        span_start_s: start,
        span_end_s: end,
        turns: turns.to_vec(),
    }
}

/// Splits turns at `split_s`. A turn belongs to the half holding the larger
/// part of its span, ties going to the first half. The second half begins at
/// the first turn that does not belong to the first, so the two halves are
/// always contiguous runs of the input.
pub fn split_halves(turns: &[Turn], split_s: f64) -> (Segment, Segment) {
    let (start, end) = extent(turns).unwrap_or((split_s, split_s));
    let cut = turns
        .iter()
        .position(|t| !mostly_before(t, split_s))
        .unwrap_or(turns.len());
    let first = Segment {
        label: SegmentLabel::FirstHalf,
        language: UNKNOWN_LANGUAGE.into(),
        span_start_s: start.min(split_s),
        span_end_s: split_s,
        turns: turns[..cut].to_vec(),
    };
    let second = Segment {
        label: SegmentLabel::SecondHalf,
        language: UNKNOWN_LANGUAGE.into(),
        span_start_s: split_s,
        span_end_s: end.max(split_s),
        turns: turns[cut..].to_vec(),
    };
    (first, second)
}
