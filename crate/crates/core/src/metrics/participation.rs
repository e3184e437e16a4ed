use serde::{Deserialize, Serialize};

use crate::conversation::Segment;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticipantShare {
    pub speaker_id: String,
    pub speaking_time_s: f64,
    pub participation_pct: f64,
    pub turn_count: usize,
}

/// Speaking-time shares. Percentages are of total speaking time in the
/// segment, so they sum to 100 whenever anyone spoke.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParticipationStats {
    pub shares: Vec<ParticipantShare>,
}

/// `counts[i][j]` is how often a turn by `speakers[j]` directly followed a
/// turn by `speakers[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionMatrix {
    pub speakers: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl TransitionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn count(&self, from: &str, to: &str) -> u64 {
        let i = self.speakers.iter().position(|s| s == from);
        let j = self.speakers.iter().position(|s| s == to);
        match (i, j) {
            (Some(i), Some(j)) => self.counts[i][j],
            _ => 0,
        }
    }
}

/// `roster` followed by any other speaker of the segment, in order of
/// first appearance.
pub(crate) fn speaker_order(segment: &Segment, roster: &[String]) -> Vec<String> {
    let mut order = roster.to_vec();
    for t in &segment.turns {
        if !order.contains(&t.speaker_id) {
            order.push(t.speaker_id.clone());
        }
    }
    order
}

pub fn participation(segment: &Segment, roster: &[String]) -> ParticipationStats {
    let speakers = speaker_order(segment, roster);
    let mut time = vec![0.0; speakers.len()];
    let mut turns = vec![0usize; speakers.len()];
    for t in &segment.turns {
        let i = speakers.iter().position(|s| *s == t.speaker_id).expect("in order");
        time[i] += t.duration_s;
        turns[i] += 1;
    }
    let total: f64 = time.iter().sum();
    let shares = speakers
        .into_iter()
        .zip(time)
        .zip(turns)
        .map(|((speaker_id, speaking_time_s), turn_count)| ParticipantShare {
            speaker_id,
            speaking_time_s,
            participation_pct: if total > 0.0 {
                100.0 * speaking_time_s / total
            } else {
                0.0
            },
            turn_count,
        })
        .collect();
    ParticipationStats { shares }
}

/// Counts adjacent turn pairs inside the segment.
pub fn transitions(segment: &Segment, roster: &[String]) -> TransitionMatrix {
    let speakers = speaker_order(segment, roster);
    let n = speakers.len();
    let mut counts = vec![vec![0u64; n]; n];
    let position = |id: &str| speakers.iter().position(|s| s == id).expect("in order");
    for pair in segment.turns.windows(2) {
        counts[position(&pair[0].speaker_id)][position(&pair[1].speaker_id)] += 1;
    }
    TransitionMatrix { speakers, counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conversation::{SegmentLabel, Turn};

    fn segment(turns: &[(&str, f64)]) -> Segment {
        let mut t0 = 0.0;
        let turns = turns
            .iter()
            .map(|&(s, d)| {
                let t = Turn {
                    speaker_id: s.into(),
                    start_s: t0,
                    end_s: t0 + d,
                    duration_s: d,
                    utterance_indices: vec![],
                    utterance_durations: vec![d],
                };
                t0 += d;
                t
            })
            .collect();
        Segment {
            label: SegmentLabel::Whole,
            language: "unknown".into(),
            span_start_s: 0.0,
            span_end_s: t0,
            turns,
        }
    }

    #[test]
    fn shares() {
        let stats = participation(&segment(&[("A", 30.0), ("B", 60.0), ("C", 10.0)]), &[]);
        let pct: Vec<_> = stats.shares.iter().map(|s| s.participation_pct).collect();
        assert_eq!(pct, vec![30.0, 60.0, 10.0]);
    }

    #[test]
    fn empty_segment_with_roster() {
        let roster = vec!["A".to_string(), "B".to_string()];
        let stats = participation(&segment(&[]), &roster);
        assert_eq!(stats.shares.len(), 2);
        assert!(stats.shares.iter().all(|s| s.participation_pct == 0.0 && s.turn_count == 0));
    }

    #[test]
    fn single_speaker() {
        let stats = participation(&segment(&[("A", 120.0)]), &[]);
        assert_eq!(stats.shares[0].participation_pct, 100.0);
        assert_eq!(stats.shares[0].turn_count, 1);
    }

    #[test]
    fn transition_counts() {
        let m = transitions(&segment(&[("A", 1.0), ("B", 1.0), ("A", 1.0), ("C", 1.0)]), &[]);
        assert_eq!((m.count("A", "B"), m.count("B", "A"), m.count("A", "C")), (1, 1, 1));
        assert_eq!(m.total(), 3);

        let m = transitions(&segment(&[("A", 1.0), ("B", 1.0), ("A", 1.0), ("B", 1.0), ("A", 1.0), ("B", 1.0)]), &[]);
        assert_eq!((m.count("A", "B"), m.count("B", "A")), (3, 2));

        let m = transitions(&segment(&[("A", 1.0)]), &["Z".to_string()]);
        assert_eq!(m.total(), 0);
        assert_eq!(m.speakers, vec!["Z", "A"]);
    }
}
