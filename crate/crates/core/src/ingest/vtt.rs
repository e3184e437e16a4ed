//! Parser for the speaker-attributed WebVTT dialect emitted by meeting
//! recorders ("Name: text" cue payloads).
//!
//! Malformed cues never abort a parse: they are skipped and reported as
//! `DROPPED_CUE` warnings. Only a missing `WEBVTT` header or a file with no
//! usable cue at all is an error.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speaker assigned to cues that carry no name and follow no named cue.
pub const UNKNOWN_SPEAKER: &str = "unknown";

const MAX_SPEAKER_CHARS: usize = 64;
const UTF8_BOM: &[u8] = b"\xEF\xBB\xBF";
// Largest millisecond count exactly representable as f64.
const MAX_EXACT_MS: u64 = 1 << 53;

/// One parsed caption cue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Utterance {
    pub index: usize,
    pub speaker_id: String,
    pub start_s: f64,
    pub end_s: f64,
    pub text: String,
}

impl Utterance {
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WarningCode {
    /// A cue block was skipped (bad timing line, empty payload, end <= start).
    DroppedCue,
    /// A speaker prefix names someone outside the meeting roster.
    SpeakerSuspect,
}

impl fmt::Display for WarningCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WarningCode::DroppedCue => "DROPPED_CUE",
            WarningCode::SpeakerSuspect => "SPEAKER_SUSPECT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Warning {
    /// 1-based line number in the source file.
    pub line: usize,
    pub code: WarningCode,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParseDiagnostics {
    pub warnings: Vec<Warning>,
    pub dropped_cue_count: usize,
    pub source_byte_count: usize,
}

impl ParseDiagnostics {
    fn push(&mut self, line: usize, code: WarningCode, message: String) {
        if code == WarningCode::DroppedCue {
            self.dropped_cue_count += 1;
        }
        self.warnings.push(Warning { line, code, message });
    }
}

/// Parses a transcript without a speaker roster.
pub fn parse_vtt(bytes: &[u8]) -> Result<(Vec<Utterance>, ParseDiagnostics)> {
    parse_vtt_with_roster(bytes, None)
}

/// Parses a transcript. When `roster` is given, explicit speaker prefixes
/// that are not on it produce `SPEAKER_SUSPECT` warnings (the utterance is
/// still kept under that name).
pub fn parse_vtt_with_roster(
    bytes: &[u8],
    roster: Option<&[String]>,
) -> Result<(Vec<Utterance>, ParseDiagnostics)> {
    if bytes.starts_with(&[0xFF, 0xFE]) || bytes.starts_with(&[0xFE, 0xFF]) {
        return Err(Error::NotVtt(
            "UTF-16 byte order mark found; re-save the transcript as UTF-8".into(),
        ));
    }
    let body = bytes.strip_prefix(UTF8_BOM).unwrap_or(bytes);
    let text = std::str::from_utf8(body).map_err(|e| {
        Error::NotVtt(format!("invalid UTF-8 at byte {}", e.valid_up_to()))
    })?;
    let lines: Vec<&str> = text
        .split('\n')
        .map(|l| l.strip_suffix('\r').unwrap_or(l))
        .collect();

    if !is_header(lines[0]) {
        return Err(Error::NotVtt("first line must be `WEBVTT`".into()));
    }

    let mut diagnostics = ParseDiagnostics {
        source_byte_count: bytes.len(),
        ..Default::default()
    };

    // Header metadata runs up to the first blank line; a timing line there
    // means the blank separator was omitted, so cue parsing starts at it.
    let mut pos = 1;
    while pos < lines.len() && !is_blank(lines[pos]) && !lines[pos].contains("-->") {
        pos += 1;
    }

    let mut raw: Vec<Utterance> = Vec::new();
    let mut previous_speaker: Option<String> = None;
    while pos < lines.len() {
        if is_blank(lines[pos]) {
            pos += 1;
            continue;
        }
        let block_start = pos;
        while pos < lines.len() && !is_blank(lines[pos]) {
            pos += 1;
        }
        let block = &lines[block_start..pos];
        // 1-based line number of the block's first line.
        let first_line = block_start + 1;

        if is_metadata_block(block[0]) {
            continue;
        }
        let timing_offset = if block[0].contains("-->") {
            0
        } else if block.len() > 1 && block[1].contains("-->") {
            1
        } else {
            diagnostics.push(
                first_line,
                WarningCode::DroppedCue,
                "cue block has no timing line".into(),
            );
            continue;
        };
        let timing_line = first_line + timing_offset;
        let (start_s, end_s) = match parse_timing(block[timing_offset]) {
            Ok(times) => times,
            Err(e) => {
                diagnostics.push(timing_line, WarningCode::DroppedCue, e.to_string());
                continue;
            }
        };
        let payload = &block[timing_offset + 1..];
        if payload.is_empty() {
            diagnostics.push(
                timing_line,
                WarningCode::DroppedCue,
                "cue has no payload".into(),
            );
            continue;
        }
        if end_s <= start_s {
            diagnostics.push(
                timing_line,
                WarningCode::DroppedCue,
                format!("cue ends at {end_s} s, not after its start at {start_s} s"),
            );
            continue;
        }

        let explicit = speaker_prefix(payload[0]).map(|(name, _)| name.to_string());
        let (speaker_id, text) = extract_speaker(payload, previous_speaker.as_deref());
        if let (Some(name), Some(roster)) = (&explicit, roster) {
            if !roster.iter().any(|r| r == name) {
                diagnostics.push(
                    timing_line + 1,
                    WarningCode::SpeakerSuspect,
                    format!("speaker `{name}` is not on the meeting roster"),
                );
            }
        }
        previous_speaker = Some(speaker_id.clone());
        raw.push(Utterance {
            index: raw.len(),
            speaker_id,
            start_s,
            end_s,
            text,
        });
    }

    if raw.is_empty() {
        return Err(Error::EmptyTranscript);
    }
    raw.sort_by(|a, b| {
        a.start_s
            .total_cmp(&b.start_s)
            .then(a.end_s.total_cmp(&b.end_s))
            .then(a.index.cmp(&b.index))
    });
    for (i, u) in raw.iter_mut().enumerate() {
        u.index = i;
    }
    Ok((raw, diagnostics))
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

fn is_header(line: &str) -> bool {
    match line.strip_prefix("WEBVTT") {
        Some(rest) => rest.is_empty() || rest.starts_with([' ', '\t']),
        None => false,
    }
}

fn is_metadata_block(line: &str) -> bool {
    ["NOTE", "STYLE", "REGION"].iter().any(|kw| {
        line.strip_prefix(kw)
            .is_some_and(|rest| rest.is_empty() || rest.starts_with([' ', '\t']))
    })
}

fn parse_timing(line: &str) -> Result<(f64, f64)> {
    let (left, right) = line
        .split_once("-->")
        .ok_or_else(|| Error::BadTimestamp(line.to_string()))?;
    let start = parse_timestamp(left.trim())?;
    // Anything after the end timestamp is cue settings, which are ignored.
    let end_token = right.split_whitespace().next().unwrap_or("");
    let end = parse_timestamp(end_token)?;
    Ok((start, end))
}

/// Parses `HH:MM:SS.mmm` (two or more hour digits) or `MM:SS.mmm`.
pub fn parse_timestamp(text: &str) -> Result<f64> {
    let bad = || Error::BadTimestamp(text.to_string());
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());

    let (clock, millis) = text.split_once('.').ok_or_else(bad)?;
    if millis.len() != 3 || !all_digits(millis) {
        return Err(bad());
    }
    let fields: Vec<&str> = clock.split(':').collect();
    let (hours, minutes, seconds) = match fields.as_slice() {
        [m, s] => ("0", *m, *s),
        [h, m, s] if h.len() >= 2 => (*h, *m, *s),
        _ => return Err(bad()),
    };
    if !all_digits(hours) || minutes.len() != 2 || seconds.len() != 2 {
        return Err(bad());
    }
    if !all_digits(minutes) || !all_digits(seconds) {
        return Err(bad());
    }
    let parse = |s: &str| s.parse::<u64>().map_err(|_| bad());
    let (h, m, s, ms) = (parse(hours)?, parse(minutes)?, parse(seconds)?, parse(millis)?);
    if m >= 60 || s >= 60 {
        return Err(bad());
    }
    let total_ms = h
        .checked_mul(3_600_000)
        .and_then(|v| v.checked_add(m * 60_000 + s * 1000 + ms))
        .filter(|&v| v <= MAX_EXACT_MS)
        .ok_or_else(bad)?;
    Ok(total_ms as f64 / 1000.0)
}

/// Splits a "Name: text" payload line. The name is trimmed and must be
/// non-empty and at most 64 characters.
fn speaker_prefix(line: &str) -> Option<(&str, &str)> {
    let (name, rest) = line.split_once(": ")?;
    let name = name.trim();
    if name.is_empty() || name.chars().count() > MAX_SPEAKER_CHARS {
        return None;
    }
    Some((name, rest))
}

/// Attributes a cue payload to a speaker.
///
/// The first payload line is split at its first `": "`; a valid name on the
/// left becomes the speaker. Otherwise the cue inherits `previous_speaker`
/// (or [`UNKNOWN_SPEAKER`]) and keeps its whole text.
pub fn extract_speaker(payload: &[&str], previous_speaker: Option<&str>) -> (String, String) {
    let first = payload.first().copied().unwrap_or("");
    let (speaker, head) = match speaker_prefix(first) {
        Some((name, rest)) => (name.to_string(), rest),
        None => (
            previous_speaker.unwrap_or(UNKNOWN_SPEAKER).to_string(),
            first,
        ),
    };
    let mut text = head.to_string();
    for line in payload.iter().skip(1) {
        text.push('\n');
        text.push_str(line);
    }
    (speaker, text.trim().to_string())
}

/// Formats seconds as `HH:MM:SS.mmm`, rounding to the nearest millisecond.
pub fn format_timestamp(seconds: f64) -> String {
    let total_ms = (seconds * 1000.0).round().max(0.0) as u64;
    let (h, rem) = (total_ms / 3_600_000, total_ms % 3_600_000);
    let (m, rem) = (rem / 60_000, rem % 60_000);
    let (s, ms) = (rem / 1000, rem % 1000);
    format!("{h:02}:{m:02}:{s:02}.{ms:03}")
}

/// Writes utterances back out as canonical speaker-attributed WebVTT.
pub fn to_canonical_vtt(utterances: &[Utterance]) -> String {
    let mut out = String::from("WEBVTT\n");
    for (i, u) in utterances.iter().enumerate() {
        let _ = write!(
            out,
            "\n{}\n{} --> {}\n{}: {}\n",
            i + 1,
            format_timestamp(u.start_s),
            format_timestamp(u.end_s),
            u.speaker_id,
            u.text
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamps() {
        assert_eq!(parse_timestamp("00:00:03.600").unwrap(), 3.6);
        assert_eq!(parse_timestamp("01:02:03.450").unwrap(), 3723.45);
        assert_eq!(parse_timestamp("02:03.450").unwrap(), 123.45);
        assert_eq!(parse_timestamp("100:00:00.001").unwrap(), 360000.001);
    }

    #[test]
    fn bad_timestamps() {
        for bad in [
            "garbage", "", "00:00:03", "00:00:03.6", "00:60:00.000", "00:00:60.000",
            "0:00:03.600", "00:3.600", "00:00:03.6000", "00:00:0a.000", "+0:00.000",
            "99999999999999999999:00:00.000", ":00.000",
        ] {
            match parse_timestamp(bad) {
                Err(Error::BadTimestamp(tok)) => assert_eq!(tok, bad),
                other => panic!("{bad:?} -> {other:?}"),
            }
        }
    }

    #[test]
    fn format_round_trips() {
        for ts in ["00:00:00.000", "00:59:59.999", "12:34:56.789", "123:00:00.001"] {
            assert_eq!(format_timestamp(parse_timestamp(ts).unwrap()), ts);
        }
    }

    #[test]
    fn speaker_rules() {
        assert_eq!(
            extract_speaker(&["Bob: Salut Alice"], None),
            ("Bob".into(), "Salut Alice".into())
        );
        assert_eq!(
            extract_speaker(&["continued sentence with no colon"], Some("Bob")),
            ("Bob".into(), "continued sentence with no colon".into())
        );
        assert_eq!(
            extract_speaker(&["Note: see https://x: y"], Some("Ana")),
            ("Note".into(), "see https://x: y".into())
        );
        assert_eq!(
            extract_speaker(&["no prefix"], None),
            (UNKNOWN_SPEAKER.into(), "no prefix".into())
        );
        // colon without a following space is not a prefix
        assert_eq!(
            extract_speaker(&["time 10:30 ok"], Some("Ana")),
            ("Ana".into(), "time 10:30 ok".into())
        );
        assert_eq!(
            extract_speaker(&["  Dr. Who  :  hello", "second line"], None),
            ("Dr. Who".into(), "hello\nsecond line".into())
        );
        let long = format!("{}: hi", "x".repeat(65));
        assert_eq!(extract_speaker(&[&long], Some("Ana")).0, "Ana");
        let edge = format!("{}: hi", "é".repeat(64));
        assert_eq!(extract_speaker(&[&edge], None).0, "é".repeat(64));
    }

    #[test]
    fn single_cue() {
        let (utts, diag) =
            parse_vtt(b"WEBVTT\n\n1\n00:00:03.600 --> 00:00:07.200\nAlice: Bonjour\n").unwrap();
        assert_eq!(
            utts,
            vec![Utterance {
                index: 0,
                speaker_id: "Alice".into(),
                start_s: 3.6,
                end_s: 7.2,
                text: "Bonjour".into(),
            }]
        );
        assert!(diag.warnings.is_empty());
        assert_eq!(diag.source_byte_count, 55);
    }

    #[test]
    fn header_only_is_empty() {
        assert!(matches!(parse_vtt(b"WEBVTT\n"), Err(Error::EmptyTranscript)));
        assert!(matches!(parse_vtt(b"WEBVTT"), Err(Error::EmptyTranscript)));
    }

    #[test]
    fn header_variants() {
        let cue = "\n\n00:01.000 --> 00:02.000\nA: x\n";
        assert!(parse_vtt(format!("WEBVTT - Zoom{cue}").as_bytes()).is_ok());
        assert!(parse_vtt(format!("WEBVTT\tx{cue}").as_bytes()).is_ok());
        assert!(matches!(
            parse_vtt(format!("WEBVTTX{cue}").as_bytes()),
            Err(Error::NotVtt(_))
        ));
        assert!(matches!(parse_vtt(b""), Err(Error::NotVtt(_))));
        assert!(matches!(
            parse_vtt(b"\xFF\xFEW\0E\0"),
            Err(Error::NotVtt(msg)) if msg.contains("UTF-16")
        ));
        assert!(matches!(parse_vtt(b"WEBVTT\n\n\xC3\x28"), Err(Error::NotVtt(_))));
    }

    #[test]
    fn garbage_timing_is_dropped() {
        let src = "WEBVTT\n\n1\n00:00:01.000 --> 00:00:02.000\nA: one\n\n\
                   2\n00:00:02.000 --> 00:00:03.000\nB: two\n\n\
                   3\ngarbage --> 00:00:09.000\nA: three\n\n\
                   4\n00:00:04.000 --> 00:00:05.000\nB: four\n\n\
                   5\n00:00:05.000 --> 00:00:06.000\nA: five\n";
        let (utts, diag) = parse_vtt(src.as_bytes()).unwrap();
        assert_eq!(utts.len(), 4);
        assert_eq!(diag.dropped_cue_count, 1);
        assert_eq!(diag.warnings[0].line, 12);
        assert_eq!(diag.warnings[0].code, WarningCode::DroppedCue);
    }

    #[test]
    fn roster_flags_suspect_names() {
        let src = b"WEBVTT\n\n00:01.000 --> 00:02.000\nNote: see https://x: y\n";
        let roster = vec!["Ana".to_string()];
        let (utts, diag) = parse_vtt_with_roster(src, Some(&roster)).unwrap();
        assert_eq!(utts[0].speaker_id, "Note");
        assert_eq!(diag.warnings.len(), 1);
        assert_eq!(diag.warnings[0].code, WarningCode::SpeakerSuspect);
        assert_eq!(diag.warnings[0].line, 4);
        assert_eq!(diag.dropped_cue_count, 0);
    }

    #[test]
    fn canonical_output_reparses() {
        let src = "WEBVTT\n\n00:05.000 --> 00:06.000\nB: later\n\n\
                   00:01.000 --> 00:02.500 align:start\nA: first\nmore\n\n\
                   00:02.500 --> 00:03.000\nstill A\n";
        let (utts, _) = parse_vtt(src.as_bytes()).unwrap();
        assert_eq!(utts[0].text, "first\nmore");
        assert_eq!(utts[2].speaker_id, "B");
        let again = parse_vtt(to_canonical_vtt(&utts).as_bytes()).unwrap().0;
        assert_eq!(utts, again);
    }
}
