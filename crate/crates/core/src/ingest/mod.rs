//! Transcript ingestion: WebVTT parsing and meeting metadata.

mod meta;
mod vtt;

pub use meta::{MeetingMeta, UNKNOWN_LANGUAGE};
pub use vtt::{
    extract_speaker, format_timestamp, parse_timestamp, parse_vtt, parse_vtt_with_roster,
    to_canonical_vtt, ParseDiagnostics, Utterance, Warning, WarningCode, UNKNOWN_SPEAKER,
};
