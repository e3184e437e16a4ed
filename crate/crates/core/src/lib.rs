//! Turn-taking analytics for speaker-attributed WebVTT meeting transcripts.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`ingest`] parses the Zoom-style caption dialect into [`Utterance`]s and
//!    loads per-meeting annotations ([`MeetingMeta`]).
//! 2. [`conversation`] merges same-speaker runs into [`Turn`]s and splits the
//!    meeting into whole / first-half / second-half [`Segment`]s.
//! 3. [`metrics`] computes participation shares, the who-followed-who
//!    transition matrix and conversational volatility (the sample standard
//!    deviation of log-returns of consecutive turn durations, scaled by the
//!    square root of turns per minute).
//! 4. [`report`] and [`cohort`] serialize per-meeting reports and fold a
//!    corpus of them into group/language and week-progression tables.

pub mod cli;
pub mod cohort;
pub mod conversation;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod report;

pub use conversation::{build_turns, split_halves, split_point, Segment, SegmentLabel, Turn};
pub use error::{Error, Result};
pub use ingest::{parse_vtt, MeetingMeta, ParseDiagnostics, Utterance};
pub use metrics::{VolatilityConfig, VolatilityResult};
pub use report::MeetingReport;
