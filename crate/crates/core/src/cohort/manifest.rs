use std::collections::HashSet;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::ingest::MeetingMeta;

pub const REQUIRED_COLUMNS: &[&str] = &["path", "meeting_id", "group_id", "week_index"];
pub const OPTIONAL_COLUMNS: &[&str] = &[
    "first_half_language",
    "second_half_language",
    "recorded_duration_s",
    "changeover_s",
    "media_url",
    "participants",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRow {
    /// Line of the row in the manifest file.
    pub line: usize,
    /// Transcript path as written; relative paths resolve against the
    /// manifest's directory.
    pub path: PathBuf,
    pub meta: MeetingMeta,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CohortManifest {
    pub rows: Vec<ManifestRow>,
}

/// Parses the corpus manifest CSV. The header must name `path`,
/// `meeting_id`, `group_id` and `week_index`; `participants` is an optional
/// `;`-separated roster.
pub fn load_manifest(bytes: &[u8]) -> Result<CohortManifest> {
    let bad = |line: usize, reason: String| Error::BadManifest { line, reason };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let headers = reader
        .headers()
        .map_err(|e| bad(1, e.to_string()))?
        .clone();
    if headers.iter().all(str::is_empty) {
        return Err(bad(1, "missing header row".into()));
    }
    for required in REQUIRED_COLUMNS {
        if !headers.iter().any(|h| h == *required) {
            return Err(bad(1, format!("missing required column `{required}`")));
        }
    }
    if let Some(unknown) = headers
        .iter()
        .find(|h| !REQUIRED_COLUMNS.contains(h) && !OPTIONAL_COLUMNS.contains(h))
    {
        return Err(bad(1, format!("unknown column `{unknown}`")));
    }

    let mut rows = Vec::new();
    let mut ids = HashSet::new();
    let mut slots = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            bad(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .and_then(|i| record.get(i))
                .unwrap_or("")
        };
        for required in REQUIRED_COLUMNS {
            if field(required).is_empty() {
                return Err(bad(line, format!("empty `{required}`")));
            }
        }
        let meta = MeetingMeta::from_fields(
            headers
                .iter()
                .zip(record.iter())
                .filter(|(h, _)| *h != "path"),
        )
        .map_err(|e| bad(line, e.to_string()))?;
        if !ids.insert(meta.meeting_id.clone()) {
            return Err(bad(line, format!("duplicate meeting_id `{}`", meta.meeting_id)));
        }
        if !slots.insert((meta.group_id.clone(), meta.week_index)) {
            return Err(bad(
                line,
                format!("group `{}` already has a week {} meeting", meta.group_id, meta.week_index),
            ));
        }
        rows.push(ManifestRow {
            line,
            path: PathBuf::from(field("path")),
            meta,
        });
    }
    Ok(CohortManifest { rows })
}
