use std::path::{Path, PathBuf};

use super::{fmt6, fmt6_opt, MeetingReport};
use crate::error::{Error, Result};

/// Row label used in `volatility.csv` for the whole-group series.
pub const GROUP_ROW: &str = "ALL";

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    csv::Writer::from_path(path).map_err(|e| csv_error(path, e))
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(format!("{other:?}")),
        },
    }
}

/// Writes `turns.csv`, `participation.csv`, `transitions.csv` and
/// `volatility.csv` for one meeting into `dir`.
pub fn write_meeting_tables(report: &MeetingReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let path = dir.join("turns.csv");
    let mut w = writer(&path)?;
    let mut rows = vec![header(&[
        "segment", "turn_index", "speaker_id", "start_s", "end_s", "duration_s", "utterance_count",
    ])];
    for seg in &report.segments {
        for (i, t) in seg.turns.iter().enumerate() {
            rows.push(vec![
                seg.label.to_string(),
                i.to_string(),
                t.speaker_id.clone(),
                fmt6(t.start_s),
                fmt6(t.end_s),
                fmt6(t.duration_s),
                t.utterance_indices.len().to_string(),
            ]);
        }
    }
    write_rows(&mut w, &path, rows)?;
    written.push(path);

    let path = dir.join("participation.csv");
    let mut w = writer(&path)?;
    let mut rows = vec![header(&[
        "segment", "language", "speaker_id", "speaking_time_s", "participation_pct", "turn_count",
    ])];
    for seg in &report.segments {
        for s in &seg.participation {
            rows.push(vec![
                seg.label.to_string(),
                seg.language.clone(),
                s.speaker_id.clone(),
                fmt6(s.speaking_time_s),
                fmt6(s.participation_pct),
                s.turn_count.to_string(),
            ]);
        }
    }
    write_rows(&mut w, &path, rows)?;
    written.push(path);

    let path = dir.join("transitions.csv");
    let mut w = writer(&path)?;
    let mut rows = vec![header(&["segment", "from_speaker", "to_speaker", "count"])];
    for seg in &report.segments {
        let m = &seg.transitions;
        for (i, from) in m.speakers.iter().enumerate() {
            for (j, to) in m.speakers.iter().enumerate() {
                rows.push(vec![
                    seg.label.to_string(),
                    from.clone(),
                    to.clone(),
                    m.counts[i][j].to_string(),
                ]);
            }
        }
    }
    write_rows(&mut w, &path, rows)?;
    written.push(path);

    let path = dir.join("volatility.csv");
    let mut w = writer(&path)?;
    let mut rows = vec![header(&[
        "segment", "language", "speaker_id", "n_points", "raw_sigma", "rate_scale", "volatility", "defined",
    ])];
    for seg in &report.segments {
        let group = std::iter::once((GROUP_ROW, &seg.volatility));
        let people = seg
            .participant_volatility
            .iter()
            .map(|p| (p.speaker_id.as_str(), &p.volatility));
        for (who, v) in group.chain(people) {
            rows.push(vec![
                seg.label.to_string(),
                seg.language.clone(),
                who.to_string(),
                v.n_points.to_string(),
                fmt6_opt(v.raw_sigma),
                fmt6_opt(v.rate_scale),
                fmt6_opt(v.volatility),
                v.defined.to_string(),
            ]);
        }
    }
    write_rows(&mut w, &path, rows)?;
    written.push(path);

    Ok(written)
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

pub(crate) fn write_rows<W: std::io::Write>(
    w: &mut csv::Writer<W>,
    path: &Path,
    rows: Vec<Vec<String>>,
) -> Result<()> {
    for row in rows {
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
