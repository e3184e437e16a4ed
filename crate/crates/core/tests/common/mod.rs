//! Shared test support: a direct-definition volatility oracle, synthetic
//! meeting generators and the parser golden checker.
#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;
use turnvol::ingest::{parse_vtt, WarningCode};
use turnvol::MeetingMeta;

/// Volatility straight from its definition: two-pass sample variance of
/// `ln(d[i+1]) - ln(d[i])`, times `sqrt(n / minutes)` when per-minute.
/// Returns `(raw_sigma, rate_scale, volatility)`, or `None` below 3 points.
pub fn oracle(durations: &[f64], span_s: f64, per_minute: bool) -> Option<(f64, f64, f64)> {
    let n = durations.len();
    if n < 3 {
        return None;
    }
    let returns: Vec<f64> = (1..n).map(|i| durations[i].ln() - durations[i - 1].ln()).collect();
    let m = returns.len() as f64;
    let mean = returns.iter().sum::<f64>() / m;
    let var = returns.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (m - 1.0);
    let raw = var.sqrt();
    let scale = if per_minute { (n as f64 * 60.0 / span_s).sqrt() } else { 1.0 };
    Some((raw, scale, raw * scale))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-12)
}

pub fn ts(ms: u64) -> String {
    format!(
        "{:02}:{:02}:{:02}.{:03}",
        ms / 3_600_000,
        ms / 60_000 % 60,
        ms / 1000 % 60,
        ms % 1000
    )
}

/// A cue in whole milliseconds.
#[derive(Debug, Clone)]
pub struct Cue {
    pub speaker: String,
    pub start_ms: u64,
    pub end_ms: u64,
}

pub fn vtt_from_cues(cues: &[Cue]) -> String {
    let mut out = String::from("WEBVTT\n");
    for (i, c) in cues.iter().enumerate() {
        let _ = write!(
            out,
            "\n{}\n{} --> {}\n{}: line {}\n",
            i + 1,
            ts(c.start_ms),
            ts(c.end_ms),
            c.speaker,
            i + 1
        );
    }
    out
}

fn secs(ms: u64) -> f64 {
    ms as f64 / 1000.0
}

/// A generated meeting with the volatility each segment must have.
#[derive(Debug, Clone)]
pub struct SyntheticMeeting {
    pub meta: MeetingMeta,
    pub vtt: String,
    /// WHOLE, FIRST_HALF, SECOND_HALF.
    pub targets: [Option<f64>; 3],
}

impl SyntheticMeeting {
    pub fn target_for(&self, language: &str) -> Option<f64> {
        if self.meta.first_half_language == language {
            self.targets[1]
        } else if self.meta.second_half_language == language {
            self.targets[2]
        } else {
            None
        }
    }
}

/// Back-to-back turns rotating over three speakers. Each half gets its own
/// spread of log-durations; the changeover sits exactly on a turn boundary.
pub fn synth_meeting(
    rng: &mut StdRng,
    meeting_id: &str,
    group_id: &str,
    week: u32,
    languages: (&str, &str),
    turns_per_half: (usize, usize),
    spread: (f64, f64),
) -> SyntheticMeeting {
    let speakers = ["Ana", "Ben", "Chloé"];
    let mut cues = Vec::new();
    let mut t = 0u64;
    let mut half = |count: usize, spread: f64, cues: &mut Vec<Cue>, t: &mut u64| {
        for _ in 0..count {
            let d = (8000.0 * (spread * rng.gen_range(-1.0..1.0f64)).exp()).round() as u64;
            let d = d.max(200);
            cues.push(Cue {
                speaker: speakers[cues.len() % 3].into(),
                start_ms: *t,
                end_ms: *t + d,
            });
            *t += d;
        }
    };
    half(turns_per_half.0, spread.0, &mut cues, &mut t);
    let split_ms = t;
    half(turns_per_half.1, spread.1, &mut cues, &mut t);

    let durations = |cs: &[Cue]| -> Vec<f64> {
        cs.iter().map(|c| secs(c.end_ms) - secs(c.start_ms)).collect()
    };
    let (first, second) = cues.split_at(turns_per_half.0);
    let vol = |cs: &[Cue], span: f64| oracle(&durations(cs), span, true).map(|v| v.2);
    let targets = [
        vol(&cues, secs(t)),
        vol(first, secs(split_ms)),
        vol(second, secs(t) - secs(split_ms)),
    ];

    let mut meta = MeetingMeta::new(meeting_id);
    meta.group_id = group_id.into();
    meta.week_index = week;
    meta.first_half_language = languages.0.into();
    meta.second_half_language = languages.1.into();
    meta.changeover_s = Some(secs(split_ms));
    SyntheticMeeting {
        meta,
        vtt: vtt_from_cues(&cues),
        targets,
    }
}

/// 8 groups x 5 weeks. French halves get a wider spread than English ones
/// and groups differ in their base spread; the language order alternates
/// by week.
pub fn study_corpus(seed: u64) -> Vec<SyntheticMeeting> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for g in 0..8 {
        let base = 0.25 + 0.08 * g as f64;
        for w in 1..=5u32 {
            let langs = if w % 2 == 1 { ("fr", "en") } else { ("en", "fr") };
            let spread_of = |l: &str| if l == "fr" { base + 0.3 } else { base };
            let n = (rng.gen_range(8..30), rng.gen_range(8..30));
            out.push(synth_meeting(
                &mut rng,
                &format!("g{g}w{w}"),
                &format!("group{g}"),
                w,
                langs,
                n,
                (spread_of(langs.0), spread_of(langs.1)),
            ));
        }
    }
    out
}

/// 8 groups x 5 weeks where group g meets pattern (g + w) mod 8 in week w.
/// Every week sees each of the 8 patterns exactly once, so per-week means
/// cannot trend.
pub fn flat_corpus(seed: u64) -> Vec<SyntheticMeeting> {
    let patterns: Vec<SyntheticMeeting> = (0..8)
        .map(|p| {
            let mut rng = StdRng::seed_from_u64(seed + p);
            synth_meeting(&mut rng, "p", "p", 1, ("fr", "en"), (12, 12), (0.4 + 0.1 * p as f64, 0.5))
        })
        .collect();
    let mut out = Vec::new();
    for g in 0..8usize {
        for w in 1..=5u32 {
            let mut m = patterns[(g + w as usize) % 8].clone();
            m.meta.meeting_id = format!("g{g}w{w}");
            m.meta.group_id = format!("group{g}");
            m.meta.week_index = w;
            out.push(m);
        }
    }
    out
}

/// Writes transcripts plus `manifest.csv` under `dir`; returns the manifest path.
pub fn write_corpus(dir: &Path, meetings: &[SyntheticMeeting]) -> PathBuf {
    fs::create_dir_all(dir.join("vtt")).unwrap();
    let mut manifest = String::from(
        "path,meeting_id,group_id,week_index,first_half_language,second_half_language,changeover_s\n",
    );
    for m in meetings {
        let rel = format!("vtt/{}.vtt", m.meta.meeting_id);
        fs::write(dir.join(&rel), &m.vtt).unwrap();
        let _ = writeln!(
            manifest,
            "{rel},{},{},{},{},{},{}",
            m.meta.meeting_id,
            m.meta.group_id,
            m.meta.week_index,
            m.meta.first_half_language,
            m.meta.second_half_language,
            m.meta.changeover_s.unwrap()
        );
    }
    let path = dir.join("manifest.csv");
    fs::write(&path, manifest).unwrap();
    path
}

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

/// Stems of every `tests/fixtures/vtt/*.vtt`, sorted.
pub fn golden_names() -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(fixture_dir().join("vtt"))
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "vtt").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    names.sort();
    names
}

/// Compares `parse_vtt` on `<name>.vtt` against `<name>.expected.json`.
pub fn check_golden(name: &str) -> Result<(), String> {
    let dir = fixture_dir().join("vtt");
    let bytes = fs::read(dir.join(format!("{name}.vtt"))).map_err(|e| e.to_string())?;
    let expected: Value = serde_json::from_slice(
        &fs::read(dir.join(format!("{name}.expected.json"))).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;

    let parsed = parse_vtt(&bytes);
    if let Some(code) = expected.get("error").and_then(Value::as_str) {
        return match parsed {
            Err(e) if e.code() == code => Ok(()),
            Err(e) => Err(format!("expected {code}, got {}", e.code())),
            Ok(_) => Err(format!("expected {code}, parse succeeded")),
        };
    }
    let (utts, diag) = parsed.map_err(|e| format!("unexpected {}: {e}", e.code()))?;

    let want = expected["utterances"].as_array().unwrap();
    if utts.len() != want.len() {
        return Err(format!("{} utterances, expected {}", utts.len(), want.len()));
    }
    for (i, (u, w)) in utts.iter().zip(want).enumerate() {
        let got = (u.index, u.speaker_id.as_str(), u.start_s, u.end_s, u.text.as_str());
        let exp = (
            i,
            w[0].as_str().unwrap(),
            w[1].as_f64().unwrap(),
            w[2].as_f64().unwrap(),
            w[3].as_str().unwrap(),
        );
        if got != exp {
            return Err(format!("utterance {i}: got {got:?}, expected {exp:?}"));
        }
    }

    let got_w: Vec<(usize, String)> = diag
        .warnings
        .iter()
        .map(|w| (w.line, serde_json::to_value(w.code).unwrap().as_str().unwrap().to_string()))
        .collect();
    let exp_w: Vec<(usize, String)> = expected["warnings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| (w[0].as_u64().unwrap() as usize, w[1].as_str().unwrap().to_string()))
        .collect();
    if got_w != exp_w {
        return Err(format!("warnings {got_w:?}, expected {exp_w:?}"));
    }
    let dropped = diag.warnings.iter().filter(|w| w.code == WarningCode::DroppedCue).count();
    if diag.dropped_cue_count != dropped {
        return Err(format!("dropped_cue_count {} vs {dropped} warnings", diag.dropped_cue_count));
    }
    if diag.source_byte_count != bytes.len() {
        return Err(format!("source_byte_count {} vs {}", diag.source_byte_count, bytes.len()));
    }
    Ok(())
}

/// Random bytes, plus VTT-shaped noise that reaches deeper parser paths.
pub fn fuzz_input(rng: &mut StdRng) -> Vec<u8> {
    if rng.gen_bool(0.5) {
        let len = rng.gen_range(0..256);
        return (0..len).map(|_| rng.gen()).collect();
    }
    const PIECES: &[&str] = &[
        "WEBVTT", "\n", "\r\n", "\n\n", "-->", " --> ", "00:", "99:", "60", "59.999", ".000",
        "12", ":", ": ", "Alice: ", "NOTE", "STYLE", "\u{feff}", "é", "1", "-1", " ", "\t",
        "000000000000000000000:", "18446744073709551615", "00:00:00.000 --> 00:00:01.000\n",
    ];
    let mut out = String::from(if rng.gen_bool(0.8) { "WEBVTT\n\n" } else { "" });
    for _ in 0..rng.gen_range(0..60) {
        out.push_str(PIECES[rng.gen_range(0..PIECES.len())]);
    }
    out.into_bytes()
}
