mod common;

use std::fs;

use turnvol::cohort::{
    analyze_corpus, corpus_stats, group_language_averages, group_language_averages_with,
    load_manifest, participant_language_averages, week_progression, Weighting,
};
use turnvol::report::{analyze_transcript, q6, AnalysisConfig, MeetingReport};

fn reports(meetings: &[common::SyntheticMeeting]) -> Vec<MeetingReport> {
    meetings
        .iter()
        .map(|m| analyze_transcript(m.vtt.as_bytes(), &m.meta, &AnalysisConfig::default()).unwrap())
        .collect()
}

#[test]
fn segment_volatility_hits_construction_targets() {
    let corpus = common::study_corpus(11);
    for (m, r) in corpus.iter().zip(reports(&corpus)) {
        for (seg, target) in r.segments.iter().zip(m.targets) {
            let got = seg.volatility.volatility.unwrap();
            assert!((got - target.unwrap()).abs() <= 5e-7, "{} {}", m.meta.meeting_id, seg.label);
            assert_eq!(got, q6(target.unwrap()));
        }
    }
}

#[test]
fn group_means_match_hand_means() {
    let corpus = common::study_corpus(12);
    let summaries = group_language_averages(&reports(&corpus), "fr");
    assert_eq!(summaries.len(), 8);
    for s in &summaries {
        for lang in ["en", "fr"] {
            let vals: Vec<f64> = corpus
                .iter()
                .filter(|m| m.meta.group_id == s.group_id)
                .map(|m| q6(m.target_for(lang).unwrap()))
                .collect();
            let want = vals.iter().sum::<f64>() / vals.len() as f64;
            assert!((s.mean(lang).unwrap() - want).abs() < 1e-9);
        }
    }
    for w in summaries.windows(2) {
        assert!(w[0].mean("fr") <= w[1].mean("fr"));
    }
}

#[test]
fn duration_weighting_uses_spans() {
    let corpus = common::study_corpus(13);
    let rs = reports(&corpus);
    let weighted = group_language_averages_with(&rs, "en", Weighting::Duration);
    let g = &weighted[0];
    let (mut num, mut den) = (0.0, 0.0);
    for r in rs.iter().filter(|r| r.meeting.group_id == g.group_id) {
        let seg = r.segments.iter().find(|s| s.label.is_half() && s.language == "en").unwrap();
        num += seg.volatility.volatility.unwrap() * seg.span_s();
        den += seg.span_s();
    }
    assert!((g.mean("en").unwrap() - num / den).abs() < 1e-9);
}

#[test]
fn participant_rows_per_speaker() {
    let corpus = common::study_corpus(14);
    let rows = participant_language_averages(&reports(&corpus), "fr", Weighting::Unweighted);
    assert_eq!(rows.len(), 8 * 3);
    assert!(rows.iter().all(|r| r.speaker_id.is_some()));
}

#[test]
fn undefined_halves_are_skipped_not_zero() {
    let vtt = "WEBVTT\n\n00:00.000 --> 00:10.000\nA: one\n\n00:10.000 --> 00:20.000\nB: two\n";
    let mut meta = turnvol::MeetingMeta::new("tiny");
    meta.first_half_language = "fr".into();
    meta.second_half_language = "en".into();
    let r = analyze_transcript(vtt.as_bytes(), &meta, &AnalysisConfig::default()).unwrap();
    let s = &group_language_averages(&[r], "fr")[0];
    for c in &s.cells {
        assert_eq!(c.mean_volatility, None);
        assert_eq!(c.segment_count, 0);
    }
}

#[test]
fn week_slope_matches_hand_fit() {
    let corpus = common::study_corpus(15);
    let rs = reports(&corpus);
    let series = week_progression(&rs, "fr");
    let means: Vec<(f64, f64)> = (1..=5)
        .map(|w| {
            let vals: Vec<f64> = corpus
                .iter()
                .filter(|m| m.meta.week_index == w)
                .map(|m| q6(m.target_for("fr").unwrap()))
                .collect();
            (w as f64, vals.iter().sum::<f64>() / vals.len() as f64)
        })
        .collect();
    let mx = 3.0;
    let my = means.iter().map(|p| p.1).sum::<f64>() / 5.0;
    let slope = means.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / means.iter().map(|(x, _)| (x - mx) * (x - mx)).sum::<f64>();
    assert!((series.slope.unwrap() - slope).abs() < 1e-9);
    assert_eq!(series.means.len(), 5);
    assert!(series.means.iter().all(|m| m.group_count == 8));
}

#[test]
fn corpus_stats_by_hand() {
    let corpus = common::study_corpus(16);
    let rs = reports(&corpus);
    let stats = corpus_stats(&rs, Some(("fr", "en")));
    assert_eq!(stats.meeting_count, 40);
    let d: Vec<f64> = rs.iter().map(|r| r.duration_s).collect();
    let mean = d.iter().sum::<f64>() / 40.0;
    let sd = (d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 39.0).sqrt();
    assert!((stats.mean_duration_s.unwrap() - mean).abs() < 1e-9);
    assert!((stats.sd_duration_s.unwrap() - sd).abs() < 1e-9);
    assert_eq!(stats.first_half_language_counts, vec![("en".into(), 16), ("fr".into(), 24)]);
    let c = stats.comparison.unwrap();
    let higher_fr = corpus
        .iter()
        .filter(|m| q6(m.target_for("fr").unwrap()) > q6(m.target_for("en").unwrap()))
        .count();
    assert_eq!((c.compared, c.higher_a), (40, higher_fr));
    assert_eq!(c.higher_a + c.higher_b + c.equal, 40);
}

#[test]
fn corpus_collects_failures_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = common::study_corpus(17);
    let manifest_path = common::write_corpus(dir.path(), &corpus[..4]);
    fs::write(dir.path().join("vtt/g0w2.vtt"), "not a transcript").unwrap();
    fs::remove_file(dir.path().join("vtt/g0w3.vtt")).unwrap();
    let manifest = load_manifest(&fs::read(&manifest_path).unwrap()).unwrap();
    let out = analyze_corpus(&manifest, dir.path(), &AnalysisConfig::default(), 3).unwrap();
    let ok: Vec<_> = out.reports.iter().map(|r| r.meeting.meeting_id.as_str()).collect();
    assert_eq!(ok, ["g0w1", "g0w4"]);
    let codes: Vec<_> = out.errors.iter().map(|e| (e.meeting_id.as_str(), e.code.as_str())).collect();
    assert_eq!(codes, [("g0w2", "NOT_VTT"), ("g0w3", "NOT_FOUND")]);
}

#[test]
fn zero_workers_is_a_config_error() {
    let manifest = load_manifest(b"path,meeting_id,group_id,week_index\na.vtt,a,g,1\n").unwrap();
    let err = analyze_corpus(&manifest, std::path::Path::new("."), &AnalysisConfig::default(), 0);
    assert_eq!(err.unwrap_err().code(), "BAD_CONFIG");
}
