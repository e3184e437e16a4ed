//! Cohort CSV tables. Column orders are fixed; reals use six decimals and
//! absent values are empty cells.
//!
//! | table            | columns                                                          |
//! |------------------|------------------------------------------------------------------|
//! | group-language   | rank, group_id, language, mean_volatility, segment_count         |
//! | participant      | rank, group_id, speaker_id, language, mean_volatility, segment_count |
//! | week             | kind, group_id, week_index, volatility, group_count              |
//! | corpus stats     | metric, value                                                    |
//!
//! In the week table `kind` is `group` (one group's value), `mean` (the
//! cross-group mean) or `slope` (least-squares trend of the means, in the
//! `volatility` column).

use super::aggregate::{CorpusStats, GroupLanguageSummary, WeekSeries};
use crate::report::{fmt6, fmt6_opt};

fn to_csv(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing memory")).expect("CSV of UTF-8 fields")
}

fn strings(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

pub fn group_language_csv(summaries: &[GroupLanguageSummary]) -> String {
    let participant = summaries.iter().any(|s| s.speaker_id.is_some());
    let mut head = vec!["rank", "group_id"];
    if participant {
        head.push("speaker_id");
    }
    head.extend(["language", "mean_volatility", "segment_count"]);
    let mut rows = vec![strings(&head)];
    for (rank, s) in summaries.iter().enumerate() {
        let mut lead = vec![(rank + 1).to_string(), s.group_id.clone()];
        if participant {
            lead.push(s.speaker_id.clone().unwrap_or_default());
        }
        if s.cells.is_empty() {
            rows.push([lead.clone(), vec![String::new(), String::new(), "0".into()]].concat());
        }
        for c in &s.cells {
            rows.push(
                [
                    lead.clone(),
                    vec![
                        c.language.clone(),
                        fmt6_opt(c.mean_volatility),
                        c.segment_count.to_string(),
                    ],
                ]
                .concat(),
            );
        }
    }
    to_csv(rows)
}

pub fn week_csv(series: &WeekSeries) -> String {
    let mut rows = vec![strings(&["kind", "group_id", "week_index", "volatility", "group_count"])];
    for g in &series.groups {
        for p in &g.points {
            rows.push(vec![
                "group".into(),
                g.group_id.clone(),
                p.week_index.to_string(),
                fmt6(p.volatility),
                String::new(),
            ]);
        }
    }
    for m in &series.means {
        rows.push(vec![
            "mean".into(),
            String::new(),
            m.week_index.to_string(),
            fmt6(m.mean_volatility),
            m.group_count.to_string(),
        ]);
    }
    rows.push(vec![
        "slope".into(),
        String::new(),
        String::new(),
        fmt6_opt(series.slope),
        String::new(),
    ]);
    to_csv(rows)
}

pub fn corpus_stats_csv(stats: &CorpusStats) -> String {
    let mut rows = vec![
        strings(&["metric", "value"]),
        vec!["meeting_count".into(), stats.meeting_count.to_string()],
        vec!["mean_duration_s".into(), fmt6_opt(stats.mean_duration_s)],
        vec!["sd_duration_s".into(), fmt6_opt(stats.sd_duration_s)],
    ];
    for (lang, n) in &stats.first_half_language_counts {
        rows.push(vec![format!("first_half_language:{lang}"), n.to_string()]);
    }
    if let Some(c) = &stats.comparison {
        rows.push(vec!["compared_meetings".into(), c.compared.to_string()]);
        rows.push(vec![format!("higher:{}", c.language_a), c.higher_a.to_string()]);
        rows.push(vec![format!("higher:{}", c.language_b), c.higher_b.to_string()]);
        rows.push(vec!["equal".into(), c.equal.to_string()]);
    }
    to_csv(rows)
}
