//! Conversational volatility: historical volatility applied to turn taking.
//!
//! The series is the sequence of turn (or utterance) durations. Its
//! log-returns `ln(d[i+1] / d[i])` are summarized by their sample standard
//! deviation, then multiplied by `sqrt(points / minutes)` so that a busier
//! exchange over the same stretch of time scores higher.

use serde::{Deserialize, Serialize};

use crate::conversation::Segment;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DurationMode {
    /// Turn length is first start to last end.
    Span,
    /// Turn length is the sum of its utterance durations.
    Summed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesUnit {
    Turns,
    Utterances,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateScaleMode {
    PerMinute,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolatilityConfig {
    pub duration_mode: DurationMode,
    pub series_unit: SeriesUnit,
    pub rate_scale_mode: RateScaleMode,
    /// Shortest series for which volatility is defined (at least 3).
    pub min_points: usize,
}

impl Default for VolatilityConfig {
    fn default() -> Self {
        VolatilityConfig {
            duration_mode: DurationMode::Span,
            series_unit: SeriesUnit::Turns,
            rate_scale_mode: RateScaleMode::PerMinute,
            min_points: 3,
        }
    }
}

impl VolatilityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_points < 3 {
            return Err(Error::BadConfig(format!(
                "min_points must be at least 3, got {}",
                self.min_points
            )));
        }
        Ok(())
    }
}

/// Volatility of one series. When fewer than `min_points` durations are
/// available the result is undefined and every measure is `None`, which is
/// distinct from a perfectly flat (zero) series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VolatilityResult {
    pub n_points: usize,
    pub raw_sigma: Option<f64>,
    pub rate_scale: Option<f64>,
    pub volatility: Option<f64>,
    pub defined: bool,
}

impl VolatilityResult {
    fn undefined(n_points: usize) -> Self {
        VolatilityResult {
            n_points,
            raw_sigma: None,
            rate_scale: None,
            volatility: None,
            defined: false,
        }
    }
}

/// `ln(d[i+1] / d[i])` for consecutive durations.
pub fn log_returns(durations: &[f64]) -> Result<Vec<f64>> {
    if durations.len() < 2 {
        return Err(Error::TooShort(durations.len()));
    }
    if let Some((index, &value)) = durations
        .iter()
        .enumerate()
        .find(|(_, d)| !(d.is_finite() && **d > 0.0))
    {
        return Err(Error::NonpositiveDuration { index, value });
    }
    Ok(durations.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

/// Sample (n - 1) standard deviation via Welford's update, which keeps a
/// constant series at exactly zero.
pub(crate) fn sample_std(values: &[f64]) -> Option<f64> {
    if values.len() < 2 {
        return None;
    }
    let (mut mean, mut m2) = (0.0, 0.0);
    for (k, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (x - mean);
    }
    Some((m2 / (values.len() - 1) as f64).max(0.0).sqrt())
}

/// Volatility of an explicit duration series observed over `span_s` seconds.
pub fn series_volatility(
    durations: &[f64],
    span_s: f64,
    config: &VolatilityConfig,
) -> Result<VolatilityResult> {
    let n = durations.len();
    if n < config.min_points.max(3) {
        return Ok(VolatilityResult::undefined(n));
    }
    let returns = log_returns(durations)?;
    let raw_sigma = sample_std(&returns).expect("at least two returns");
    let rate_scale = match config.rate_scale_mode {
        RateScaleMode::PerMinute => {
            let minutes = span_s / 60.0;
            if !(minutes.is_finite() && minutes > 0.0) {
                return Err(Error::BadConfig(format!(
                    "segment span must be positive for per-minute scaling, got {span_s} s"
                )));
            }
            (n as f64 / minutes).sqrt()
        }
        RateScaleMode::None => 1.0,
    };
    Ok(VolatilityResult {
        n_points: n,
        raw_sigma: Some(raw_sigma),
        rate_scale: Some(rate_scale),
        volatility: Some(raw_sigma * rate_scale),
        defined: true,
    })
}

/// The duration series a segment contributes, optionally restricted to
/// one speaker's turns.
pub fn duration_series(
    segment: &Segment,
    speaker: Option<&str>,
    config: &VolatilityConfig,
) -> Vec<f64> {
    let turns = segment
        .turns
        .iter()
        .filter(|t| speaker.is_none_or(|s| t.speaker_id == s));
    match (config.series_unit, config.duration_mode) {
        (SeriesUnit::Utterances, _) => turns
            .flat_map(|t| t.utterance_durations.iter().copied())
            .collect(),
        (SeriesUnit::Turns, DurationMode::Span) => turns.map(|t| t.duration_s).collect(),
        (SeriesUnit::Turns, DurationMode::Summed) => turns.map(|t| t.spoken_s()).collect(),
    }
}

pub fn volatility(segment: &Segment, config: &VolatilityConfig) -> VolatilityResult {
    let series = duration_series(segment, None, config);
    // Turn durations are positive by construction and a segment holding
    // three or more turns has a positive span, so this cannot fail.
    series_volatility(&series, segment.span_s(), config)
        .unwrap_or(VolatilityResult::undefined(series.len()))
}

/// Volatility of one participant's turns, still scaled by the full segment
/// span, so that fewer turns yield a smaller rate factor.
pub fn participant_volatility(
    segment: &Segment,
    speaker: &str,
    config: &VolatilityConfig,
) -> VolatilityResult {
    let series = duration_series(segment, Some(speaker), config);
    series_volatility(&series, segment.span_s(), config)
        .unwrap_or(VolatilityResult::undefined(series.len()))
}
