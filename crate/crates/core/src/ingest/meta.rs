use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const UNKNOWN_LANGUAGE: &str = "unknown";

/// Per-meeting annotation: grouping, week ordinal, language order and an
/// optional manual changeover time overriding the midpoint rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeetingMeta {
    pub meeting_id: String,
    pub group_id: String,
    pub week_index: u32,
    pub participants: Option<Vec<String>>,
    pub first_half_language: String,
    pub second_half_language: String,
    pub recorded_duration_s: Option<f64>,
    pub changeover_s: Option<f64>,
    pub media_url: Option<String>,
}

const FIELDS: &[&str] = &[
    "meeting_id",
    "group_id",
    "week_index",
    "participants",
    "first_half_language",
    "second_half_language",
    "recorded_duration_s",
    "changeover_s",
    "media_url",
];

impl MeetingMeta {
    /// Metadata with every optional field at its default. The group defaults
    /// to the meeting itself.
    pub fn new(meeting_id: impl Into<String>) -> Self {
        let meeting_id = meeting_id.into();
        MeetingMeta {
            group_id: meeting_id.clone(),
            meeting_id,
            week_index: 1,
            participants: None,
            first_half_language: UNKNOWN_LANGUAGE.into(),
            second_half_language: UNKNOWN_LANGUAGE.into(),
            recorded_duration_s: None,
            changeover_s: None,
            media_url: None,
        }
    }

    /// Loads a JSON sidecar document. Unknown keys are rejected so that a
    /// misspelt `changeover_s` cannot silently fall back to the midpoint.
    pub fn from_json(doc: &Value) -> Result<Self> {
        let obj = doc
            .as_object()
            .ok_or_else(|| Error::BadMeta("metadata must be a JSON object".into()))?;
        if let Some(key) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(Error::BadMeta(format!("unknown field `{key}`")));
        }
        let mut meta = MeetingMeta::new(json_string(obj, "meeting_id")?.ok_or_else(|| {
            Error::BadMeta("missing field `meeting_id`".into())
        })?);
        if let Some(group) = json_string(obj, "group_id")? {
            meta.group_id = group;
        }
        if let Some(v) = present(obj, "week_index") {
            meta.week_index = v
                .as_u64()
                .and_then(|w| u32::try_from(w).ok())
                .ok_or_else(|| ill_typed("week_index", "a positive integer"))?;
        }
        if let Some(v) = present(obj, "participants") {
            let list = v
                .as_array()
                .ok_or_else(|| ill_typed("participants", "an array of names"))?;
            let names = list
                .iter()
                .map(|n| n.as_str().map(|s| s.trim().to_string()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| ill_typed("participants", "an array of names"))?;
            meta.participants = Some(names);
        }
        if let Some(lang) = json_string(obj, "first_half_language")? {
            meta.first_half_language = lang;
        }
        if let Some(lang) = json_string(obj, "second_half_language")? {
            meta.second_half_language = lang;
        }
        meta.recorded_duration_s = json_seconds(obj, "recorded_duration_s")?;
        meta.changeover_s = json_seconds(obj, "changeover_s")?;
        meta.media_url = json_string(obj, "media_url")?;
        meta.validate()?;
        Ok(meta)
    }

    /// Builds metadata from textual (column, value) pairs, as found in a
    /// manifest row. Empty values count as absent.
    pub fn from_fields<'a>(fields: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self> {
        let mut obj = Map::new();
        for (key, raw) in fields {
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let value = match key {
                "week_index" => Value::from(
                    raw.parse::<u64>()
                        .map_err(|_| ill_typed("week_index", "a positive integer"))?,
                ),
                "recorded_duration_s" | "changeover_s" => {
                    let secs: f64 = raw
                        .parse()
                        .map_err(|_| ill_typed(key, "a positive number of seconds"))?;
                    serde_json::Number::from_f64(secs)
                        .map(Value::Number)
                        .ok_or_else(|| ill_typed(key, "a positive number of seconds"))?
                }
                "participants" => Value::from(
                    raw.split(';')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .collect::<Vec<_>>(),
                ),
                _ => Value::from(raw),
            };
            obj.insert(key.to_string(), value);
        }
        MeetingMeta::from_json(&Value::Object(obj))
    }

    pub fn validate(&self) -> Result<()> {
        if self.meeting_id.is_empty() {
            return Err(Error::BadMeta("`meeting_id` is empty".into()));
        }
        if self.week_index == 0 {
            return Err(ill_typed("week_index", "a positive integer"));
        }
        for (name, value) in [
            ("recorded_duration_s", self.recorded_duration_s),
            ("changeover_s", self.changeover_s),
        ] {
            if let Some(v) = value {
                if !(v.is_finite() && v > 0.0) {
                    return Err(ill_typed(name, "a positive number of seconds"));
                }
            }
        }
        if let (Some(change), Some(duration)) = (self.changeover_s, self.recorded_duration_s) {
            if change >= duration {
                return Err(Error::BadMeta(format!(
                    "changeover_s ({change}) must fall before recorded_duration_s ({duration})"
                )));
            }
        }
        for (name, lang) in [
            ("first_half_language", &self.first_half_language),
            ("second_half_language", &self.second_half_language),
        ] {
            if lang.is_empty() {
                return Err(Error::BadMeta(format!("`{name}` is empty")));
            }
        }
        if self.first_half_language == self.second_half_language
            && self.first_half_language != UNKNOWN_LANGUAGE
        {
            return Err(Error::BadMeta(format!(
                "both halves are labelled `{}`",
                self.first_half_language
            )));
        }
        Ok(())
    }
}

fn ill_typed(field: &str, expected: &str) -> Error {
    Error::BadMeta(format!("`{field}` must be {expected}"))
}

fn present<'a>(obj: &'a Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).filter(|v| !v.is_null())
}

fn json_string(obj: &Map<String, Value>, key: &str) -> Result<Option<String>> {
    present(obj, key)
        .map(|v| {
            v.as_str()
                .map(|s| s.trim().to_string())
                .ok_or_else(|| ill_typed(key, "a string"))
        })
        .transpose()
}

fn json_seconds(obj: &Map<String, Value>, key: &str) -> Result<Option<f64>> {
    present(obj, key)
        .map(|v| {
            v.as_f64()
                .filter(|s| s.is_finite() && *s > 0.0)
                .ok_or_else(|| ill_typed(key, "a positive number of seconds"))
        })
        .transpose()
}
