//! Self-contained review page: the report JSON, styles and viewer script are
//! all inlined, so the page works offline. Only the media URL (if any) points
//! elsewhere.
//!
//! Page contract for viewer bundles:
//! - `<script id="meeting-report" type="application/json">` holds the report;
//! - `<video id="media">` is present, with a `src` when the report has a media URL;
//! - the elements `title`, `segments`, `timeline`, `volatility`, `participation`,
//!   `transitions`, `turn-text` and `notice` exist in the body.

use super::{to_canonical_json, MeetingReport};

pub const VIEWER_FALLBACK_JS: &str = include_str!("../../assets/viewer.js");
const VIEWER_CSS: &str = include_str!("../../assets/viewer.css");

/// Keeps embedded text from closing its `<script>` element early.
fn escape_script(text: &str) -> String {
    text.replace("</", "<\\/")
}

fn escape_json_for_html(json: &str) -> String {
    json.replace('<', "\\u003c")
        .replace('>', "\\u003e")
        .replace('&', "\\u0026")
}

fn escape_attr(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('"', "&quot;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders the review page. `viewer_bundle` replaces the built-in script.
pub fn render_html(report: &MeetingReport, viewer_bundle: Option<&str>) -> String {
    let data = escape_json_for_html(&to_canonical_json(report));
    let script = escape_script(viewer_bundle.unwrap_or(VIEWER_FALLBACK_JS));
    let media = match &report.meeting.media_url {
        Some(url) => format!(
            "<video id=\"media\" controls preload=\"metadata\" src=\"{}\"></video>",
            escape_attr(url)
        ),
        None => "<video id=\"media\" controls></video>".to_string(),
    };
    let title = escape_attr(&report.meeting.meeting_id);
    format!(
        r#"<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>{title}</title>
<style>
{VIEWER_CSS}</style>
</head>
<body>
<h1 id="title"></h1>
<div id="notice"></div>
<div class="row">
<div class="panel"><h2>Recording</h2>{media}<div id="turn-text"></div></div>
<div class="panel"><h2>Conversational volatility</h2><div id="volatility"></div></div>
</div>
<div class="panel"><h2>Timeline</h2><div class="seg-buttons" id="segments"></div><div id="timeline"></div></div>
<div class="row">
<div class="panel"><h2>Participation</h2><div id="participation"></div></div>
<div class="panel"><h2>Who followed whom</h2><div id="transitions"></div></div>
</div>
<script id="meeting-report" type="application/json">
{data}</script>
<script>
{script}</script>
</body>
</html>
"#
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escaping() {
        assert_eq!(escape_script("a</script>b"), "a<\\/script>b");
        assert_eq!(escape_json_for_html("\"</script>&\""), "\"\\u003c/script\\u003e\\u0026\"");
        assert_eq!(escape_attr("a\"b&c"), "a&quot;b&amp;c");
    }
}
