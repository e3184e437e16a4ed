// Minimal offline review page. Reads the embedded report and draws the
// utterance timeline, volatility bars, participation and transition tables.
// A richer viewer bundle can replace this file; it receives the same page.
(function () {
  "use strict";
  var PALETTE = ["#1f77b4", "#d62728", "#e6b800", "#2ca02c", "#9467bd",
                 "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"];
  var report = JSON.parse(document.getElementById("meeting-report").textContent);
  var media = document.getElementById("media");
  var state = { segment: "WHOLE", highlighted: null };
  var SVG = "http://www.w3.org/2000/svg";

  function color(speaker) {
    var i = report.speakers.indexOf(speaker);
    return PALETTE[(i < 0 ? report.speakers.length : i) % PALETTE.length];
  }
  function fixed(x, digits) { return x === null || x === undefined ? "n/a" : x.toFixed(digits); }
  function el(tag, attrs, text) {
    var node = tag.indexOf("svg:") === 0
      ? document.createElementNS(SVG, tag.slice(4)) : document.createElement(tag);
    for (var k in attrs || {}) node.setAttribute(k, attrs[k]);
    if (text !== undefined) node.textContent = text;
    return node;
  }
  function segment(label) {
    for (var i = 0; i < report.segments.length; i++)
      if (report.segments[i].label === label) return report.segments[i];
    return { label: label, turns: [], participation: [], transitions: { speakers: [], counts: [] } };
  }
  function hasMedia() { return media && media.currentSrc; }

  function onBarClick(turn, node) {
    var prev = document.querySelector(".bar.highlight");
    if (prev) prev.classList.remove("highlight");
    node.classList.add("highlight");
    var text = turn.utterance_indices.map(function (i) {
      var u = report.utterances.filter(function (x) { return x.index === i; })[0];
      return u ? u.text : "";
    }).join("\n");
    document.getElementById("turn-text").textContent = turn.speaker_id + ": " + text;
    if (hasMedia()) {
      media.currentTime = turn.start_s;
      var p = media.play();
      if (p && p.catch) p.catch(function () { notice("media could not start playing"); });
    }
  }
  function notice(msg) { document.getElementById("notice").textContent = msg; }

  function renderTimeline() {
    var box = document.getElementById("timeline");
    box.textContent = "";
    var lanes = report.speakers.length || 1, laneH = 22, width = 900, left = 110;
    var span = Math.max(report.duration_s, 1e-9);
    var svg = el("svg:svg", { width: width, height: lanes * laneH + 24 });
    report.speakers.forEach(function (s, i) {
      svg.appendChild(el("svg:text", { x: 0, y: i * laneH + 15, "font-size": 12 }, s));
    });
    var scale = function (t) { return left + (width - left - 10) * t / span; };
    segment(state.segment).turns.forEach(function (t) {
      var lane = Math.max(0, report.speakers.indexOf(t.speaker_id));
      var bar = el("svg:rect", {
        "class": "bar", x: scale(t.start_s), y: lane * laneH + 3,
        width: Math.max(1, scale(t.end_s) - scale(t.start_s)), height: laneH - 6,
        fill: color(t.speaker_id)
      });
      bar.appendChild(el("svg:title", {}, t.speaker_id + " " + fixed(t.start_s, 1) + "s, " + fixed(t.duration_s, 1) + "s"));
      bar.addEventListener("click", function () { onBarClick(t, bar); });
      svg.appendChild(bar);
    });
    var x = scale(report.split_s), y = lanes * laneH;
    svg.appendChild(el("svg:line", { x1: x, x2: x, y1: 0, y2: y, stroke: "#333", "stroke-dasharray": "4 3" }));
    svg.appendChild(el("svg:text", { x: x - 4, y: y + 16, "font-size": 11, "text-anchor": "end" },
      segment("FIRST_HALF").language));
    svg.appendChild(el("svg:text", { x: x + 4, y: y + 16, "font-size": 11 }, segment("SECOND_HALF").language));
    box.appendChild(svg);
  }

  function renderVolatility() {
    var box = document.getElementById("volatility");
    box.textContent = "";
    var values = report.segments.map(function (s) { return s.volatility.volatility; });
    var max = Math.max.apply(null, values.filter(function (v) { return v !== null; }).concat([1e-9]));
    var svg = el("svg:svg", { width: 260, height: 150 });
    report.segments.forEach(function (s, i) {
      var v = s.volatility.volatility, x = 20 + i * 80;
      if (v === null) {
        svg.appendChild(el("svg:text", { "class": "na", x: x + 10, y: 110, "font-size": 12 }, "n/a"));
      } else {
        var h = 100 * v / max;
        svg.appendChild(el("svg:rect", { x: x, y: 120 - h, width: 50, height: h, fill: "#4a78b5" }));
        svg.appendChild(el("svg:text", { x: x, y: 115 - h, "font-size": 11 }, fixed(v, 2)));
      }
      svg.appendChild(el("svg:text", { x: x, y: 136, "font-size": 10 }, s.label));
      svg.appendChild(el("svg:text", { x: x, y: 148, "font-size": 10 }, s.language));
    });
    box.appendChild(svg);
  }

  function table(head, rows) {
    var t = el("table"), tr = el("tr");
    head.forEach(function (h) { tr.appendChild(el("th", {}, h)); });
    t.appendChild(tr);
    rows.forEach(function (r) {
      var row = el("tr");
      r.forEach(function (c) { row.appendChild(el("td", {}, c)); });
      t.appendChild(row);
    });
    return t;
  }

  function renderTables() {
    var seg = segment(state.segment);
    var p = document.getElementById("participation");
    p.textContent = "";
    p.appendChild(table(["speaker", "%", "time (s)", "turns"], seg.participation.map(function (s) {
      return [s.speaker_id, fixed(s.participation_pct, 1), fixed(s.speaking_time_s, 1), String(s.turn_count)];
    })));
    var m = seg.transitions, tbox = document.getElementById("transitions");
    tbox.textContent = "";
    tbox.appendChild(table(["from \\ to"].concat(m.speakers), m.speakers.map(function (s, i) {
      return [s].concat(m.counts[i].map(String));
    })));
  }

  function render() { renderTimeline(); renderTables(); }

  document.getElementById("title").textContent =
    report.meeting.meeting_id + " (group " + report.meeting.group_id + ", week " + report.meeting.week_index + ")";
  var buttons = document.getElementById("segments");
  ["WHOLE", "FIRST_HALF", "SECOND_HALF"].forEach(function (label) {
    var b = el("button", {}, label);
    b.addEventListener("click", function () {
      state.segment = label;
      Array.prototype.forEach.call(buttons.children, function (c) { c.classList.remove("active"); });
      b.classList.add("active");
      render();
    });
    if (label === state.segment) b.classList.add("active");
    buttons.appendChild(b);
  });
  if (media) media.addEventListener("error", function () { notice("media failed to load"); });
  renderVolatility();
  render();
})();
