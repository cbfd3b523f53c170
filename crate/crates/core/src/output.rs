//! Persistence and plotting: CSV interchange, JSON documents that
//! round-trip, and static SVG / ASCII renderings of the angular histograms.
//! Every emitter is a pure function of the record, so replays produce
//! byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::AnalysisReport;
use crate::error::{Error, Result};
use crate::model::{RunRecord, SCREEN_BINS};

/// One run on disk: the record plus, optionally, an analysis report
/// (absent from the JSON when `None`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunDocument {
    pub record: RunRecord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<AnalysisReport>,
}

/// CSV rendering: header `angle_deg,slit1,slit2,total`, one row per bin
/// left edge -90..89, newline-terminated.
pub fn csv_string(record: &RunRecord) -> String {
    let mut out = String::with_capacity(16 * (SCREEN_BINS + 1));
    out.push_str("angle_deg,slit1,slit2,total\n");
    for bin in -90..=89 {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            bin,
            record.slit1.count(bin),
            record.slit2.count(bin),
            record.total.count(bin)
        );
    }
    out
}

pub fn write_csv(record: &RunRecord, path: &Path) -> Result<()> {
    fs::write(path, csv_string(record))?;
    Ok(())
}

pub fn json_string(record: &RunRecord, report: Option<&AnalysisReport>) -> Result<String> {
    let doc = RunDocument { record: record.clone(), report: report.copied() };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

pub fn write_json(record: &RunRecord, report: Option<&AnalysisReport>, path: &Path) -> Result<()> {
    fs::write(path, json_string(record, report)?)?;
    Ok(())
}

/// Reads a document back and re-checks the record's structural invariants,
/// so a hand-edited or truncated file fails loudly instead of skewing
/// analysis downstream.
pub fn read_json(path: &Path) -> Result<RunDocument> {
    let doc: RunDocument = serde_json::from_str(&fs::read_to_string(path)?)?;
    if !doc.record.invariants_ok() {
        return Err(Error::Domain(format!(
            "record in {} violates structural invariants",
            path.display()
        )));
    }
    Ok(doc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotFormat {
    Svg,
    Ascii,
}

pub fn render_plot(record: &RunRecord, path: &Path, format: PlotFormat) -> Result<()> {
    let text = match format {
        PlotFormat::Svg => svg_string(record),
        PlotFormat::Ascii => ascii_string(record),
    };
    fs::write(path, text)?;
    Ok(())
}

// SVG geometry: fixed canvas, all three series share one count scale so
// their relative heights are comparable.
const SVG_W: f64 = 900.0;
const SVG_H: f64 = 480.0;
const ML: f64 = 60.0; // left margin
const MR: f64 = 20.0;
const MT: f64 = 20.0;
const MB: f64 = 40.0;

fn x_pos(angle_deg: f64) -> f64 {
    ML + (angle_deg + 90.0) / 180.0 * (SVG_W - ML - MR)
}

fn y_pos(count: u64, max: u64) -> f64 {
    let floor = SVG_H - MB;
    floor - count as f64 / max as f64 * (floor - MT)
}

fn polyline(out: &mut String, class: &str, color: &str, counts: &[u64], max: u64) {
    let _ = write!(out, r#"  <polyline class="{class}" fill="none" stroke="{color}" stroke-width="1.5" points=""#);
    for (i, &c) in counts.iter().enumerate() {
        let center = i as f64 - 90.0 + 0.5;
        let _ = write!(out, "{:.2},{:.2} ", x_pos(center), y_pos(c, max));
    }
    out.pop(); // trailing space
    out.push_str("\"/>\n");
}

/// Three overlaid count-vs-angle polylines with a labeled degree axis and
/// a legend.
pub fn svg_string(record: &RunRecord) -> String {
    let max = record
        .total
        .counts()
        .iter()
        .chain(record.slit1.counts())
        .chain(record.slit2.counts())
        .copied()
        .max()
        .unwrap_or(0)
        .max(1);
    let floor = SVG_H - MB;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W}" height="{SVG_H}" viewBox="0 0 {SVG_W} {SVG_H}">"#
    );
    let _ = writeln!(
        out,
        "  <desc>context={} seed={} particles={}</desc>",
        record.context, record.seed, record.n_emitted
    );
    let _ = writeln!(out, r#"  <rect width="{SVG_W}" height="{SVG_H}" fill="white"/>"#);

    // axes
    let _ = writeln!(
        out,
        r#"  <line x1="{ML}" y1="{MT}" x2="{ML}" y2="{floor}" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        out,
        r#"  <line x1="{ML}" y1="{floor}" x2="{:.2}" y2="{floor}" stroke="black" stroke-width="1"/>"#,
        SVG_W - MR
    );
    for deg in (-90..=90).step_by(30) {
        let x = x_pos(deg as f64);
        let _ = writeln!(
            out,
            r#"  <line x1="{x:.2}" y1="{floor}" x2="{x:.2}" y2="{:.2}" stroke="black" stroke-width="1"/>"#,
            floor + 6.0
        );
        let _ = writeln!(
            out,
            r#"  <text x="{x:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="middle">{deg}</text>"#,
            floor + 20.0
        );
    }
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="middle">angle (deg)</text>"#,
        x_pos(0.0),
        floor + 34.0
    );
    // count scale: top-of-axis label
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="end">{max}</text>"#,
        ML - 6.0,
        MT + 4.0
    );
    let _ = writeln!(
        out,
        r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12" text-anchor="end">0</text>"#,
        ML - 6.0,
        floor + 4.0
    );

    polyline(&mut out, "slit1", "#2a9d3f", record.slit1.counts(), max);
    polyline(&mut out, "slit2", "#d62828", record.slit2.counts(), max);
    polyline(&mut out, "total", "#1d4ed8", record.total.counts(), max);

    // legend
    for (i, (label, color)) in [("slit1", "#2a9d3f"), ("slit2", "#d62828"), ("total", "#1d4ed8")]
        .into_iter()
        .enumerate()
    {
        let y = MT + 14.0 + i as f64 * 16.0;
        let _ = writeln!(
            out,
            r#"  <line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            SVG_W - MR - 120.0,
            SVG_W - MR - 96.0
        );
        let _ = writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-family="monospace" font-size="12">{label}</text>"#,
            SVG_W - MR - 90.0,
            y + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}

const ASCII_RAMP: &[u8] = b" .:-=+*#%@";

fn ascii_strip(out: &mut String, label: &str, counts: &[u64]) {
    let max = counts.iter().copied().max().unwrap_or(0);
    let _ = writeln!(out, "{label} (max {max})");
    let mut strip = String::with_capacity(SCREEN_BINS);
    let scale = max.max(1);
    for &c in counts {
        // ceiling-scale to the ramp so nonzero counts stay visibly nonzero
        let idx = (c * (ASCII_RAMP.len() as u64 - 1)).div_ceil(scale) as usize;
        strip.push(ASCII_RAMP[idx] as char);
    }
    out.push_str(&strip);
    out.push('\n');
}

/// Three stacked 180-column density strips (one character per degree bin)
/// plus a degree ruler.
pub fn ascii_string(record: &RunRecord) -> String {
    let mut out = String::new();
    ascii_strip(&mut out, "slit1", record.slit1.counts());
    ascii_strip(&mut out, "slit2", record.slit2.counts());
    ascii_strip(&mut out, "total", record.total.counts());
    // ruler: a tick every 30 degrees, labels underneath
    let mut ruler = String::with_capacity(SCREEN_BINS);
    for col in 0..SCREEN_BINS {
        ruler.push(if col % 30 == 0 { '+' } else { '-' });
    }
    out.push_str(&ruler);
    out.push('\n');
    let mut labels = vec![b' '; SCREEN_BINS];
    for deg in (-90..90).step_by(30) {
        let col = (deg + 90) as usize;
        for (i, b) in deg.to_string().bytes().enumerate() {
            if col + i < labels.len() {
                labels[col + i] = b;
            }
        }
    }
    out.push_str(std::str::from_utf8(&labels).expect("ascii labels"));
    out.push('\n');
    out
}
