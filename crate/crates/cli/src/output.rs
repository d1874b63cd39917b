//! Output plumbing: CSV tables with the run configuration and a content
//! hash embedded as leading comment lines, and directly written SVG plots.

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::config::RunConfig;

/// CSV layout: '#'-prefixed config lines, a content hash of the data
/// section, then a one-line header and the data rows (RFC-4180 fields,
/// '.' decimal separator, UTF-8, '\n' line ends). The hash covers header
/// and rows, so byte-identical numeric columns imply an identical hash.
pub fn write_csv(
    path: &Path,
    config: &RunConfig,
    header: &str,
    rows: &[String],
) -> Result<(), String> {
    let mut data = String::with_capacity(rows.len() * 32 + header.len() + 1);
    data.push_str(header);
    data.push('\n');
    for row in rows {
        data.push_str(row);
        data.push('\n');
    }
    let digest = Sha256::digest(data.as_bytes());
    let mut file = std::fs::File::create(path)
        .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
    let mut out = String::new();
    for line in config.header_lines() {
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&format!("# content-sha256 = {digest:x}\n"));
    out.push_str(&data);
    file.write_all(out.as_bytes())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

const SVG_W: f64 = 800.0;
const SVG_H: f64 = 500.0;
const MARGIN: f64 = 60.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn from_points<'a>(sets: impl Iterator<Item = &'a (f64, f64)>) -> Self {
        let mut f = Frame {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for &(x, y) in sets {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        let pad = |lo: &mut f64, hi: &mut f64| {
            let span = (*hi - *lo).max(1e-12);
            *lo -= 0.05 * span;
            *hi += 0.05 * span;
        };
        pad(&mut f.x0, &mut f.x1);
        pad(&mut f.y0, &mut f.y1);
        f
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let px = MARGIN + (x - self.x0) / (self.x1 - self.x0) * (SVG_W - 2.0 * MARGIN);
        let py = SVG_H - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (SVG_H - 2.0 * MARGIN);
        (px, py)
    }
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" \
         viewBox=\"0 0 {SVG_W} {SVG_H}\">\n<title>{title}</title>\n\
         <rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>\n"
    )
}

fn svg_axes(frame: &Frame, s: &mut String) {
    let (ax0, ay0) = (MARGIN, SVG_H - MARGIN);
    let (ax1, ay1) = (SVG_W - MARGIN, MARGIN);
    s.push_str(&format!(
        "<line x1=\"{ax0}\" y1=\"{ay0}\" x2=\"{ax1}\" y2=\"{ay0}\" stroke=\"black\"/>\n\
         <line x1=\"{ax0}\" y1=\"{ay0}\" x2=\"{ax0}\" y2=\"{ay1}\" stroke=\"black\"/>\n"
    ));
    // Zero line when the y-range crosses zero.
    if frame.y0 < 0.0 && frame.y1 > 0.0 {
        let (_, py) = frame.map(frame.x0, 0.0);
        s.push_str(&format!(
            "<line x1=\"{ax0}\" y1=\"{py}\" x2=\"{ax1}\" y2=\"{py}\" stroke=\"#bbbbbb\" \
             stroke-dasharray=\"3,3\"/>\n"
        ));
    }
    s.push_str(&format!(
        "<text x=\"{ax0}\" y=\"{}\" font-size=\"12\">{:.4}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{:.4}</text>\n\
         <text x=\"{}\" y=\"{}\" font-size=\"12\">{:.4}</text>\n\
         <text x=\"{ax0}\" y=\"{}\" font-size=\"12\">{:.4}</text>\n",
        ay0 + 16.0,
        frame.x0,
        ax1,
        ay0 + 16.0,
        frame.x1,
        ax0 - 50.0,
        ay0,
        frame.y0,
        ay1 - 6.0,
        frame.y1,
    ));
}

/// Polyline plot with an optional labeled vertical marker.
pub fn write_line_plot(
    path: &Path,
    title: &str,
    points: &[(f64, f64)],
    marker: Option<(f64, &str)>,
) -> Result<(), String> {
    let frame = Frame::from_points(points.iter());
    let mut s = svg_open(title);
    svg_axes(&frame, &mut s);
    let coords: Vec<String> = points
        .iter()
        .map(|&(x, y)| {
            let (px, py) = frame.map(x, y);
            format!("{px:.2},{py:.2}")
        })
        .collect();
    s.push_str(&format!(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n",
        coords.join(" ")
    ));
    if let Some((x, label)) = marker {
        let (px, _) = frame.map(x, 0.0);
        s.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"#d62728\" \
             stroke-dasharray=\"5,3\"/>\n<text x=\"{:.2}\" y=\"{}\" font-size=\"12\" \
             fill=\"#d62728\">{label}</text>\n",
            SVG_H - MARGIN,
            MARGIN,
            px + 4.0,
            MARGIN + 14.0,
        ));
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

/// Scatter overlay of labeled point sets (cycled colors).
pub fn write_scatter_plot(
    path: &Path,
    title: &str,
    sets: &[(&str, Vec<(f64, f64)>)],
) -> Result<(), String> {
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let frame = Frame::from_points(sets.iter().flat_map(|(_, pts)| pts.iter()));
    let mut s = svg_open(title);
    svg_axes(&frame, &mut s);
    for (i, (label, pts)) in sets.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        for &(x, y) in pts {
            let (px, py) = frame.map(x, y);
            s.push_str(&format!(
                "<circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"1.6\" fill=\"{color}\" \
                 fill-opacity=\"0.7\"/>\n"
            ));
        }
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{label}</text>\n",
            SVG_W - MARGIN - 120.0,
            MARGIN + 16.0 * (i + 1) as f64,
        ));
    }
    s.push_str("</svg>\n");
    std::fs::write(path, s).map_err(|e| format!("cannot write {}: {e}", path.display()))
}
