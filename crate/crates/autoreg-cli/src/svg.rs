//! Minimal deterministic SVG line charts.
//!
//! Fixed canvas, two axes with linear or logarithmic scales, polyline
//! series, and a legend. Output bytes depend only on the input data: all
//! coordinates are formatted with fixed precision and every collection is
//! emitted in a defined order.

use std::fmt::Write as _;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 540.0;
const MARGIN_LEFT: f64 = 74.0;
const MARGIN_RIGHT: f64 = 180.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 62.0;

/// Line colors cycled over series groups.
pub const PALETTE: [&str; 6] = [
    "#1f6fb2", "#d1495b", "#2e8b57", "#b68200", "#6a4fb3", "#2a9d8f",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy)]
struct AxisRange {
    lo: f64,
    hi: f64,
    scale: Scale,
}

impl AxisRange {
    /// Maps a data value to [0, 1] along the axis.
    fn unit(&self, v: f64) -> f64 {
        match self.scale {
            Scale::Linear => (v - self.lo) / (self.hi - self.lo),
            Scale::Log => (v.ln() - self.lo.ln()) / (self.hi.ln() - self.lo.ln()),
        }
    }
}

/// Pads a raw data range into a drawable axis range.
fn padded(lo: f64, hi: f64, scale: Scale) -> AxisRange {
    match scale {
        Scale::Linear => {
            let span = (hi - lo).abs();
            let pad = if span > 0.0 { 0.06 * span } else { 1.0 };
            AxisRange {
                lo: lo - pad,
                hi: hi + pad,
                scale,
            }
        }
        Scale::Log => {
            let lo = lo.max(f64::MIN_POSITIVE);
            let hi = hi.max(lo);
            let pad = if hi > lo { (hi / lo).powf(0.06) } else { 1.5 };
            AxisRange {
                lo: lo / pad,
                hi: hi * pad,
                scale,
            }
        }
    }
}

/// Shortest label for a tick or legend value: integers stay integers.
pub fn fmt_num(v: f64) -> String {
    if (v - v.round()).abs() < 1e-9 && v.abs() < 1e15 {
        format!("{}", v.round() as i64)
    } else {
        let rounded = (v * 1e9).round() / 1e9;
        format!("{rounded}")
    }
}

/// Tick positions and labels for a linear axis: steps of 1, 2, or 5 times a
/// power of ten, targeting about six ticks.
fn linear_ticks(r: &AxisRange) -> Vec<(f64, String)> {
    let span = r.hi - r.lo;
    let raw = span / 6.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 7.0)
        .unwrap_or(10.0 * mag);
    let first = (r.lo / step).ceil() * step;
    let mut out = Vec::new();
    let mut t = first;
    while t <= r.hi + 1e-9 * step {
        let v = if t.abs() < 1e-12 * step { 0.0 } else { t };
        out.push((v, fmt_num(v)));
        t += step;
    }
    out
}

/// Decade ticks for a log axis, thinned when the range spans many decades.
fn log_ticks(r: &AxisRange) -> Vec<(f64, String)> {
    let k_lo = r.lo.log10().ceil().clamp(-320.0, 320.0) as i32;
    let k_hi = r.hi.log10().floor().clamp(-320.0, 320.0) as i32;
    let span = (k_hi - k_lo).max(0);
    let step = 1 + span / 8;
    let mut out = Vec::new();
    let mut k = k_lo;
    while k <= k_hi {
        let v = 10f64.powi(k);
        let label = if (-3..=4).contains(&k) {
            fmt_num(v)
        } else {
            format!("1e{k}")
        };
        out.push((v, label));
        k += step;
    }
    out
}

pub struct Figure {
    title: String,
    x_label: String,
    y_label: String,
    x: AxisRange,
    y: AxisRange,
    x_ticks: Vec<(f64, String)>,
    y_ticks: Vec<(f64, String)>,
    body: String,
    legend: Vec<(String, String, bool)>,
}

impl Figure {
    /// Builds a figure over the given data ranges. Log axes require positive
    /// bounds.
    pub fn new(
        title: &str,
        x_label: &str,
        y_label: &str,
        x_scale: Scale,
        x_range: (f64, f64),
        y_scale: Scale,
        y_range: (f64, f64),
    ) -> Self {
        let x = padded(x_range.0, x_range.1, x_scale);
        let y = padded(y_range.0, y_range.1, y_scale);
        let x_ticks = match x_scale {
            Scale::Linear => linear_ticks(&x),
            Scale::Log => log_ticks(&x),
        };
        let y_ticks = match y_scale {
            Scale::Linear => linear_ticks(&y),
            Scale::Log => log_ticks(&y),
        };
        Self {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            x,
            y,
            x_ticks,
            y_ticks,
            body: String::new(),
            legend: Vec::new(),
        }
    }

    /// Replaces the automatic x ticks, e.g. with the exact sweep values.
    pub fn set_x_ticks(&mut self, ticks: Vec<(f64, String)>) {
        self.x_ticks = ticks;
    }

    fn px(&self, v: f64) -> f64 {
        MARGIN_LEFT + self.x.unit(v) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - self.y.unit(v) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    /// Adds a polyline through the points, skipping non-finite entries.
    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str, width: f64, opacity: f64, dashed: bool) {
        let coords: Vec<String> = pts
            .iter()
            .filter(|(x, y)| {
                x.is_finite()
                    && y.is_finite()
                    && (self.x.scale == Scale::Linear || *x > 0.0)
                    && (self.y.scale == Scale::Linear || *y > 0.0)
            })
            .filter_map(|&(x, y)| {
                let (px, py) = (self.px(x), self.py(y));
                (px.is_finite() && py.is_finite()).then(|| format!("{px:.2},{py:.2}"))
            })
            .collect();
        if coords.len() < 2 {
            // A single point still deserves a mark.
            if let Some(c) = coords.first() {
                let (x, y) = c.split_once(',').expect("formatted pair");
                writeln!(
                    self.body,
                    r#"<circle cx="{x}" cy="{y}" r="{:.2}" fill="{color}" fill-opacity="{opacity}"/>"#,
                    width.max(2.0)
                )
                .expect("string write");
            }
            return;
        }
        let dash = if dashed { r#" stroke-dasharray="7 4""# } else { "" };
        writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="{width:.2}" stroke-opacity="{opacity}" stroke-linejoin="round"{dash}/>"#,
            coords.join(" ")
        )
        .expect("string write");
    }

    /// Registers a legend entry.
    pub fn legend_entry(&mut self, label: &str, color: &str, dashed: bool) {
        self.legend
            .push((label.to_string(), color.to_string(), dashed));
    }

    /// Assembles the final document.
    pub fn render(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif">"#
        )
        .expect("string write");
        writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).expect("string write");

        let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
        let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);

        // Grid and ticks.
        for (v, label) in &self.x_ticks {
            if self.x.unit(*v) < -1e-9 || self.x.unit(*v) > 1.0 + 1e-9 {
                continue;
            }
            let px = self.px(*v);
            writeln!(
                s,
                r##"<line x1="{px:.2}" y1="{y0:.2}" x2="{px:.2}" y2="{y1:.2}" stroke="#e4e4e4" stroke-width="1"/>"##
            )
            .expect("string write");
            writeln!(
                s,
                r##"<text x="{px:.2}" y="{:.2}" text-anchor="middle" font-size="13" fill="#333">{label}</text>"##,
                y0 + 20.0
            )
            .expect("string write");
        }
        for (v, label) in &self.y_ticks {
            if self.y.unit(*v) < -1e-9 || self.y.unit(*v) > 1.0 + 1e-9 {
                continue;
            }
            let py = self.py(*v);
            writeln!(
                s,
                r##"<line x1="{x0:.2}" y1="{py:.2}" x2="{x1:.2}" y2="{py:.2}" stroke="#e4e4e4" stroke-width="1"/>"##
            )
            .expect("string write");
            writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="13" fill="#333">{label}</text>"##,
                x0 - 8.0,
                py + 4.5
            )
            .expect("string write");
        }

        // Series.
        s.push_str(&self.body);

        // Axes frame on top of the data.
        writeln!(
            s,
            r##"<rect x="{x0:.2}" y="{y1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444" stroke-width="1.5"/>"##,
            x1 - x0,
            y0 - y1
        )
        .expect("string write");

        // Labels and title.
        writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="15" fill="#111">{}</text>"##,
            0.5 * (x0 + x1),
            HEIGHT - 16.0,
            xml_escape(&self.x_label)
        )
        .expect("string write");
        writeln!(
            s,
            r##"<text x="20" y="{:.2}" text-anchor="middle" font-size="15" fill="#111" transform="rotate(-90 20 {:.2})">{}</text>"##,
            0.5 * (y0 + y1),
            0.5 * (y0 + y1),
            xml_escape(&self.y_label)
        )
        .expect("string write");
        writeln!(
            s,
            r##"<text x="{:.2}" y="28" text-anchor="middle" font-size="17" fill="#111">{}</text>"##,
            0.5 * (x0 + x1),
            xml_escape(&self.title)
        )
        .expect("string write");

        // Legend.
        let lx = WIDTH - MARGIN_RIGHT + 18.0;
        for (i, (label, color, dashed)) in self.legend.iter().enumerate() {
            let ly = MARGIN_TOP + 14.0 + 24.0 * i as f64;
            let dash = if *dashed { r#" stroke-dasharray="7 4""# } else { "" };
            writeln!(
                s,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2.5"{dash}/>"#,
                lx + 26.0
            )
            .expect("string write");
            writeln!(
                s,
                r##"<text x="{:.2}" y="{:.2}" font-size="13" fill="#333">{}</text>"##,
                lx + 33.0,
                ly + 4.5,
                xml_escape(label)
            )
            .expect("string write");
        }

        s.push_str("</svg>\n");
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
