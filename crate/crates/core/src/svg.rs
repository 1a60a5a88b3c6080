//! Minimal SVG emitter: line plots with optional log axes, panels, and
//! triangle line drawings.

use std::fmt::Write;

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Default)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const W: f64 = 480.0;
const H: f64 = 360.0;
const MARGIN: f64 = 56.0;
const COLORS: &[&str] = &["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"];

fn fmt_num(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Plot { title: title.into(), x_label: x_label.into(), y_label: y_label.into(), ..Default::default() }
    }

    pub fn log_log(mut self) -> Self {
        self.log_x = true;
        self.log_y = true;
        self
    }

    pub fn with_series(mut self, name: &str, points: Vec<(f64, f64)>) -> Self {
        self.series.push(Series { name: name.into(), points });
        self
    }

    fn map(&self, p: (f64, f64)) -> Option<(f64, f64)> {
        let x = if self.log_x { (p.0 > 0.0).then(|| p.0.log10())? } else { p.0 };
        let y = if self.log_y { (p.1 > 0.0).then(|| p.1.log10())? } else { p.1 };
        (x.is_finite() && y.is_finite()).then_some((x, y))
    }

    /// `<g>` element of the plot translated by `(dx, dy)`.
    fn group(&self, dx: f64, dy: f64) -> String {
        let pts: Vec<(f64, f64)> = self.series.iter().flat_map(|s| s.points.iter().filter_map(|&p| self.map(p))).collect();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if pts.is_empty() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 - x0 < 1e-300 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        if y1 - y0 < 1e-300 {
            y0 -= 0.5;
            y1 += 0.5;
        }
        let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 1.5 * MARGIN);
        let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 1.6 * MARGIN);
        let mut s = String::new();
        let _ = writeln!(s, "<g transform=\"translate({dx},{dy})\" font-family=\"sans-serif\" font-size=\"11\">");
        let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
        let _ = writeln!(s, "<text x=\"{}\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">{}</text>", W / 2.0, escape(&self.title));
        let (ax0, ax1, ay0, ay1) = (sx(x0), sx(x1), sy(y0), sy(y1));
        let _ = writeln!(s, "<path d=\"M{ax0:.2},{ay1:.2} L{ax0:.2},{ay0:.2} L{ax1:.2},{ay0:.2}\" stroke=\"black\" fill=\"none\"/>");
        for k in 0..=4 {
            let t = k as f64 / 4.0;
            let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            let xl = if self.log_x { fmt_num(10f64.powf(xv)) } else { fmt_num(xv) };
            let yl = if self.log_y { fmt_num(10f64.powf(yv)) } else { fmt_num(yv) };
            let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{xl}</text>", sx(xv), ay0 + 16.0);
            let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{yl}</text>", ax0 - 4.0, sy(yv) + 4.0);
        }
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>", (ax0 + ax1) / 2.0, H - 10.0, escape(&self.x_label));
        let _ = writeln!(
            s,
            "<text x=\"14\" y=\"{:.2}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">{}</text>",
            (ay0 + ay1) / 2.0,
            (ay0 + ay1) / 2.0,
            escape(&self.y_label)
        );
        for (k, ser) in self.series.iter().enumerate() {
            let color = COLORS[k % COLORS.len()];
            let path: Vec<String> = ser
                .points
                .iter()
                .filter_map(|&p| self.map(p))
                .enumerate()
                .map(|(i, (x, y))| format!("{}{:.2},{:.2}", if i == 0 { "M" } else { "L" }, sx(x), sy(y)))
                .collect();
            if !path.is_empty() {
                let _ = writeln!(s, "<path d=\"{}\" stroke=\"{color}\" fill=\"none\" stroke-width=\"1.3\"/>", path.join(" "));
            }
            if self.series.len() <= 8 {
                let ly = 32.0 + 13.0 * k as f64;
                let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{ly:.2}\" fill=\"{color}\" text-anchor=\"end\">{}</text>", W - 8.0, escape(&ser.name));
            }
        }
        s.push_str("</g>\n");
        s
    }

    pub fn to_svg(&self) -> String {
        panels(std::slice::from_ref(self), 1)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Plots laid out on a grid with `columns` columns.
pub fn panels(plots: &[Plot], columns: usize) -> String {
    let columns = columns.max(1);
    let rows = plots.len().div_ceil(columns).max(1);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n",
        W * columns.min(plots.len().max(1)) as f64,
        H * rows as f64
    );
    for (k, p) in plots.iter().enumerate() {
        s.push_str(&p.group(W * (k % columns) as f64, H * (k / columns) as f64));
    }
    s.push_str("</svg>\n");
    s
}

/// Line drawing of triangles; `highlight[i]` selects the second colour.
pub fn triangles(tris: &[[[f64; 2]; 3]], highlight: &[bool], size: f64) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for t in tris {
        for v in t {
            x0 = x0.min(v[0]);
            x1 = x1.max(v[0]);
            y0 = y0.min(v[1]);
            y1 = y1.max(v[1]);
        }
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-300);
    let m = |v: [f64; 2]| ((v[0] - x0) / span * size, (y1 - v[1]) / span * size);
    let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    for (k, t) in tris.iter().enumerate() {
        let [a, b, c] = t.map(m);
        let color = if highlight.get(k).copied().unwrap_or(false) { "#d62728" } else { "#555555" };
        let _ = writeln!(
            s,
            "<path d=\"M{:.3},{:.3} L{:.3},{:.3} L{:.3},{:.3} Z\" stroke=\"{color}\" fill=\"none\" stroke-width=\"0.3\"/>",
            a.0, a.1, b.0, b.1, c.0, c.1
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_is_well_formed() {
        let p = Plot::new("a < b", "x", "y").log_log().with_series("s", vec![(1.0, 1.0), (10.0, 0.1), (0.0, 1.0)]);
        let s = p.to_svg();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
        assert_eq!(s.matches("<path").count(), 2);
    }
}
