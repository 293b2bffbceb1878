//! Minimal self-contained SVG figures: a histogram layer plus line/marker
//! series over labeled axes. No external renderer is involved; the output
//! is deterministic for identical inputs, and every figure embeds the run
//! checksum in its `<metadata>` element so it can be traced back to the
//! manifest that produced it.

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 72.0;
const MARGIN_R: f64 = 24.0;
const MARGIN_T: f64 = 44.0;
const MARGIN_B: f64 = 58.0;

const BAR_FILL: &str = "#a6c8e4";
const BAR_STROKE: &str = "#5b8db8";
pub const SERIES_COLORS: [&str; 3] = ["#c23b3b", "#2a7d46", "#6a51a3"];

#[derive(Debug, Clone)]
pub struct Bar {
    pub x0: f64,
    pub x1: f64,
    pub height: f64,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub points: Vec<(f64, f64)>,
    /// Draw circle markers at the points in addition to the polyline.
    pub markers: bool,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub bars: Vec<Bar>,
    pub bar_label: Option<String>,
    pub series: Vec<Series>,
}

/// Round-number tick positions covering `[lo, hi]` on a 1-2-5 ladder.
fn nice_ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / target.max(1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let step = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    } * mag;
    let mut ticks = Vec::new();
    let mut t = (lo / step).ceil() * step;
    while t <= hi + 1e-9 * span {
        ticks.push(t);
        t += step;
    }
    ticks
}

/// Shortest stable decimal for tick labels: six decimals of precision, then
/// Rust's roundtrip formatting trims the rest.
fn fmt_num(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

fn data_ranges(fig: &Figure) -> ((f64, f64), (f64, f64)) {
    let mut x = (f64::INFINITY, f64::NEG_INFINITY);
    let mut y = (0.0f64, f64::NEG_INFINITY);
    for b in &fig.bars {
        x.0 = x.0.min(b.x0);
        x.1 = x.1.max(b.x1);
        y.1 = y.1.max(b.height);
    }
    for s in &fig.series {
        for &(px, py) in &s.points {
            if !px.is_finite() || !py.is_finite() {
                continue;
            }
            x.0 = x.0.min(px);
            x.1 = x.1.max(px);
            y.0 = y.0.min(py);
            y.1 = y.1.max(py);
        }
    }
    if !x.0.is_finite() || !x.1.is_finite() || x.0 >= x.1 {
        x = (0.0, 1.0);
    }
    if y.1 <= y.0 {
        y.1 = y.0 + 1.0;
    }
    y.1 += 0.06 * (y.1 - y.0);
    (x, y)
}

/// Renders the figure to a standalone SVG document string.
pub fn render(fig: &Figure, run_checksum: &str) -> String {
    let ((x_lo, x_hi), (y_lo, y_hi)) = data_ranges(fig);
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = move |v: f64| MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w;
    let sy = move |v: f64| MARGIN_T + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h;

    let mut s = String::with_capacity(16 * 1024);
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    s.push_str(&format!("<title>{}</title>\n", escape(&fig.title)));
    s.push_str(&format!("<metadata>run_checksum={run_checksum}</metadata>\n"));
    s.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>\n"
    ));

    // Gridlines and ticks.
    let x_ticks = nice_ticks(x_lo, x_hi, 8);
    let y_ticks = nice_ticks(y_lo, y_hi, 6);
    for &t in &y_ticks {
        let yy = sy(t);
        s.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{yy:.2}\" x2=\"{:.2}\" y2=\"{yy:.2}\" stroke=\"#e3e3e3\" stroke-width=\"1\"/>\n",
            MARGIN_L,
            MARGIN_L + plot_w
        ));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\" fill=\"#333333\">{}</text>\n",
            MARGIN_L - 8.0,
            yy + 4.0,
            fmt_num(t)
        ));
    }
    for &t in &x_ticks {
        let xx = sx(t);
        s.push_str(&format!(
            "<line x1=\"{xx:.2}\" y1=\"{:.2}\" x2=\"{xx:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
            MARGIN_T + plot_h,
            MARGIN_T + plot_h + 5.0
        ));
        s.push_str(&format!(
            "<text x=\"{xx:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" fill=\"#333333\">{}</text>\n",
            MARGIN_T + plot_h + 20.0,
            fmt_num(t)
        ));
    }

    // Histogram bars.
    for b in &fig.bars {
        if b.height <= 0.0 {
            continue;
        }
        let x = sx(b.x0);
        let w = (sx(b.x1) - x).max(0.5);
        let y = sy(b.height);
        let h = sy(0.0f64.max(y_lo)) - y;
        if h <= 0.0 {
            continue;
        }
        s.push_str(&format!(
            "<rect x=\"{x:.2}\" y=\"{y:.2}\" width=\"{w:.2}\" height=\"{h:.2}\" fill=\"{BAR_FILL}\" stroke=\"{BAR_STROKE}\" stroke-width=\"0.8\"/>\n"
        ));
    }

    // Line series; non-finite points split the polyline.
    for ser in &fig.series {
        let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
        for &(px, py) in &ser.points {
            if px.is_finite() && py.is_finite() {
                runs.last_mut().expect("nonempty").push((px, py));
            } else if !runs.last().expect("nonempty").is_empty() {
                runs.push(Vec::new());
            }
        }
        for run in &runs {
            if run.len() >= 2 {
                let pts: Vec<String> = run
                    .iter()
                    .map(|&(px, py)| format!("{:.2},{:.2}", sx(px), sy(py)))
                    .collect();
                s.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.8\"/>\n",
                    pts.join(" "),
                    ser.color
                ));
            }
            if ser.markers {
                for &(px, py) in run {
                    s.push_str(&format!(
                        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"{}\"/>\n",
                        sx(px),
                        sy(py),
                        ser.color
                    ));
                }
            }
        }
    }

    // Axes on top of the data.
    s.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1.2\"/>\n",
        MARGIN_T + plot_h,
        MARGIN_L + plot_w,
        MARGIN_T + plot_h
    ));
    s.push_str(&format!(
        "<line x1=\"{MARGIN_L}\" y1=\"{MARGIN_T}\" x2=\"{MARGIN_L}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1.2\"/>\n",
        MARGIN_T + plot_h
    ));

    // Title and axis labels.
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"26\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\" fill=\"#111111\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        escape(&fig.title)
    ));
    s.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" fill=\"#333333\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(&fig.x_label)
    ));
    s.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\" fill=\"#333333\">{}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        escape(&fig.y_label)
    ));

    // Legend, top right inside the plot.
    let mut entries: Vec<(&str, &str, bool)> = Vec::new();
    if let Some(lbl) = &fig.bar_label {
        entries.push((lbl, BAR_FILL, false));
    }
    for ser in &fig.series {
        if !ser.label.is_empty() {
            entries.push((&ser.label, ser.color, true));
        }
    }
    for (i, (label, color, is_line)) in entries.iter().enumerate() {
        let y = MARGIN_T + 14.0 + 18.0 * i as f64;
        let x = MARGIN_L + plot_w - 170.0;
        if *is_line {
            s.push_str(&format!(
                "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
                y - 4.0,
                x + 18.0,
                y - 4.0
            ));
        } else {
            s.push_str(&format!(
                "<rect x=\"{x:.2}\" y=\"{:.2}\" width=\"18\" height=\"10\" fill=\"{color}\"/>\n",
                y - 9.0
            ));
        }
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">{}</text>\n",
            x + 24.0,
            escape(label)
        ));
    }

    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_embeds_checksum_and_is_deterministic() {
        let fig = Figure {
            title: "t".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            bars: vec![Bar { x0: 0.0, x1: 0.5, height: 1.0 }],
            bar_label: Some("bars".into()),
            series: vec![Series {
                label: "curve".into(),
                color: SERIES_COLORS[0],
                points: vec![(0.0, 0.0), (0.25, 1.0), (0.5, 0.5)],
                markers: true,
            }],
        };
        let a = render(&fig, "abc123");
        let b = render(&fig, "abc123");
        assert_eq!(a, b);
        assert!(a.contains("<metadata>run_checksum=abc123</metadata>"));
        assert!(a.contains("</svg>"));
    }

    #[test]
    fn ticks_land_on_round_numbers() {
        let t = nice_ticks(-2.2, 2.2, 8);
        assert!(t.contains(&0.0));
        assert!(t.windows(2).all(|w| (w[1] - w[0] - 0.5).abs() < 1e-12));
        assert_eq!(fmt_num(0.30000000000000004), "0.3");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_num(2.0), "2");
    }
}
