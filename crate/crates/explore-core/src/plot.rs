//! Minimal deterministic SVG line charts for benchmark output.

use crate::bench::WindowCsvRow;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 48.0;

fn color_for(detector: &str, seed_rank: usize) -> String {
    // one hue per detector, lightness varied per seed
    let base = match detector {
        "adaptive" => (208, 70),
        _ => (16, 70),
    };
    let light = 35 + (seed_rank % 5) * 8;
    format!("hsl({},{}%,{}%)", base.0, base.1, light)
}

/// One labeled polyline.
pub struct Series {
    pub label: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 100.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    }
}

/// Renders a line chart as a standalone SVG document.
pub fn render_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut x_max = 0.0f64;
    let mut y_max = 0.0f64;
    for s in series {
        for &(x, y) in &s.points {
            x_max = x_max.max(x);
            y_max = y_max.max(y);
        }
    }
    if x_max <= 0.0 {
        x_max = 1.0;
    }
    if y_max <= 0.0 {
        y_max = 1.0;
    }
    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |x: f64| MARGIN_L + x / x_max * plot_w;
    let sy = |y: f64| MARGIN_T + plot_h - y / y_max * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        WIDTH / 2.0,
        title
    ));

    // axes with 5 ticks each
    for i in 0..=5 {
        let fx = i as f64 / 5.0;
        let x = MARGIN_L + fx * plot_w;
        let y = MARGIN_T + plot_h - fx * plot_h;
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#ddd\"/>\n",
            MARGIN_T,
            MARGIN_T + plot_h
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"#ddd\"/>\n",
            MARGIN_L,
            MARGIN_L + plot_w
        ));
        svg.push_str(&format!(
            "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_T + plot_h + 16.0,
            fmt_tick(fx * x_max)
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n",
            MARGIN_L - 6.0,
            y + 4.0,
            fmt_tick(fx * y_max)
        ));
    }
    svg.push_str(&format!(
        "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 10.0,
        x_label
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {})\">{}</text>\n",
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        y_label
    ));

    for s in series {
        if s.points.is_empty() {
            continue;
        }
        let pts: Vec<String> =
            s.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
            pts.join(" "),
            s.color
        ));
    }

    // legend: one entry per distinct label, in first-seen order
    let mut seen: Vec<(&str, &str)> = Vec::new();
    for s in series {
        if !seen.iter().any(|(l, _)| *l == s.label) {
            seen.push((&s.label, &s.color));
        }
    }
    for (i, (label, color)) in seen.iter().enumerate() {
        let y = MARGIN_T + 10.0 + i as f64 * 16.0;
        let x = MARGIN_L + plot_w - 120.0;
        svg.push_str(&format!(
            "<line x1=\"{x}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            x + 18.0
        ));
        svg.push_str(&format!("<text x=\"{}\" y=\"{}\">{}</text>\n", x + 24.0, y + 4.0, label));
    }

    svg.push_str("</svg>\n");
    svg
}

/// Parsed series CSV row (see `bench::SERIES_CSV_HEADER`).
pub struct SeriesRow {
    pub detector: String,
    pub seed: u64,
    pub sim_time: f64,
    pub explored: f64,
    pub distance: f64,
}

fn group_series(
    rows: &[SeriesRow],
    pick: impl Fn(&SeriesRow) -> (f64, f64),
) -> Vec<Series> {
    let mut keys: Vec<(String, u64)> = Vec::new();
    for r in rows {
        let key = (r.detector.clone(), r.seed);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.sort();
    keys.into_iter()
        .map(|(detector, seed)| {
            let points = rows
                .iter()
                .filter(|r| r.detector == detector && r.seed == seed)
                .map(&pick)
                .collect();
            // seeds share the detector's legend label
            let seed_rank = seed as usize;
            Series {
                label: detector.clone(),
                color: color_for(&detector, seed_rank),
                points,
            }
        })
        .collect()
}

/// The four standard charts for one scenario, as (file name, SVG) pairs.
pub fn scenario_charts(
    scenario: &str,
    series_rows: &[SeriesRow],
    window_rows: &[WindowCsvRow],
) -> Vec<(String, String)> {
    assert!(
        !series_rows.is_empty() || !window_rows.is_empty(),
        "nothing to plot for {scenario}"
    );
    let explored = group_series(series_rows, |r| (r.sim_time, r.explored));
    let distance = group_series(series_rows, |r| (r.sim_time, r.distance));

    let mut keys: Vec<(String, u64)> = Vec::new();
    for r in window_rows {
        let key = (r.detector.clone(), r.seed);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.sort();
    let window_series = |pick: &dyn Fn(&WindowCsvRow) -> f64| -> Vec<Series> {
        keys.iter()
            .map(|(detector, seed)| Series {
                label: detector.clone(),
                color: color_for(detector, *seed as usize),
                points: window_rows
                    .iter()
                    .filter(|r| &r.detector == detector && r.seed == *seed)
                    .map(|r| (r.metrics.window_index as f64, pick(r)))
                    .collect(),
            })
            .collect()
    };
    let attempts = window_series(&|r| r.metrics.attempts as f64);
    let durations = window_series(&|r| r.metrics.duration_wall);

    vec![
        (
            format!("{scenario}_explored.svg"),
            render_chart(
                &format!("{scenario}: explored area vs time"),
                "sim time (s)",
                "explored area (m²)",
                &explored,
            ),
        ),
        (
            format!("{scenario}_distance.svg"),
            render_chart(
                &format!("{scenario}: travel distance vs time"),
                "sim time (s)",
                "distance (m)",
                &distance,
            ),
        ),
        (
            format!("{scenario}_attempts.svg"),
            render_chart(
                &format!("{scenario}: sampling attempts per window"),
                "window index",
                "attempts",
                &attempts,
            ),
        ),
        (
            format!("{scenario}_duration.svg"),
            render_chart(
                &format!("{scenario}: detection duration per window"),
                "window index",
                "duration (s)",
                &durations,
            ),
        ),
    ]
}

/// Parses a series CSV produced by `bench::series_csv`.
pub fn parse_series_csv(text: &str) -> Result<Vec<SeriesRow>, String> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == crate::bench::SERIES_CSV_HEADER => {}
        other => return Err(format!("bad series header {:?}", other.map(|(_, l)| l))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 5 {
            return Err(format!("line {}: expected 5 fields", i + 1));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("line {}: bad number", i + 1));
        rows.push(SeriesRow {
            detector: f[0].to_string(),
            seed: f[1].parse().map_err(|_| format!("line {}: bad seed", i + 1))?,
            sim_time: num(f[2])?,
            explored: num(f[3])?,
            distance: num(f[4])?,
        });
    }
    Ok(rows)
}
