//! Self-contained SVG line charts for season trajectories.
//!
//! Output depends only on the input series, so the same data always yields
//! byte-identical files.

use std::fmt::Write;

use crate::analysis::TrajectorySeries;
use crate::index::season_start_year;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 80.0;
const Y_TICKS: usize = 5;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn series_label(s: &TrajectorySeries) -> String {
    format!("{} {} {} ({})", s.player, s.kind, s.scope, s.phase)
}

/// Y range: the kind's fixed bounds when every series has them, else the data range.
fn y_range(series: &[TrajectorySeries]) -> (f64, f64) {
    let fixed = series.iter().map(|s| s.bounds).collect::<Option<Vec<_>>>();
    let (lo, hi) = match fixed {
        Some(b) if !b.is_empty() => (
            b.iter().map(|x| x.0).fold(f64::INFINITY, f64::min),
            b.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max),
        ),
        _ => {
            let vals = series.iter().flat_map(|s| s.points.iter().map(|p| p.value));
            vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            })
        }
    };
    if !lo.is_finite() || !hi.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

/// Renders one or more trajectories on shared axes (x = season, y = index value).
pub fn render_trajectories(title: &str, series: &[TrajectorySeries]) -> String {
    let mut seasons: Vec<&str> = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.season.as_str()))
        .collect();
    seasons.sort_by_key(|s| (season_start_year(s), *s));
    seasons.dedup();

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let (y_lo, y_hi) = y_range(series);
    let x_of = |season: &str| -> f64 {
        let i = seasons.iter().position(|s| *s == season).unwrap_or(0);
        if seasons.len() <= 1 {
            MARGIN_LEFT + plot_w / 2.0
        } else {
            MARGIN_LEFT + plot_w * i as f64 / (seasons.len() - 1) as f64
        }
    };
    let y_of = |v: f64| -> f64 { MARGIN_TOP + plot_h * (1.0 - (v - y_lo) / (y_hi - y_lo)) };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // axes
    let x0 = MARGIN_LEFT;
    let x1 = MARGIN_LEFT + plot_w;
    let y0 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0:.2}" y1="{MARGIN_TOP:.2}" x2="{x0:.2}" y2="{y0:.2}" stroke="black"/>"#
    );

    for i in 0..=Y_TICKS {
        let v = y_lo + (y_hi - y_lo) * i as f64 / Y_TICKS as f64;
        let y = y_of(v);
        let _ = writeln!(
            out,
            r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="#dddddd"/>"##
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
    }
    for season in &seasons {
        let x = x_of(season);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 4.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="end" transform="rotate(-45 {x:.2} {:.2})">{}</text>"#,
            y0 + 16.0,
            y0 + 16.0,
            escape(season)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">season</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        out,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">index value</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    for (i, s) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|p| format!("{:.2},{:.2}", x_of(&p.season), y_of(p.value)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            pts.join(" ")
        );
        for p in &s.points {
            let fill = if p.excluded { "white" } else { color };
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{fill}" stroke="{color}"><title>{} {:.4}</title></circle>"#,
                x_of(&p.season),
                y_of(p.value),
                escape(&p.season),
                p.value
            );
        }
        let ly = MARGIN_TOP + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{ly:.2}" text-anchor="end" fill="{color}">{}</text>"#,
            x1 - 4.0,
            escape(&series_label(s))
        );
    }
    out.push_str("</svg>\n");
    out
}
