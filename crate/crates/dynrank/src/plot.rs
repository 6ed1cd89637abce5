//! Line charts of experiment results as standalone SVG.

use std::fmt::Write;

use dynrank_core::rational::to_f64;
use dynrank_core::RuleId;

use crate::experiments::{ExperimentResult, Figure};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;
const COLORS: [&str; 5] = ["#777777", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"];

pub fn render_svg(result: &ExperimentResult) -> String {
    let series: Vec<(RuleId, Vec<(f64, f64)>)> = RuleId::ALL
        .into_iter()
        .map(|rule| {
            let pts = result
                .series(rule)
                .map(|p| {
                    let x = match result.figure {
                        Figure::Row1 => to_f64(&p.alpha()),
                        Figure::Row2 => p.iteration as f64,
                    };
                    (x, to_f64(&p.mean()))
                })
                .collect();
            (rule, pts)
        })
        .filter(|(_, pts): &(RuleId, Vec<(f64, f64)>)| !pts.is_empty())
        .collect();

    let all = series.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, 0.0f64);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let y1 = if y1 > 0.0 { y1 * 1.05 } else { 1.0 };
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y / y1 * (HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<path d="M{l} {t} V{b} H{r}" stroke="black" fill="none"/>"#,
        l = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for i in 0..=4 {
        let y = y1 * f64::from(i) / 4.0;
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">{y:.1}</text>"#, MARGIN - 6.0, sy(y) + 4.0);
        let x = x0 + (x1 - x0) * f64::from(i) / 4.0;
        let _ =
            writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{x:.2}</text>"#, sx(x), HEIGHT - MARGIN + 16.0);
    }
    let xlabel = match result.figure {
        Figure::Row1 => "alpha",
        Figure::Row2 => "iteration",
    };
    let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="middle">{xlabel}</text>"#, WIDTH / 2.0, HEIGHT - 12.0);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{} / mean satisfaction of V</text>"#,
        WIDTH / 2.0,
        24.0,
        result.model.as_str()
    );

    for (k, (rule, pts)) in series.iter().enumerate() {
        let color = COLORS[RuleId::ALL.iter().position(|r| r == rule).unwrap_or(0) % COLORS.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
        let _ =
            writeln!(svg, r#"<polyline points="{}" stroke="{color}" stroke-width="2" fill="none"/>"#, path.join(" "));
        let ly = MARGIN + 14.0 * k as f64;
        let _ =
            writeln!(svg, r#"<text x="{}" y="{ly}" fill="{color}">{}</text>"#, WIDTH - MARGIN - 100.0, rule.as_str());
    }
    svg.push_str("</svg>\n");
    svg
}
