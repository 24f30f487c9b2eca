//! CSV and SVG output for age curves.

use std::fmt::Write as _;

use crate::model::{AoiCurve, Instance, Schedule};

/// Fixed-point with at most nine fractional digits, trailing zeros dropped.
pub fn format_number(x: f64) -> String {
    let s = format!("{x:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        _ => s.to_string(),
    }
}

pub fn curve_csv(curve: &AoiCurve) -> String {
    let mut out = String::from("time,age\n");
    for &(t, age) in &curve.breakpoints {
        let _ = writeln!(out, "{},{}", format_number(t), format_number(age));
    }
    out
}

/// Parses `time,age` CSV back into breakpoints.
pub fn parse_curve_csv(text: &str) -> Option<AoiCurve> {
    let mut lines = text.lines();
    if lines.next()? != "time,age" {
        return None;
    }
    let breakpoints = lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let (t, a) = l.split_once(',')?;
            Some((t.parse().ok()?, a.parse().ok()?))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(AoiCurve { breakpoints })
}

pub const DEFAULT_WIDTH: u32 = 800;
pub const DEFAULT_HEIGHT: u32 = 400;

const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 44.0;
const MAX_TICKS: f64 = 20.0;

/// Integer tick spacing (1, 2, 5, 10, ...) giving at most 20 ticks.
fn tick_step(span: f64) -> f64 {
    let mut step = 1.0;
    loop {
        for m in [1.0, 2.0, 5.0] {
            if span / (step * m) <= MAX_TICKS {
                return step * m;
            }
        }
        step *= 10.0;
    }
}

fn axis_max(value: f64, step: f64) -> f64 {
    ((value / step).ceil() * step).max(step)
}

/// Standalone SVG of the age curve with generation and computing-start
/// markers.
pub fn curve_svg(
    instance: &Instance,
    schedule: &Schedule,
    curve: &AoiCurve,
    width: u32,
    height: u32,
) -> String {
    let w = f64::from(width);
    let h = f64::from(height);
    let plot_w = (w - MARGIN_LEFT - MARGIN_RIGHT).max(1.0);
    let plot_h = (h - MARGIN_TOP - MARGIN_BOTTOM).max(1.0);

    let x_step = tick_step(instance.deadline());
    let x_max = axis_max(instance.deadline(), x_step);
    let y_step = tick_step(curve.max_age());
    let y_max = axis_max(curve.max_age(), y_step);
    let sx = |t: f64| MARGIN_LEFT + t / x_max * plot_w;
    let sy = |a: f64| MARGIN_TOP + plot_h - a / y_max * plot_h;
    let x0 = sx(0.0);
    let y0 = sy(0.0);
    let y_top = sy(y_max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    );

    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}"/>"#,
        sx(x_max)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y_top:.2}"/>"#
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r#"<g font-family="sans-serif" font-size="11" fill="black">"#
    );
    let x_ticks = (x_max / x_step).round() as usize;
    for i in 0..=x_ticks {
        let v = i as f64 * x_step;
        let x = sx(v);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            y0 + 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{v}</text>"#,
            y0 + 16.0
        );
    }
    let y_ticks = (y_max / y_step).round() as usize;
    for i in 0..=y_ticks {
        let v = i as f64 * y_step;
        let y = sy(v);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/>"#,
            x0 - 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v}</text>"#,
            x0 - 7.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">time (s)</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        h - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="12" y="{:.2}" text-anchor="start">age (s)</text>"#,
        MARGIN_TOP - 10.0
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g class="generation" stroke="#1f77b4" stroke-width="1" stroke-dasharray="4 3">"##
    );
    for &t in &schedule.gen_times {
        let x = sx(t);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y_top:.2}"/>"#
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r##"<g class="computing" stroke="#d62728" stroke-width="1" stroke-dasharray="1 3">"##
    );
    for &c in &schedule.comp_starts {
        let x = sx(c);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y_top:.2}"/>"#
        );
    }
    let _ = writeln!(s, "</g>");

    let points: Vec<String> = curve
        .breakpoints
        .iter()
        .map(|&(t, a)| format!("{:.2},{:.2}", sx(t), sy(a)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline class="age" fill="none" stroke="black" stroke-width="2" points="{}"/>"#,
        points.join(" ")
    );

    let lx = MARGIN_LEFT + plot_w - 150.0;
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(
        s,
        r##"<line x1="{lx:.2}" y1="14" x2="{:.2}" y2="14" stroke="#1f77b4" stroke-dasharray="4 3"/><text x="{:.2}" y="18">generation</text>"##,
        lx + 18.0,
        lx + 22.0
    );
    let _ = writeln!(
        s,
        r##"<line x1="{:.2}" y1="14" x2="{:.2}" y2="14" stroke="#d62728" stroke-dasharray="1 3"/><text x="{:.2}" y="18">computing</text>"##,
        lx + 80.0,
        lx + 98.0,
        lx + 102.0
    );
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
