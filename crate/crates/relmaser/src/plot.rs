//! Static SVG plots of endfire intensity against retarded time.
//!
//! Output depends only on the input values, so identical inputs give
//! byte-identical documents.

use std::fmt::Write as _;
use std::path::Path;

use relmaser_core::solver::SimulationResult;

use crate::config::PlotStyle;
use crate::error::AppError;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 96.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 56.0;
const BOTTOM: f64 = 64.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// One curve: (τ in s, intensity in W/m²) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Trace {
    pub fn from_result(label: impl Into<String>, result: &SimulationResult) -> Self {
        Trace {
            label: label.into(),
            points: result
                .endfire
                .iter()
                .map(|s| (s.tau, s.intensity))
                .collect(),
        }
    }
}

/// Legend label for a frame velocity.
pub fn beta_label(beta: f64) -> String {
    format!("β = {beta}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e4).contains(&a) {
        let s = format!("{v:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        let s = format!("{v:.3e}");
        let (m, e) = s.split_once('e').expect("exponent");
        let m = m.trim_end_matches('0').trim_end_matches('.');
        format!("{m}e{e}")
    }
}

/// Round step of roughly span/target.
fn nice_step(span: f64, target: usize) -> f64 {
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f < 1.5 {
        1.0
    } else if f < 3.0 {
        2.0
    } else if f < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo, 6);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

/// Keeps the first, min, max and last point of each pixel column, in order.
fn decimate(points: &[(f64, f64)], x0: f64, x1: f64, columns: usize) -> Vec<(f64, f64)> {
    if points.len() <= 4 * columns {
        return points.to_vec();
    }
    let mut out = Vec::with_capacity(4 * columns);
    let mut start = 0;
    while start < points.len() {
        let col = (((points[start].0 - x0) / (x1 - x0) * columns as f64).floor()).max(0.0) as usize;
        let mut end = start + 1;
        while end < points.len()
            && ((((points[end].0 - x0) / (x1 - x0)) * columns as f64).floor()).max(0.0) as usize
                == col
        {
            end += 1;
        }
        let bucket = &points[start..end];
        let mut keep = vec![0, bucket.len() - 1];
        let (mut imin, mut imax) = (0, 0);
        for (i, p) in bucket.iter().enumerate() {
            if p.1 < bucket[imin].1 {
                imin = i;
            }
            if p.1 > bucket[imax].1 {
                imax = i;
            }
        }
        keep.push(imin);
        keep.push(imax);
        keep.sort_unstable();
        keep.dedup();
        out.extend(keep.into_iter().map(|i| bucket[i]));
        start = end;
    }
    out
}

/// Renders an SVG document. Log style clamps values below `log_floor` to
/// the floor and says so on the plot.
pub fn emit_plot(
    title: &str,
    traces: &[Trace],
    style: PlotStyle,
    log_floor: f64,
) -> Result<String, AppError> {
    if traces.is_empty() || traces.iter().any(|t| t.points.is_empty()) {
        return Err(AppError::Usage("cannot plot an empty series".into()));
    }
    if traces
        .iter()
        .flat_map(|t| &t.points)
        .any(|p| !p.0.is_finite() || !p.1.is_finite())
    {
        return Err(AppError::Format("cannot plot non-finite values".into()));
    }
    if style == PlotStyle::Log && log_floor.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(AppError::Usage("log floor must be > 0".into()));
    }
    let all = || traces.iter().flat_map(|t| t.points.iter());
    let x0 = all().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let mut x1 = all().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    let ymax_raw = all().map(|p| p.1).fold(0.0, f64::max);
    let mut clamped = false;
    let (y0, y1, transform): (f64, f64, Box<dyn Fn(f64) -> f64>) = match style {
        PlotStyle::Linear => {
            let top = if ymax_raw > 0.0 { ymax_raw * 1.05 } else { 1.0 };
            (0.0, top, Box::new(|y| y))
        }
        PlotStyle::Log => {
            clamped = all().any(|p| p.1 < log_floor);
            let ymin = all()
                .map(|p| p.1.max(log_floor))
                .fold(f64::INFINITY, f64::min);
            let lo = ymin.log10().floor();
            let mut hi = ymax_raw.max(log_floor).log10().ceil();
            if hi <= lo {
                hi = lo + 1.0;
            }
            (lo, hi, Box::new(move |y: f64| y.max(log_floor).log10()))
        }
    };
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(
        w,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(w, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        w,
        "<text x=\"{:.2}\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">{}</text>",
        WIDTH / 2.0,
        escape(title)
    );
    // Axes and ticks.
    let _ = writeln!(
        w,
        "<rect x=\"{LEFT:.2}\" y=\"{TOP:.2}\" width=\"{pw:.2}\" height=\"{ph:.2}\" fill=\"none\" stroke=\"black\"/>"
    );
    for t in linear_ticks(x0, x1) {
        let x = sx(t);
        let _ = writeln!(
            w,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/><text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 19.0,
            fmt_tick(t)
        );
    }
    let y_ticks: Vec<(f64, String)> = match style {
        PlotStyle::Linear => linear_ticks(y0, y1)
            .into_iter()
            .map(|t| (t, fmt_tick(t)))
            .collect(),
        PlotStyle::Log => {
            let decades = (y1 - y0) as i64;
            let every = (decades as f64 / 8.0).ceil().max(1.0) as i64;
            (y0 as i64..=y1 as i64)
                .filter(|d| (d - y0 as i64) % every == 0)
                .map(|d| (d as f64, format!("1e{d}")))
                .collect()
        }
    };
    for (t, label) in &y_ticks {
        let y = sy(*t);
        let _ = writeln!(
            w,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT:.2}\" y2=\"{y:.2}\" stroke=\"black\"/><line x1=\"{LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{label}</text>",
            LEFT - 5.0,
            LEFT + pw,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        w,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">retarded time τ (s)</text>",
        LEFT + pw / 2.0,
        HEIGHT - 18.0
    );
    let y_label = match style {
        PlotStyle::Linear => "endfire intensity (W/m²)",
        PlotStyle::Log => "endfire intensity (W/m², log scale)",
    };
    let _ = writeln!(
        w,
        "<text transform=\"translate(20 {:.2}) rotate(-90)\" text-anchor=\"middle\">{y_label}</text>",
        TOP + ph / 2.0
    );

    // Traces.
    let columns = pw as usize;
    for (i, trace) in traces.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let pts = decimate(&trace.points, x0, x1, columns);
        let mut d = String::with_capacity(pts.len() * 16);
        for (j, (x, y)) in pts.iter().enumerate() {
            let _ = write!(
                d,
                "{}{:.2},{:.2}",
                if j == 0 { "M" } else { " L" },
                sx(*x),
                sy(transform(*y))
            );
        }
        let _ = writeln!(
            w,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>"
        );
    }

    // Legend.
    if traces.len() > 1 || !traces[0].label.is_empty() {
        for (i, trace) in traces.iter().enumerate() {
            let y = TOP + 16.0 + 18.0 * i as f64;
            let x = LEFT + pw - 150.0;
            let _ = writeln!(
                w,
                "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\" stroke-width=\"2\"/><text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
                y - 4.0,
                x + 24.0,
                y - 4.0,
                COLORS[i % COLORS.len()],
                x + 30.0,
                y,
                escape(&trace.label)
            );
        }
    }
    if clamped {
        let _ = writeln!(
            w,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" fill=\"#555555\">values below {} W/m² clamped to the floor</text>",
            LEFT + 8.0,
            TOP + ph - 8.0,
            fmt_tick(log_floor)
        );
    }
    let _ = writeln!(w, "</svg>");
    Ok(s)
}

pub fn write_plot(svg: &str, path: &Path) -> Result<(), AppError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| AppError::io(parent, e))?;
    }
    std::fs::write(path, svg).map_err(|e| AppError::io(path, e))
}
