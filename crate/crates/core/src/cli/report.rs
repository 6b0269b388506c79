use std::fmt::Write as _;

use crate::detectors::Method;
use crate::rfsim::{CurvePoint, ErrorCurve};
use crate::{Error, Result};

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 320.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 56.0;
const LEGEND_H: f64 = 40.0;

fn color(m: Method) -> &'static str {
    match m {
        Method::Lmp => "#e67e22",
        Method::ZdGroth => "#c0392b",
        Method::BompElimination => "#8e44ad",
        Method::Nyquist => "#2471a3",
        Method::Random => "#000000",
    }
}

/// Horizontal placement of SNR values. Infinite SNR gets its own slot to the
/// right of the largest finite value.
struct XAxis {
    lo: f64,
    hi: f64,
    inf_at: f64,
}

impl XAxis {
    fn new(snrs: &[f64]) -> Self {
        let finite: Vec<f64> = snrs.iter().copied().filter(|s| s.is_finite()).collect();
        let (mut lo, mut hi) = finite
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| {
                (a.min(s), b.max(s))
            });
        if finite.is_empty() {
            (lo, hi) = (0.0, 0.0);
        }
        let step = ((hi - lo) * 0.15).max(5.0);
        let inf_at = hi + step;
        if snrs.iter().any(|s| s.is_infinite()) {
            hi = inf_at;
        }
        if hi - lo < 1e-9 {
            lo -= 1.0;
            hi += 1.0;
        }
        Self { lo, hi, inf_at }
    }

    fn pos(&self, snr: f64) -> f64 {
        let v = if snr.is_infinite() {
            if snr > 0.0 {
                self.inf_at
            } else {
                self.lo
            }
        } else {
            snr
        };
        MARGIN_L + (v - self.lo) / (self.hi - self.lo) * (PANEL_W - MARGIN_L - MARGIN_R)
    }
}

fn y_pos(rate: f64, floor: f64) -> f64 {
    let lf = floor.log10();
    let v = rate.max(floor).min(1.0).log10();
    MARGIN_T + (v / lf) * (PANEL_H - MARGIN_T - MARGIN_B)
}

fn fmt_snr(s: f64) -> String {
    if s.is_infinite() {
        if s > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{s}")
    }
}

fn panel(svg: &mut String, m: usize, points: &[&CurvePoint], methods: &[Method], x0: f64) {
    let max_trials = points.iter().map(|p| p.trials).max().unwrap_or(1);
    let floor = 1.0 / max_trials as f64;
    let mut snrs: Vec<f64> = points.iter().map(|p| p.snr_db).collect();
    snrs.sort_by(f64::total_cmp);
    snrs.dedup();
    let xa = XAxis::new(&snrs);
    let plot_bottom = PANEL_H - MARGIN_B;

    let _ = writeln!(svg, r#"<g class="chart" transform="translate({x0},0)">"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="15">M = {m}</text>"#,
        (MARGIN_L + PANEL_W - MARGIN_R) / 2.0
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
        PANEL_W - MARGIN_L - MARGIN_R,
        plot_bottom - MARGIN_T
    );

    // decade grid on the log axis, from 1 down to the clip floor
    let decades = (-floor.log10()).ceil() as i32;
    for d in 0..=decades {
        let rate = 10f64.powi(-d).max(floor);
        let y = y_pos(rate, floor);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_L}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/>"##,
            PANEL_W - MARGIN_R
        );
        let label = if rate == floor && d == decades {
            format!("1/{max_trials}")
        } else if d == 0 {
            "1".to_string()
        } else {
            format!("1e-{d}")
        };
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" text-anchor="end" font-size="11">{label}</text>"#,
            MARGIN_L - 6.0,
            y + 4.0
        );
    }
    for &s in &snrs {
        let x = xa.pos(s);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle" font-size="11">{}</text>"#,
            plot_bottom + 16.0,
            fmt_snr(s)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">SNR (dB)</text>"#,
        (MARGIN_L + PANEL_W - MARGIN_R) / 2.0,
        plot_bottom + 36.0
    );
    let _ = writeln!(
        svg,
        r#"<text transform="translate(14,{}) rotate(-90)" text-anchor="middle" font-size="12">error rate</text>"#,
        (MARGIN_T + plot_bottom) / 2.0
    );

    for &method in methods {
        let mut pts: Vec<&&CurvePoint> = points.iter().filter(|p| p.method == method).collect();
        if pts.is_empty() {
            continue;
        }
        pts.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
        let coords: Vec<String> = pts
            .iter()
            .map(|p| {
                format!(
                    "{:.2},{:.2}",
                    xa.pos(p.snr_db),
                    y_pos(p.error_rate(), floor)
                )
            })
            .collect();
        let dash = if method.is_baseline() {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            r#"<polyline class="series" data-method="{method}" points="{}" fill="none" stroke="{}" stroke-width="2"{dash}/>"#,
            coords.join(" "),
            color(method)
        );
    }

    if points.iter().all(|p| p.errors == 0) {
        let _ = writeln!(
            svg,
            r##"<text class="note" x="{}" y="{}" text-anchor="middle" font-size="11" fill="#555">no errors observed; plotted at clip floor 1/{max_trials}</text>"##,
            (MARGIN_L + PANEL_W - MARGIN_R) / 2.0,
            MARGIN_T + 18.0
        );
    }
    let _ = writeln!(svg, "</g>");
}

/// Renders an error curve as a standalone SVG document: one log-scale chart
/// per M, one line per method, a shared legend. Rates below `1/trials` are
/// drawn at that floor.
pub fn emit_plot(curve: &ErrorCurve) -> Result<String> {
    if curve.is_empty() {
        return Err(Error::InvalidArgument("results table has no rows".into()));
    }
    let ms = curve.m_values();
    let methods = curve.methods();
    let width = PANEL_W * ms.len() as f64;
    let height = PANEL_H + LEGEND_H;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (k, &m) in ms.iter().enumerate() {
        let pts: Vec<&CurvePoint> = curve.points().iter().filter(|p| p.m == m).collect();
        panel(&mut svg, m, &pts, &methods, k as f64 * PANEL_W);
    }

    let _ = writeln!(
        svg,
        r#"<g class="legend" transform="translate({MARGIN_L},{})">"#,
        PANEL_H + 8.0
    );
    for (k, &method) in methods.iter().enumerate() {
        let x = k as f64 * 120.0;
        let dash = if method.is_baseline() {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            r#"<g class="legend-entry"><line x1="{x}" y1="10" x2="{}" y2="10" stroke="{}" stroke-width="2"{dash}/><text x="{}" y="14" font-size="12">{method}</text></g>"#,
            x + 28.0,
            color(method),
            x + 34.0
        );
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    Ok(svg)
}
