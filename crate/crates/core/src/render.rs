//! Barcode drawings. Output is a pure function of the barcode and options.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::persistence::{Barcode, PersistenceInterval};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BarOrder {
    #[default]
    ByDeathAsc,
    ByBirthAsc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub width_px: u32,
    pub height_px: u32,
    /// `None` means the largest finite endpoint of the drawn bars.
    pub axis_max: Option<f64>,
    pub dim: usize,
    pub sort: BarOrder,
    pub infinite_marker: String,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            width_px: 800,
            height_px: 16,
            axis_max: None,
            dim: 0,
            sort: BarOrder::ByDeathAsc,
            infinite_marker: ">".into(),
        }
    }
}

fn sorted(barcode: &Barcode, dim: usize, order: BarOrder) -> Vec<PersistenceInterval> {
    let mut bars = barcode.intervals(dim).to_vec();
    match order {
        BarOrder::ByDeathAsc => bars.sort_by(|a, b| {
            a.death
                .total_cmp(&b.death)
                .then(a.birth.total_cmp(&b.birth))
        }),
        BarOrder::ByBirthAsc => bars.sort_by(|a, b| {
            a.birth
                .total_cmp(&b.birth)
                .then(a.death.total_cmp(&b.death))
        }),
    }
    bars
}

/// Space below the bars for the axis line and its maximum label.
const AXIS_PX: usize = 14;

fn auto_axis(bars: &[PersistenceInterval]) -> f64 {
    let m = bars
        .iter()
        .flat_map(|b| [b.birth, b.death])
        .filter(|v| v.is_finite())
        .fold(0.0_f64, f64::max);
    if m > 0.0 {
        m
    } else {
        1.0
    }
}

/// One `<rect>` per bar, stacked top to bottom. Bars are clipped at
/// `axis_max`; infinite bars run to the right edge and carry the marker.
pub fn render_barcode_svg(barcode: &Barcode, options: &RenderOptions) -> Result<String> {
    if options.dim > 1 {
        return Err(Error::InvalidParameter(format!(
            "dimension {} is not computed",
            options.dim
        )));
    }
    if options.width_px == 0 || options.height_px == 0 {
        return Err(Error::InvalidParameter(
            "width and height must be positive".into(),
        ));
    }
    let bars = sorted(barcode, options.dim, options.sort);
    let axis_max = match options.axis_max {
        Some(a) if a.is_finite() && a > 0.0 => a,
        Some(a) => {
            return Err(Error::InvalidParameter(format!(
                "axis_max {a} must be positive"
            )))
        }
        None => auto_axis(&bars),
    };
    let w = options.width_px as f64;
    let h = options.height_px as f64;
    let x = |v: f64| (v.min(axis_max) / axis_max) * w;
    let bars_h = options.height_px as usize * bars.len();
    let total_h = bars_h + AXIS_PX;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        options.width_px, total_h, options.width_px, total_h
    );
    for (i, bar) in bars.iter().enumerate() {
        let x0 = x(bar.birth);
        let x1 = if bar.is_infinite() { w } else { x(bar.death) };
        let y = i as f64 * h;
        let _ = writeln!(
            out,
            r#"  <rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="black"/>"#,
            x0,
            y + 0.2 * h,
            (x1 - x0).max(0.0),
            0.6 * h
        );
        if bar.is_infinite() {
            let _ = writeln!(
                out,
                r#"  <text x="{:.3}" y="{:.3}" text-anchor="end" font-size="{:.3}">{}</text>"#,
                w,
                y + 0.8 * h,
                0.8 * h,
                escape(&options.infinite_marker)
            );
        }
    }
    let _ = writeln!(
        out,
        r#"  <line x1="0" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        bars_h + 1,
        options.width_px,
        bars_h + 1
    );
    let _ = writeln!(
        out,
        r#"  <text x="{}" y="{}" text-anchor="end" font-size="10">{}</text>"#,
        options.width_px,
        total_h - 1,
        axis_max
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Plain-text barcode: one line per bar, a padded `[birth, death) ` label
/// followed by a track of `columns` cells in which the bar is drawn with `-`.
/// Infinite bars fill the track and end in `>`.
pub fn render_text(barcode: &Barcode, dim: usize, columns: usize) -> Result<String> {
    if columns < 20 {
        return Err(Error::InvalidParameter(format!(
            "need at least 20 columns, got {columns}"
        )));
    }
    if dim > 1 {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} is not computed"
        )));
    }
    let bars = sorted(barcode, dim, BarOrder::ByDeathAsc);
    let axis_max = auto_axis(&bars);
    let labels: Vec<String> = bars
        .iter()
        .map(|b| {
            if b.is_infinite() {
                format!("[{}, inf) ", b.birth)
            } else {
                format!("[{}, {}) ", b.birth, b.death)
            }
        })
        .collect();
    let label_w = labels.iter().map(String::len).max().unwrap_or(0);
    let cell = |v: f64| ((v.min(axis_max) / axis_max) * columns as f64).round() as usize;

    let mut out = String::new();
    for (bar, label) in bars.iter().zip(&labels) {
        let start = cell(bar.birth).min(columns - 1);
        let line = if bar.is_infinite() {
            format!("{}{}>", " ".repeat(start), "-".repeat(columns - 1 - start))
        } else {
            let end = cell(bar.death).clamp(start + 1, columns);
            format!("{}{}", " ".repeat(start), "-".repeat(end - start))
        };
        let _ = writeln!(out, "{label:<label_w$}{line}");
    }
    Ok(out)
}
