//! SVG shot charts and grid exports.
//!
//! The chart is a cell raster in court coordinates with the court markings
//! drawn on top and a legend on the right. Output depends only on the inputs,
//! so identical surfaces give identical files.

use std::fmt::Write as _;
use std::path::Path;

use shotchart_core::{BoundedBox, CourtSpec, Point, Surface};

use crate::colormap::VIRIDIS;
use crate::error::{Error, Result};
use crate::io::write_text;

const PX_PER_FT: f64 = 12.0;
const MARGIN: f64 = 20.0;
const TITLE_HEIGHT: f64 = 24.0;
const LEGEND_GAP: f64 = 30.0;
const LEGEND_BAR: f64 = 20.0;
const LEGEND_TEXT: f64 = 110.0;
const MISSING: [u8; 3] = [128, 128, 128];

/// HDR banding: `thresholds[k]` is the density cut for `levels[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HdrBands {
    pub levels: Vec<f64>,
    pub thresholds: Vec<f64>,
}

impl HdrBands {
    /// Band of a value: 0 inside the smallest region, `thresholds.len()`
    /// outside the largest.
    pub fn band(&self, v: f64) -> usize {
        self.thresholds.iter().filter(|t| v < **t).count()
    }

    pub fn n_bands(&self) -> usize {
        self.thresholds.len() + 1
    }

    fn color(&self, band: usize) -> [u8; 3] {
        let k = self.thresholds.len();
        if k == 0 {
            return VIRIDIS[255];
        }
        // Brightest for the innermost band.
        let pos = ((k - band) as f64 / k as f64 * 255.0).round() as usize;
        VIRIDIS[pos]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChartOptions {
    pub title: Option<String>,
    pub hdr: Option<HdrBands>,
}

fn hex([r, g, b]: [u8; 3]) -> String {
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn continuous_color(v: f64, lo: f64, hi: f64) -> [u8; 3] {
    if !v.is_finite() {
        return MISSING;
    }
    let t = if hi > lo { (v - lo) / (hi - lo) } else { 0.0 };
    VIRIDIS[((t * 256.0) as usize).min(255)]
}

fn tick_label(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".into()
    } else if (1e-3..1e4).contains(&a) {
        format!("{v:.4}")
    } else {
        format!("{v:.3e}")
    }
}

/// `0.95` as `95` rather than `95.00000000000001`.
fn percent(level: f64) -> f64 {
    (level * 1e8).round() / 1e6
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    court: CourtSpec,
    left: f64,
    top: f64,
}

impl Frame {
    fn width(&self) -> f64 {
        (self.court.x_max - self.court.x_min) * PX_PER_FT
    }

    fn height(&self) -> f64 {
        (self.court.y_max - self.court.y_min) * PX_PER_FT
    }

    fn px(&self, p: Point) -> (f64, f64) {
        (
            self.left + (p.x - self.court.x_min) * PX_PER_FT,
            self.top + (self.court.y_max - p.y) * PX_PER_FT,
        )
    }
}

/// Renders `surface` over `court` as an SVG document.
pub fn render_svg(surface: &Surface, court: &CourtSpec, options: &ChartOptions) -> Result<String> {
    if *surface.grid.bbox() != BoundedBox::from(court) {
        return Err(Error::Usage("surface grid does not match the court".into()));
    }
    if surface.values.len() != surface.grid.len() {
        return Err(Error::Usage("surface has the wrong number of values".into()));
    }
    let title_h = if options.title.is_some() { TITLE_HEIGHT } else { 0.0 };
    let f = Frame {
        court: *court,
        left: MARGIN,
        top: MARGIN + title_h,
    };
    let total_w = MARGIN + f.width() + LEGEND_GAP + LEGEND_BAR + LEGEND_TEXT;
    let total_h = f.top + f.height() + MARGIN;
    let (lo, hi) = (surface.min(), surface.max());
    let color = |v: f64| match &options.hdr {
        Some(h) if v.is_finite() => h.color(h.band(v)),
        Some(_) => MISSING,
        None => continuous_color(v, lo, hi),
    };

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w:.0}" height="{total_h:.0}" viewBox="0 0 {total_w:.0} {total_h:.0}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    if let Some(t) = &options.title {
        let _ = writeln!(
            s,
            r#"<text x="{MARGIN}" y="{:.1}" font-family="sans-serif" font-size="16">{}</text>"#,
            MARGIN + 12.0,
            escape(t)
        );
    }

    // Raster: one row of cells at a time, merging runs of equal color.
    let (nx, ny) = (surface.grid.nx, surface.grid.ny);
    let edge_x = |i: usize| f.left + f.width() * i as f64 / nx as f64;
    let edge_y = |j: usize| f.top + f.height() * (ny - j) as f64 / ny as f64;
    let _ = writeln!(
        s,
        r#"<g id="raster" data-kind="{}" shape-rendering="crispEdges">"#,
        surface.kind.name()
    );
    for j in 0..ny {
        let (y0, y1) = (edge_y(j + 1), edge_y(j));
        let mut i = 0;
        while i < nx {
            let c = color(surface.get(i, j));
            let mut k = i + 1;
            while k < nx && color(surface.get(k, j)) == c {
                k += 1;
            }
            let (x0, x1) = (edge_x(i), edge_x(k));
            let _ = writeln!(
                s,
                r#"<rect x="{x0:.3}" y="{y0:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                x1 - x0,
                y1 - y0,
                hex(c)
            );
            i = k;
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<g id="court" fill="none" stroke="#000000" stroke-width="1.5" stroke-linejoin="round">"##
    );
    for line in court.court_lines() {
        let pts: Vec<String> = line
            .points
            .iter()
            .map(|p| {
                let (x, y) = f.px(*p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline class="{}" points="{}"/>"#,
            line.kind.name(),
            pts.join(" ")
        );
    }
    let _ = writeln!(s, "</g>");

    let bar_x = f.left + f.width() + LEGEND_GAP;
    let text_x = bar_x + LEGEND_BAR + 6.0;
    match &options.hdr {
        None => {
            let _ = writeln!(
                s,
                r#"<g id="legend" data-min="{lo:?}" data-max="{hi:?}" font-family="sans-serif" font-size="11">"#
            );
            let step = f.height() / 256.0;
            for (k, c) in VIRIDIS.iter().enumerate() {
                let y = f.top + f.height() - (k + 1) as f64 * step;
                let _ = writeln!(
                    s,
                    r#"<rect x="{bar_x:.3}" y="{y:.3}" width="{LEGEND_BAR}" height="{:.3}" fill="{}"/>"#,
                    step,
                    hex(*c)
                );
            }
            let ticks = if hi > lo { 5 } else { 1 };
            for t in 0..ticks {
                let frac = if ticks == 1 { 0.0 } else { t as f64 / (ticks - 1) as f64 };
                let v = if t + 1 == ticks { hi } else { lo + frac * (hi - lo) };
                let y = f.top + f.height() * (1.0 - frac);
                let _ = writeln!(
                    s,
                    r#"<text x="{text_x:.3}" y="{:.3}" data-value="{v:?}">{}</text>"#,
                    y + 4.0,
                    tick_label(v)
                );
            }
        }
        Some(h) => {
            let thresholds: Vec<String> = h.thresholds.iter().map(|t| format!("{t:?}")).collect();
            let _ = writeln!(
                s,
                r#"<g id="legend" data-min="{lo:?}" data-max="{hi:?}" data-bands="{}" data-thresholds="{}" font-family="sans-serif" font-size="11">"#,
                h.n_bands(),
                thresholds.join(",")
            );
            let sw = 18.0;
            for b in 0..h.n_bands() {
                let y = f.top + b as f64 * (sw + 6.0);
                let label = match h.levels.get(b) {
                    Some(l) => format!("{}% HDR", percent(*l)),
                    None => match h.levels.last() {
                        Some(l) => format!("outside {}%", percent(*l)),
                        None => "all".into(),
                    },
                };
                let _ = writeln!(
                    s,
                    r#"<rect class="band" x="{bar_x:.3}" y="{y:.3}" width="{LEGEND_BAR}" height="{sw}" fill="{}"/>"#,
                    hex(h.color(b))
                );
                let _ = writeln!(s, r#"<text x="{text_x:.3}" y="{:.3}">{label}</text>"#, y + 13.0);
            }
        }
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

pub fn render_chart(
    surface: &Surface,
    court: &CourtSpec,
    options: &ChartOptions,
    path: &Path,
) -> Result<()> {
    write_text(path, &render_svg(surface, court, options)?)
}

/// `x,y,value` per cell center, rows ordered by `y` then `x`. Numbers are
/// shortest round-trip decimals.
pub fn grid_csv(surface: &Surface) -> String {
    let g = &surface.grid;
    let mut s = String::with_capacity(g.len() * 48);
    s.push_str("x,y,value\n");
    for j in 0..g.ny {
        for i in 0..g.nx {
            let c = g.cell_center(i, j);
            let _ = writeln!(s, "{:?},{:?},{:?}", c.x, c.y, surface.get(i, j));
        }
    }
    s
}

pub fn export_grid(surface: &Surface, path: &Path) -> Result<()> {
    write_text(path, &grid_csv(surface))
}
