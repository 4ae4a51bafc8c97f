//! SVG output for disk laminations, torus plots and entropy sweeps.
//!
//! Every emitted leaf, gap, cell and data point is a single element tagged
//! with a class (`leaf`, `gap`, `cell`, `point`, `marker`), so element counts
//! can be checked against the input. Coordinates are printed with fixed
//! precision, which keeps the output byte-stable.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use crate::angle::Angle;
use crate::entropy::SweepRow;
use crate::error::{Error, Result};
use crate::lamination::{FiniteLamination, Leaf};
use crate::major::PrimitiveMajor;
use crate::scalar::ExactInt;
use crate::torus::{ratio_to_f64, RectangleSet};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GeodesicStyle {
    /// Circular arcs orthogonal to the boundary circle.
    #[default]
    Hyperbolic,
    StraightChord,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Palette {
    #[default]
    Classic,
    Grayscale,
}

struct Colors {
    ink: &'static str,
    accent: &'static str,
    fill: &'static str,
    shade: &'static str,
}

impl Palette {
    fn colors(self) -> Colors {
        match self {
            Palette::Classic => Colors { ink: "#1a1a1a", accent: "#b2182b", fill: "#f4a582", shade: "#92c5de" },
            Palette::Grayscale => Colors { ink: "#000000", accent: "#404040", fill: "#bdbdbd", shade: "#d9d9d9" },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderConfig {
    pub width: u32,
    pub height: u32,
    pub stroke_width: f64,
    pub palette: Palette,
    pub geodesic: GeodesicStyle,
    /// Right end of the θ axis in entropy plots (1 or 1/2).
    pub theta_max: f64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            width: 600,
            height: 600,
            stroke_width: 1.0,
            palette: Palette::default(),
            geodesic: GeodesicStyle::default(),
            theta_max: 1.0,
        }
    }
}

fn header(cfg: &RenderConfig) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#ffffff\"/>\n",
        w = cfg.width,
        h = cfg.height
    )
}

struct Disk {
    cx: f64,
    cy: f64,
    r: f64,
}

impl Disk {
    fn new(cfg: &RenderConfig) -> Self {
        let (w, h) = (cfg.width as f64, cfg.height as f64);
        Disk { cx: w / 2.0, cy: h / 2.0, r: 0.45 * w.min(h) }
    }

    /// Screen point of the angle t (in turns), counterclockwise from the positive x axis.
    fn point(&self, t: f64) -> (f64, f64) {
        let a = 2.0 * PI * t;
        (self.cx + self.r * a.cos(), self.cy - self.r * a.sin())
    }

    /// Path commands from the current point at angle s to angle t along the geodesic.
    fn edge(&self, s: f64, t: f64, style: GeodesicStyle, out: &mut String) {
        let (x, y) = self.point(t);
        let mut sep = (t - s).rem_euclid(1.0);
        let ccw = sep <= 0.5;
        if !ccw {
            sep = 1.0 - sep;
        }
        let c = (PI * sep).cos();
        if style == GeodesicStyle::StraightChord || c.abs() < 1e-9 {
            let _ = write!(out, " L {x:.3} {y:.3}");
            return;
        }
        // the orthogonal circle has radius tan(π·sep) and bulges toward the center
        let rad = self.r * (PI * sep).tan();
        let sweep = if ccw { 1 } else { 0 };
        let _ = write!(out, " A {rad:.3} {rad:.3} 0 0 {sweep} {x:.3} {y:.3}");
    }

    fn start(&self, t: f64, out: &mut String) {
        let (x, y) = self.point(t);
        let _ = write!(out, "M {x:.3} {y:.3}");
    }
}

fn disk_frame(cfg: &RenderConfig, disk: &Disk, out: &mut String) {
    let c = cfg.palette.colors();
    let _ = writeln!(
        out,
        "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.2}\"/>",
        disk.cx, disk.cy, disk.r, c.ink, cfg.stroke_width
    );
}

fn leaf_path(disk: &Disk, a: f64, b: f64, cfg: &RenderConfig, color: &str, out: &mut String) {
    let mut d = String::new();
    disk.start(a, &mut d);
    disk.edge(a, b, cfg.geodesic, &mut d);
    let _ = writeln!(
        out,
        "<path class=\"leaf\" d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{:.2}\"/>",
        cfg.stroke_width
    );
}

fn gap_path(disk: &Disk, vertices: &[f64], cfg: &RenderConfig, out: &mut String) {
    let c = cfg.palette.colors();
    let mut d = String::new();
    disk.start(vertices[0], &mut d);
    for w in vertices.windows(2) {
        disk.edge(w[0], w[1], cfg.geodesic, &mut d);
    }
    disk.edge(vertices[vertices.len() - 1], vertices[0], cfg.geodesic, &mut d);
    d.push_str(" Z");
    let _ = writeln!(
        out,
        "<path class=\"gap\" d=\"{d}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{:.2}\"/>",
        c.fill, c.accent, cfg.stroke_width
    );
}

/// Boundary circle plus one geodesic path per leaf.
pub fn render_disk<I: ExactInt>(lam: &FiniteLamination<I>, cfg: &RenderConfig) -> String {
    let disk = Disk::new(cfg);
    let mut out = header(cfg);
    disk_frame(cfg, &disk, &mut out);
    let ink = cfg.palette.colors().ink;
    for l in &lam.leaves {
        leaf_path(&disk, l.a().to_f64(), l.b().to_f64(), cfg, ink, &mut out);
    }
    out.push_str("</svg>\n");
    out
}

/// Critical leaves as paths and critical polygons as filled closed paths.
pub fn render_major<I: ExactInt>(m: &PrimitiveMajor<I>, cfg: &RenderConfig) -> String {
    let disk = Disk::new(cfg);
    let mut out = header(cfg);
    disk_frame(cfg, &disk, &mut out);
    let accent = cfg.palette.colors().accent;
    for class in &m.classes {
        let v: Vec<f64> = class.angles.iter().map(Angle::to_f64).collect();
        if v.len() == 2 {
            leaf_path(&disk, v[0], v[1], cfg, accent, &mut out);
        } else {
            gap_path(&disk, &v, cfg, &mut out);
        }
    }
    out.push_str("</svg>\n");
    out
}

/// A lamination drawn over its major, e.g. b_i(m).
pub fn render_lift<I: ExactInt>(m: &PrimitiveMajor<I>, lam: &FiniteLamination<I>, cfg: &RenderConfig) -> String {
    let disk = Disk::new(cfg);
    let mut out = header(cfg);
    disk_frame(cfg, &disk, &mut out);
    let c = cfg.palette.colors();
    let major: Vec<Leaf<I>> = m.leaves();
    for l in &lam.leaves {
        let color = if major.contains(l) { c.accent } else { c.ink };
        leaf_path(&disk, l.a().to_f64(), l.b().to_f64(), cfg, color, &mut out);
    }
    out.push_str("</svg>\n");
    out
}

const MARGIN: f64 = 30.0;

/// Unit-square torus plot: one `cell` path per rectangle (wrapping pieces
/// are subpaths of the same element), the diagonal, and marker dots.
pub fn render_torus<I: ExactInt>(set: &RectangleSet<I>, markers: &[(Angle<I>, Angle<I>)], cfg: &RenderConfig) -> String {
    let c = cfg.palette.colors();
    let side = (cfg.width.min(cfg.height) as f64) - 2.0 * MARGIN;
    let sx = |x: f64| MARGIN + side * x;
    let sy = |y: f64| MARGIN + side * (1.0 - y);
    let mut out = header(cfg);
    let _ = writeln!(
        out,
        "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{side:.3}\" height=\"{side:.3}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.2}\"/>",
        MARGIN, MARGIN, c.ink, cfg.stroke_width
    );
    for r in &set.rects {
        let mut d = String::new();
        for (x0, x1) in unwrap_arc(&r.x.start, &r.x.len) {
            for (y0, y1) in unwrap_arc(&r.y.start, &r.y.len) {
                let _ = write!(
                    d,
                    "{}M {:.3} {:.3} H {:.3} V {:.3} H {:.3} Z",
                    if d.is_empty() { "" } else { " " },
                    sx(x0),
                    sy(y0),
                    sx(x1),
                    sy(y1),
                    sx(x0)
                );
            }
        }
        let _ = writeln!(
            out,
            "<path class=\"cell\" d=\"{d}\" fill=\"{}\" stroke=\"{}\" stroke-width=\"{:.2}\"/>",
            c.shade, c.ink, cfg.stroke_width * 0.5
        );
    }
    let _ = writeln!(
        out,
        "<line class=\"diagonal\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{}\" stroke-width=\"{:.2}\"/>",
        sx(0.0),
        sy(0.0),
        sx(1.0),
        sy(1.0),
        c.accent,
        cfg.stroke_width
    );
    for (x, y) in markers {
        let _ = writeln!(
            out,
            "<circle class=\"marker\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.2}\" fill=\"{}\"/>",
            sx(x.to_f64()),
            sy(y.to_f64()),
            2.0 * cfg.stroke_width,
            c.accent
        );
    }
    out.push_str("</svg>\n");
    out
}

/// [start, start + len] split at 1 into pieces inside [0, 1].
fn unwrap_arc<I: ExactInt>(start: &Angle<I>, len: &num_rational::Ratio<I>) -> Vec<(f64, f64)> {
    let s = start.to_f64();
    let e = s + ratio_to_f64(len);
    if e <= 1.0 {
        vec![(s, e)]
    } else {
        vec![(s, 1.0), (0.0, e - 1.0)]
    }
}

/// Scatter plot of entropy against θ over [0, theta_max].
pub fn render_entropy_plot(rows: &[SweepRow], cfg: &RenderConfig) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::EmptyInput("entropy plot needs at least one row".into()));
    }
    let c = cfg.palette.colors();
    let (w, h) = (cfg.width as f64, cfg.height as f64);
    let (left, right, top, bottom) = (50.0, w - 20.0, 20.0, h - 40.0);
    let sx = |t: f64| left + (right - left) * t / cfg.theta_max;
    let sy = |e: f64| bottom - (bottom - top) * e / LN_2;
    let mut out = header(cfg);
    let _ = writeln!(
        out,
        "<path class=\"axes\" d=\"M {left:.3} {top:.3} V {bottom:.3} H {right:.3}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{:.2}\"/>",
        c.ink, cfg.stroke_width
    );
    let ticks: &[(f64, &str)] = if cfg.theta_max <= 0.5 {
        &[(0.0, "0"), (0.25, "1/4"), (0.5, "1/2")]
    } else {
        &[(0.0, "0"), (0.25, "1/4"), (0.5, "1/2"), (0.75, "3/4"), (1.0, "1")]
    };
    for (t, label) in ticks {
        let _ = writeln!(
            out,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\" fill=\"{}\">{label}</text>",
            sx(*t),
            bottom + 16.0,
            c.ink
        );
    }
    for (e, label) in [(0.0, "0"), (LN_2, "log 2")] {
        let _ = writeln!(
            out,
            "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"end\" fill=\"{}\">{label}</text>",
            left - 6.0,
            sy(e) + 4.0,
            c.ink
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\" fill=\"{}\">θ</text>",
        (left + right) / 2.0,
        h - 8.0,
        c.ink
    );
    for r in rows.iter().filter(|r| r.theta() <= cfg.theta_max) {
        let _ = writeln!(
            out,
            "<circle class=\"point\" cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.2}\" fill=\"{}\"/>",
            sx(r.theta()),
            sy(r.entropy.clamp(0.0, LN_2)),
            1.2 * cfg.stroke_width,
            c.ink
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
