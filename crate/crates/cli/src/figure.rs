//! Static SVG figures on the fixed viewport `[−3.2, 3.2]²`.

use clap::ValueEnum;
use serde::Serialize;
use std::fmt::Write as _;

use minkconst::bisector::{inner_bisector, inner_projection, trace_bisector, BisectorTrace};
use minkconst::constants::estimate_cs;
use minkconst::ortho::{build_reflection, reflection_distortion};
use minkconst::{NormSpec, Point, Tolerances};

use crate::{CliError, CliResult, RunConfig};

/// Half-width of the drawing; reflected circles stay within gauge 3.
pub const EXTENT: f64 = 3.2;
const PIXELS: u32 = 640;
const CIRCLE_SAMPLES: usize = 720;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FigureKind {
    UnitCircle,
    BisectorTrace,
    InnerProjection,
    ReflectedCircle,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FigureData {
    pub trace: Option<BisectorTrace>,
    /// Points of `S` to mark, e.g. an inner projection.
    pub directions: Vec<Point>,
    pub marks: Vec<Point>,
    /// Axes `(x, y)` of a reflection `T_xy`.
    pub pair: Option<(Point, Point)>,
}

pub fn figure_data(
    norm: &NormSpec,
    kind: FigureKind,
    x: Option<Point>,
    y: Option<Point>,
    cfg: &RunConfig,
    tol: &Tolerances,
) -> CliResult<FigureData> {
    let need = |p: Option<Point>, name: &str| {
        p.ok_or_else(|| CliError::Validation(format!("{kind:?} figure needs --{name}")))
    };
    Ok(match kind {
        FigureKind::UnitCircle => FigureData {
            marks: x.into_iter().chain(y).collect(),
            ..Default::default()
        },
        FigureKind::BisectorTrace => {
            let (x, y) = (need(x, "x")?, need(y, "y")?);
            let trace = trace_bisector(norm, x, y, EXTENT, 2 * cfg.inner_resolution + 1, tol)?;
            FigureData {
                trace: Some(trace),
                marks: vec![x, y],
                ..Default::default()
            }
        }
        FigureKind::InnerProjection => {
            let x = norm.on_circle(need(x, "x")?);
            let trace = inner_bisector(norm, x, cfg.inner_resolution, tol)?;
            let proj = inner_projection(norm, x, cfg.inner_resolution, tol)?;
            FigureData {
                trace: Some(trace),
                directions: proj.direction_samples.iter().map(|c| c.point).collect(),
                ..Default::default()
            }
        }
        FigureKind::ReflectedCircle => {
            let pair = match (x, y) {
                (Some(x), Some(y)) => (x, y),
                (None, None) => {
                    let r = estimate_cs(norm, cfg.resolution, tol, cfg.parallelism())?;
                    (r.witness.x, r.witness.y)
                }
                _ => {
                    return Err(CliError::Validation(
                        "reflected-circle needs both --x and --y, or neither".into(),
                    ))
                }
            };
            FigureData {
                pair: Some(pair),
                ..Default::default()
            }
        }
    })
}

fn unit_circle(norm: &NormSpec) -> Vec<Point> {
    match norm.as_polygon() {
        Some(poly) => poly.vertices().to_vec(),
        None => (0..CIRCLE_SAMPLES)
            .map(|k| {
                norm.circle_point(std::f64::consts::TAU * k as f64 / CIRCLE_SAMPLES as f64)
                    .point
            })
            .collect(),
    }
}

/// Points at least a marker radius apart, first occurrence kept.
fn distinct(points: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for &p in points {
        if out.iter().all(|q| (p - *q).euclid() > 0.01) {
            out.push(p);
        }
    }
    out
}

fn num(t: f64) -> String {
    let s = format!("{t:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn coords(points: impl IntoIterator<Item = Point>) -> String {
    points
        .into_iter()
        .map(|p| format!("{},{}", num(p.u), num(p.v)))
        .collect::<Vec<_>>()
        .join(" ")
}

struct Svg(String);

impl Svg {
    fn new() -> Self {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PIXELS}" height="{PIXELS}" viewBox="{} {} {} {}">"#,
            -EXTENT,
            -EXTENT,
            2.0 * EXTENT,
            2.0 * EXTENT
        );
        s.push_str("<rect x=\"-3.2\" y=\"-3.2\" width=\"6.4\" height=\"6.4\" fill=\"white\"/>\n");
        // Mathematical orientation: v grows upwards.
        s.push_str("<g transform=\"scale(1,-1)\" fill=\"none\" stroke-linejoin=\"round\">\n");
        s.push_str("<line x1=\"-3.2\" y1=\"0\" x2=\"3.2\" y2=\"0\" stroke=\"#ccc\" stroke-width=\"0.006\"/>\n");
        s.push_str("<line x1=\"0\" y1=\"-3.2\" x2=\"0\" y2=\"3.2\" stroke=\"#ccc\" stroke-width=\"0.006\"/>\n");
        Svg(s)
    }

    fn closed(&mut self, pts: &[Point], color: &str, dashed: bool) {
        let dash = if dashed {
            " stroke-dasharray=\"0.04 0.04\""
        } else {
            ""
        };
        let _ = writeln!(
            self.0,
            "<polygon points=\"{}\" stroke=\"{color}\" stroke-width=\"0.015\"{dash}/>",
            coords(pts.iter().copied())
        );
    }

    fn open(&mut self, pts: &[Point], color: &str) {
        if pts.len() >= 2 {
            let _ = writeln!(
                self.0,
                "<polyline points=\"{}\" stroke=\"{color}\" stroke-width=\"0.015\"/>",
                coords(pts.iter().copied())
            );
        }
    }

    fn segment(&mut self, a: Point, b: Point, color: &str) {
        let _ = writeln!(
            self.0,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"0.008\"/>",
            num(a.u),
            num(a.v),
            num(b.u),
            num(b.v)
        );
    }

    fn mark(&mut self, p: Point, color: &str, r: f64) {
        let _ = writeln!(
            self.0,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{r}\" fill=\"{color}\"/>",
            num(p.u),
            num(p.v)
        );
    }

    fn finish(mut self) -> String {
        self.0.push_str("</g>\n</svg>\n");
        self.0
    }
}

pub fn render(norm: &NormSpec, kind: FigureKind, data: &FigureData) -> String {
    let mut svg = Svg::new();
    let circle = unit_circle(norm);
    svg.closed(&circle, "black", false);
    match kind {
        FigureKind::UnitCircle => {}
        FigureKind::BisectorTrace | FigureKind::InnerProjection => {
            if let Some(trace) = &data.trace {
                let lo: Vec<Point> = trace.samples.iter().map(|s| s.point).collect();
                let hi: Vec<Point> = trace
                    .samples
                    .iter()
                    .map(|s| s.segment_hi.unwrap_or(s.point))
                    .collect();
                svg.open(&lo, "#1f5fa8");
                if trace.samples.iter().any(|s| s.segment_hi.is_some()) {
                    svg.open(&hi, "#1f5fa8");
                    for s in &trace.samples {
                        if let Some(h) = s.segment_hi {
                            svg.segment(s.point, h, "#8fb3dc");
                        }
                    }
                }
            }
            for d in distinct(&data.directions) {
                svg.mark(d, "#d0542c", 0.025);
            }
        }
        FigureKind::ReflectedCircle => {
            if let Some((x, y)) = data.pair {
                if let Ok(t) = build_reflection(x, y) {
                    let image: Vec<Point> = circle.iter().map(|&p| t.apply(p)).collect();
                    svg.closed(&image, "#1f5fa8", true);
                    let dist = reflection_distortion(norm, &t);
                    svg.mark(dist.argsup, "#888", 0.035);
                    svg.mark(t.apply(dist.argsup), "#1f5fa8", 0.035);
                }
                svg.mark(norm.normalize(x), "#d0542c", 0.045);
                svg.mark(norm.normalize(y), "#2c9d4b", 0.045);
            }
        }
    }
    for &m in &data.marks {
        svg.mark(m, "#d0542c", 0.045);
    }
    svg.finish()
}
