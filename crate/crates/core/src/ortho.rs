//! The generalized sine function, the Birkhoff / isosceles / Roberts
//! predicates and the linear reflections `T_xy`.

use serde::Serialize;
use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{exact, Point};
use crate::minimize::{golden_section, Minimum};
use crate::norm::NormSpec;
use crate::tolerances::Tolerances;

/// Grid used to bracket extrema over the circle for non-polygonal norms.
const CIRCLE_SCAN: usize = 1024;
const KNOT_OVERSAMPLING: usize = 4;

/// `s(x, y) = inf_t ‖x + t·y‖` for unit-normalized arguments.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SineResult {
    pub value: f64,
    pub minimizer_t: f64,
    pub bracket: (f64, f64),
}

/// Linear involution with `T(axis_x) = axis_x` and `T(axis_y) = -axis_y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReflectionMap {
    pub m: [[f64; 2]; 2],
    pub axis_x: Point,
    pub axis_y: Point,
}

impl ReflectionMap {
    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.m[0][0] * p.u + self.m[0][1] * p.v,
            self.m[1][0] * p.u + self.m[1][1] * p.v,
        )
    }
}

/// Extremes of the norm over the reflected circle `T(S)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Distortion {
    /// `max_{z ∈ S} ‖T z‖`.
    pub sup: f64,
    /// `1 / sup`, by the reciprocity of an involution.
    pub inf: f64,
    /// `min_{w ∈ S} ‖T w‖` found by direct minimization (cross-check).
    pub inf_direct: f64,
    /// A point of `S` attaining `sup`.
    pub argsup: Point,
}

impl Distortion {
    /// `sup − inf` over `T(S)`.
    pub fn spread(&self) -> f64 {
        self.sup - self.inf
    }
}

fn nonzero(p: Point) -> Result<Point> {
    if p.is_zero() || !p.is_finite() {
        Err(Error::ZeroVector)
    } else {
        Ok(p)
    }
}

/// Minimizes `t ↦ ‖x + t·y‖` after normalizing both arguments.
pub fn sine(norm: &NormSpec, x: Point, y: Point) -> Result<SineResult> {
    let x = norm.normalize(nonzero(x)?);
    let y = norm.normalize(nonzero(y)?);
    if let Some(poly) = norm.as_polygon() {
        // Piecewise linear and convex: the minimum sits where the ray x + t·y
        // crosses a vertex direction.
        let mut best = SineResult {
            value: 1.0,
            minimizer_t: 0.0,
            bracket: (0.0, 0.0),
        };
        for &v in poly.vertices() {
            let den = v.cross(y);
            if den == 0.0 {
                continue;
            }
            let t = -v.cross(x) / den;
            let value = norm.gauge(x + y * t);
            if value < best.value {
                best = SineResult {
                    value,
                    minimizer_t: t,
                    bracket: (t, t),
                };
            }
        }
        return Ok(best);
    }
    // For unit arguments and |t| ≥ 2, ‖x + t·y‖ ≥ |t| − 1 ≥ 1 = ‖x‖.
    let m = golden_section(|t| norm.gauge(x + y * t), -2.0, 2.0, 1e-12);
    let (minimizer_t, value) = if m.value <= 1.0 {
        (m.arg, m.value)
    } else {
        (0.0, 1.0)
    };
    Ok(SineResult {
        value,
        minimizer_t,
        bracket: m.bracket,
    })
}

/// `x ⊣_B y`: `‖x + t·y‖ ≥ ‖x‖` for every real `t`.
pub fn birkhoff_test(norm: &NormSpec, x: Point, y: Point, tol: &Tolerances) -> Result<bool> {
    Ok(sine(norm, x, y)?.value >= 1.0 - tol.tol_orth)
}

/// `x ⊣_I y`: `‖x + y‖ = ‖x − y‖`.
pub fn isosceles_test(norm: &NormSpec, x: Point, y: Point, tol: &Tolerances) -> Result<bool> {
    nonzero(x)?;
    nonzero(y)?;
    Ok((norm.gauge(x + y) - norm.gauge(x - y)).abs() <= tol.tol_orth)
}

/// Coefficients of `T` solving `T x = x`, `T y = −y`.
pub fn build_reflection(x: Point, y: Point) -> Result<ReflectionMap> {
    nonzero(x)?;
    nonzero(y)?;
    if exact::cross_sign(x, y) == Ordering::Equal {
        return Err(Error::CollinearAxes);
    }
    let det = x.cross(y);
    let m = [
        [(x.u * y.v + y.u * x.v) / det, -2.0 * x.u * y.u / det],
        [2.0 * x.v * y.v / det, -(x.v * y.u + y.v * x.u) / det],
    ];
    Ok(ReflectionMap {
        m,
        axis_x: x,
        axis_y: y,
    })
}

/// Largest deviation of `‖T z‖` from one over the test points of `S`:
/// polygon vertices (sufficient, since `T` is linear) or a radial grid.
pub fn invariance_defect(norm: &NormSpec, t: &ReflectionMap, n_grid: usize) -> f64 {
    let dev = |z: Point| (norm.gauge(t.apply(z)) - 1.0).abs();
    match norm.as_polygon() {
        Some(poly) => poly.vertices().iter().map(|&v| dev(v)).fold(0.0, f64::max),
        None => (0..n_grid)
            .map(|k| dev(norm.circle_point(PI * k as f64 / n_grid as f64).point))
            .fold(0.0, f64::max),
    }
}

/// `x ⊣_R y`, decided through invariance of `S` under `T_xy`.
///
/// On non-polygonal norms this is a semi-decision on a grid of
/// `tol.n_roberts` directions.
pub fn roberts_test(norm: &NormSpec, x: Point, y: Point, tol: &Tolerances) -> Result<bool> {
    let t = build_reflection(x, y)?;
    Ok(invariance_defect(norm, &t, tol.n_roberts) <= tol.tol_orth)
}

/// `sup_{z ∈ S} ‖T z‖` and the matching infimum.
pub fn reflection_distortion(norm: &NormSpec, t: &ReflectionMap) -> Distortion {
    let g = |z: Point| norm.gauge(t.apply(z));
    let (sup, argsup, inf_direct) = match norm.as_polygon() {
        Some(poly) => {
            let (argsup, sup) = poly.vertices().iter().map(|&v| (v, g(v))).fold(
                (Point::ORIGIN, f64::NEG_INFINITY),
                |a, b| if b.1 > a.1 { b } else { a },
            );
            // The gauge is convex along each edge image.
            let inf_direct = poly
                .polygon()
                .edges()
                .map(|e| golden_section(|s| g(e.a.lerp(e.b, s)), 0.0, 1.0, 1e-13).value)
                .fold(f64::INFINITY, f64::min);
            (sup, argsup, inf_direct)
        }
        None => {
            let on_circle = |theta: f64| norm.circle_point(theta).point;
            // Interpolated gauges ripple at the knot spacing; sample each ripple.
            let scan = match norm {
                NormSpec::Sampled(s) => CIRCLE_SCAN.max(2 * KNOT_OVERSAMPLING * s.pairs().len()),
                _ => CIRCLE_SCAN,
            };
            let hi = half_turn_minimum(|th| -g(on_circle(th)), scan);
            let lo = half_turn_minimum(|th| g(on_circle(th)), scan);
            (-hi.value, on_circle(hi.arg), lo.value)
        }
    };
    Distortion {
        sup,
        inf: 1.0 / sup,
        inf_direct,
        argsup,
    }
}

/// Minimum of a `π`-periodic function: best node of a uniform grid, then
/// golden section on the two neighbouring cells (which may straddle 0).
fn half_turn_minimum(f: impl Fn(f64) -> f64, scan: usize) -> Minimum {
    let h = PI / scan as f64;
    let (k, best) = (0..scan)
        .map(|k| (k, f(h * k as f64)))
        .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let center = h * k as f64;
    let m = golden_section(&f, center - h, center + h, 1e-14);
    if m.value <= best {
        m
    } else {
        Minimum {
            arg: center,
            value: best,
            bracket: (center - h, center + h),
        }
    }
}
