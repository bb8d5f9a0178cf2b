//! Points, segments, lines and convex polygons of the plane.
//!
//! Combinatorial questions (parallelism of polygon edges, convex position,
//! collinearity) are answered exactly through [`exact`]; metric quantities
//! stay in `f64`.

pub mod exact;
mod polygon;

pub use polygon::{convex_hull, ConvexPolygon};

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A point (or vector) of the plane in fixed coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub u: f64,
    pub v: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { u: 0.0, v: 0.0 };

    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    /// Unit Euclidean vector at polar angle `theta`.
    pub fn polar(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.u * other.u + self.v * other.v
    }

    pub fn cross(self, other: Point) -> f64 {
        cross(self, other)
    }

    /// Euclidean length; only used for tolerances and drawing.
    pub fn euclid(self) -> f64 {
        self.u.hypot(self.v)
    }

    /// Polar angle in `(-π, π]`.
    pub fn angle(self) -> f64 {
        self.v.atan2(self.u)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.v, self.u)
    }

    pub fn is_zero(self) -> bool {
        self.u == 0.0 && self.v == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }

    pub fn midpoint(self, other: Point) -> Point {
        (self + other) * 0.5
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).euclid()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.u + o.u, self.v + o.v)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.u - o.u, self.v - o.v)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.u, -self.v)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.u * k, self.v * k)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        p * self
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, k: f64) -> Point {
        Point::new(self.u / k, self.v / k)
    }
}

impl From<[f64; 2]> for Point {
    fn from([u, v]: [f64; 2]) -> Self {
        Point::new(u, v)
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.u, p.v]
    }
}

/// `a.u·b.v − a.v·b.u`; zero iff `a` and `b` are linearly dependent.
pub fn cross(a: Point, b: Point) -> f64 {
    a.u * b.v - a.v * b.u
}

/// Closed segment `[a b]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn direction(&self) -> Point {
        self.b - self.a
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(self.b)
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b, self.a)
    }
}

/// Line `base + s·dir`; with `ray` set, only `s ≥ 0` belongs to it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub base: Point,
    pub dir: Point,
    pub ray: bool,
}

impl Line {
    pub fn new(base: Point, dir: Point) -> Result<Self> {
        if dir.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            base,
            dir,
            ray: false,
        })
    }

    /// Half-line `[a b⟩` from `a` through `b`.
    pub fn half_line(a: Point, b: Point) -> Result<Self> {
        Ok(Self {
            ray: true,
            ..Self::new(a, b - a)?
        })
    }

    pub fn at(&self, s: f64) -> Point {
        self.base + self.dir * s
    }

    /// Euclidean distance from `p` to the line (or ray).
    pub fn euclid_distance(&self, p: Point) -> f64 {
        let w = p - self.base;
        let len2 = self.dir.dot(self.dir);
        let mut s = w.dot(self.dir) / len2;
        if self.ray && s < 0.0 {
            s = 0.0;
        }
        (w - self.dir * s).euclid()
    }
}

/// How parallelism of directions is decided.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Arithmetic {
    /// Exact rational cross product; for polygon data.
    Exact,
    /// Sine of the angle between directions at most `tol_dir`.
    Floating { tol_dir: f64 },
}

/// Whether two nondegenerate segments have linearly dependent directions.
pub fn segments_parallel(s1: &Segment, s2: &Segment, arith: Arithmetic) -> Result<bool> {
    if s1.is_degenerate() || s2.is_degenerate() {
        return Err(Error::DegenerateSegment);
    }
    Ok(match arith {
        Arithmetic::Exact => exact::direction_cross_sign(s1.a, s1.b, s2.a, s2.b) == Ordering::Equal,
        Arithmetic::Floating { tol_dir } => {
            directions_parallel(s1.direction(), s2.direction(), tol_dir)
        }
    })
}

/// Floating-point parallelism: `|sin ∠(d1, d2)| ≤ tol_dir`.
pub fn directions_parallel(d1: Point, d2: Point, tol_dir: f64) -> bool {
    let scale = d1.euclid() * d2.euclid();
    cross(d1, d2).abs() <= tol_dir * scale
}

/// Orders four distinct points counterclockwise around their convex hull,
/// starting at `a`, or returns `None` when they are not in convex position.
pub fn convex_quadrilateral_order(a: Point, b: Point, c: Point, d: Point) -> Option<[Point; 4]> {
    // A quadruple is in convex position iff one of the three cyclic orders
    // turns strictly the same way at every corner.
    for cand in [[a, b, c, d], [a, b, d, c], [a, c, b, d]] {
        let turns: Vec<Ordering> = (0..4)
            .map(|i| exact::orient(cand[i], cand[(i + 1) % 4], cand[(i + 2) % 4]))
            .collect();
        if turns.iter().all(|&t| t == Ordering::Greater) {
            return Some(cand);
        }
        if turns.iter().all(|&t| t == Ordering::Less) {
            return Some([cand[0], cand[3], cand[2], cand[1]]);
        }
    }
    None
}
