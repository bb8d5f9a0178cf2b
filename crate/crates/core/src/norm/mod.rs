//! The norm of the plane, given by its unit ball.
//!
//! A [`NormSpec`] evaluates the gauge (Minkowski functional) of its ball,
//! parametrizes the unit circle `S` radially, reports the segments of `S`
//! and answers supporting-line queries.

mod io;
mod spline;

pub use io::NormFile;
pub use spline::PeriodicSpline;

use serde::Serialize;
use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::{directions_parallel, exact, ConvexPolygon, Point, Segment};
use crate::minimize::golden_section;

/// Location tolerance (relative) when snapping a floating point of a
/// polygonal circle onto a vertex.
const VERTEX_SNAP: f64 = 1e-12;

/// A symmetric convex unit ball.
#[derive(Clone, Debug, PartialEq)]
pub enum NormSpec {
    Polygon(PolygonNorm),
    Lp(LpNorm),
    Euclidean,
    Sampled(SampledGauge),
}

/// Polygonal unit ball together with its facet covectors `h_i`
/// (`h_i · z = 1` on edge `i`), so that `‖z‖ = max_i h_i · z`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonNorm {
    polygon: ConvexPolygon,
    facets: Vec<Point>,
    /// Vertex angles in `[0, 2π)`.
    angles: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpNorm {
    p: f64,
    /// The `p = 1` ball is the diamond; kept for its polygon structure.
    diamond: Option<PolygonNorm>,
}

/// Unit ball known through samples `(θ_k, r_k)` of its radial function.
///
/// Between samples the reciprocal radius (the gauge of the unit Euclidean
/// direction) is a periodic cubic spline. Flat spots found on such a ball
/// are heuristic.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledGauge {
    pairs: Vec<(f64, f64)>,
    spline: PeriodicSpline,
    tol_dir: f64,
}

/// A point of the unit circle with its radial angle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CirclePoint {
    pub theta: f64,
    pub point: Point,
}

/// A nondegenerate segment contained in the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlatSpot {
    pub segment: Segment,
    pub maximal: bool,
    /// False for segments detected on sampled data.
    pub exact: bool,
}

/// Directions `d` (unit gauge, oriented so that `x × d > 0`) for which the
/// line `x + t·d` supports the unit ball at `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SupportSet {
    Unique(Point),
    /// Closed cone at a polygon vertex, from the incoming edge direction to
    /// the outgoing one.
    Cone {
        from: Point,
        to: Point,
    },
}

impl SupportSet {
    /// `n` directions across the set, endpoints included.
    pub fn fan(&self, norm: &NormSpec, n: usize) -> Vec<Point> {
        match *self {
            SupportSet::Unique(d) => vec![d],
            SupportSet::Cone { from, to } => {
                let n = n.max(2);
                (0..n)
                    .map(|k| {
                        if k == 0 {
                            from
                        } else if k == n - 1 {
                            to
                        } else {
                            norm.normalize(from.lerp(to, k as f64 / (n - 1) as f64))
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn contains(&self, d: Point, tol_dir: f64) -> bool {
        match *self {
            SupportSet::Unique(e) => directions_parallel(d, e, tol_dir),
            SupportSet::Cone { from, to } => {
                // d or -d inside the cone spanned by `from` and `to`.
                let inside = |d: Point| {
                    let s = from.euclid() * d.euclid();
                    from.cross(d) >= -tol_dir * s
                        && d.cross(to) >= -tol_dir * s
                        && from.dot(d) + d.dot(to) > 0.0
                };
                inside(d) || inside(-d)
            }
        }
    }
}

/// Where a point of a polygonal circle sits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PolygonLocation {
    Vertex(usize),
    /// Relative interior of edge `i`.
    Edge(usize),
}

impl PolygonNorm {
    /// Wraps a canonical polygon; it must be centrally symmetric.
    pub fn new(polygon: ConvexPolygon) -> Result<Self> {
        if !polygon.is_centrally_symmetric() {
            let n = polygon.len();
            let bad = (0..n)
                .find(|&i| !polygon.vertices().contains(&-polygon.vertex(i)))
                .unwrap_or(0);
            return Err(Error::invalid_vertex(
                "vertex has no antipodal partner",
                bad,
                polygon.vertex(bad),
            ));
        }
        let facets = polygon
            .edges()
            .map(|e| {
                let d = e.direction();
                let normal = Point::new(d.v, -d.u);
                normal / normal.dot(e.a)
            })
            .collect();
        let angles = polygon
            .vertices()
            .iter()
            .map(|v| v.angle().rem_euclid(TAU))
            .collect();
        Ok(Self {
            polygon,
            facets,
            angles,
        })
    }

    pub fn polygon(&self) -> &ConvexPolygon {
        &self.polygon
    }

    pub fn vertices(&self) -> &[Point] {
        self.polygon.vertices()
    }

    pub fn facets(&self) -> &[Point] {
        &self.facets
    }

    /// The vertex on the ray at angle `theta`, if any (up to rounding of
    /// the angle itself).
    pub fn vertex_at(&self, theta: f64) -> Option<Point> {
        let t = theta.rem_euclid(TAU);
        self.angles
            .iter()
            .position(|&a| {
                let d = (a - t).abs();
                d.min(TAU - d) <= 1e-14
            })
            .map(|i| self.polygon.vertex(i))
    }

    pub fn gauge(&self, p: Point) -> f64 {
        self.facets.iter().fold(0.0_f64, |m, h| m.max(h.dot(p)))
    }

    /// Locates a unit vector on the polygon boundary.
    pub fn locate(&self, x: Point) -> PolygonLocation {
        let n = self.polygon.len();
        let mut best = (0, f64::NEG_INFINITY, 0.5);
        for i in 0..n {
            let a = self.polygon.vertex(i);
            let b = self.polygon.vertex(i + 1);
            let det = a.cross(b);
            let beta = a.cross(x) / det;
            let alpha = x.cross(b) / det;
            let score = alpha.min(beta);
            if score > best.1 {
                best = (i, score, beta / (alpha + beta));
            }
        }
        let (i, _, frac) = best;
        if frac <= VERTEX_SNAP {
            PolygonLocation::Vertex(i)
        } else if frac >= 1.0 - VERTEX_SNAP {
            PolygonLocation::Vertex((i + 1) % n)
        } else {
            PolygonLocation::Edge(i)
        }
    }

    fn support_set(&self, x: Point) -> SupportSet {
        let n = self.polygon.len();
        let unit = |d: Point| d / self.gauge(d);
        match self.locate(x) {
            PolygonLocation::Edge(i) => SupportSet::Unique(unit(self.polygon.edge(i).direction())),
            PolygonLocation::Vertex(i) => SupportSet::Cone {
                from: unit(self.polygon.edge(i + n - 1).direction()),
                to: unit(self.polygon.edge(i).direction()),
            },
        }
    }

    /// Point of the circle farthest to the left of `d`; the midpoint of the
    /// edge when an edge is parallel to `d`.
    fn left_support(&self, d: Point) -> Point {
        let n = self.polygon.len();
        for i in 0..n {
            let e = self.polygon.edge(i);
            if exact::direction_cross_sign(Point::ORIGIN, d, e.a, e.b) == Ordering::Equal
                && exact::direction_dot_sign(Point::ORIGIN, d, e.a, e.b) == Ordering::Less
            {
                // Counterclockwise edges run against `d` on its left side.
                return e.midpoint();
            }
        }
        *self
            .vertices()
            .iter()
            .max_by(|a, b| d.cross(**a).total_cmp(&d.cross(**b)))
            .expect("nonempty polygon")
    }
}

impl LpNorm {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p >= 1.0) {
            return Err(Error::invalid_norm(format!(
                "L_p exponent must be finite and >= 1, got {p}"
            )));
        }
        let diamond = if p == 1.0 {
            let v = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]].map(Point::from);
            Some(PolygonNorm::new(ConvexPolygon::from_cycle(&v)?)?)
        } else {
            None
        };
        Ok(Self { p, diamond })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gauge(&self, pt: Point) -> f64 {
        let (a, b) = (pt.u.abs(), pt.v.abs());
        if self.p == 1.0 {
            return a + b;
        }
        if self.p == 2.0 {
            return a.hypot(b);
        }
        let m = a.max(b);
        if m == 0.0 {
            return 0.0;
        }
        m * ((a / m).powf(self.p) + (b / m).powf(self.p)).powf(1.0 / self.p)
    }

    /// Gradient direction of the gauge at `x` (up to a positive factor).
    fn gradient(&self, x: Point) -> Point {
        let g = |c: f64| c.signum() * c.abs().powf(self.p - 1.0);
        Point::new(g(x.u), g(x.v))
    }

    fn support_point(&self, ell: Point) -> Point {
        let q = self.p / (self.p - 1.0);
        let g = |c: f64| c.signum() * c.abs().powf(q - 1.0);
        let z = Point::new(g(ell.u), g(ell.v));
        z / self.gauge(z)
    }
}

impl SampledGauge {
    /// `pairs` are `(θ, r)` radial samples. A half circle (all `θ < π`) is
    /// mirrored; a full circle must already be symmetric.
    pub fn new(pairs: &[(f64, f64)], tol_dir: f64) -> Result<Self> {
        if pairs.len() < 3 {
            return Err(Error::invalid_norm("need at least three radial samples"));
        }
        let mut norm: Vec<(usize, f64, f64)> = Vec::with_capacity(2 * pairs.len());
        for (i, &(theta, r)) in pairs.iter().enumerate() {
            if !(theta.is_finite() && r.is_finite()) {
                return Err(Error::invalid_vertex(
                    "non-finite sample",
                    i,
                    Point::new(theta, r),
                ));
            }
            if r <= 0.0 {
                return Err(Error::invalid_vertex(
                    "radius must be positive",
                    i,
                    Point::new(theta, r),
                ));
            }
            norm.push((i, theta.rem_euclid(TAU), r));
        }
        let half = norm.iter().all(|&(_, t, _)| t < PI);
        if half {
            let mirrored: Vec<_> = norm.iter().map(|&(i, t, r)| (i, t + PI, r)).collect();
            norm.extend(mirrored);
        }
        norm.sort_by(|a, b| a.1.total_cmp(&b.1));
        for w in norm.windows(2) {
            if w[1].1 - w[0].1 <= 0.0 {
                return Err(Error::invalid_vertex(
                    "duplicate sample angle",
                    w[1].0,
                    Point::new(w[1].1, w[1].2),
                ));
            }
        }
        let knots: Vec<f64> = norm.iter().map(|s| s.1).collect();
        let values: Vec<f64> = norm.iter().map(|s| 1.0 / s.2).collect();
        let spline = PeriodicSpline::new(knots, values);

        for &(i, t, r) in &norm {
            let partner = 1.0 / spline.eval(t + PI);
            if (partner - r).abs() > 1e-6 * r {
                return Err(Error::invalid_vertex(
                    "radial samples are not centrally symmetric",
                    i,
                    Point::new(t, r),
                ));
            }
        }
        let pts: Vec<Point> = norm.iter().map(|&(_, t, r)| Point::polar(t) * r).collect();
        let n = pts.len();
        for k in 0..n {
            let a = pts[(k + n - 1) % n];
            let b = pts[k];
            let c = pts[(k + 1) % n];
            let (e1, e2) = (b - a, c - b);
            if e1.cross(e2) < -1e-12 * e1.euclid() * e2.euclid() {
                return Err(Error::invalid_vertex(
                    "radial body is not convex",
                    norm[k].0,
                    Point::new(norm[k].1, norm[k].2),
                ));
            }
        }
        Ok(Self {
            pairs: norm.iter().map(|&(_, t, r)| (t, r)).collect(),
            spline,
            tol_dir,
        })
    }

    /// Full-circle samples in angular order.
    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn gauge(&self, p: Point) -> f64 {
        let r = p.euclid();
        if r == 0.0 {
            return 0.0;
        }
        r * self.spline.eval(p.angle())
    }

    fn sample_points(&self) -> Vec<Point> {
        self.pairs
            .iter()
            .map(|&(t, r)| Point::polar(t) * r)
            .collect()
    }

    fn flat_spots(&self) -> Vec<FlatSpot> {
        let pts = self.sample_points();
        let n = pts.len();
        let chord = |k: usize| pts[(k + 1) % n] - pts[k % n];
        let joined = |k: usize| {
            let (c1, c2) = (chord(k), chord(k + 1));
            c1.dot(c2) > 0.0 && directions_parallel(c1, c2, self.tol_dir)
        };
        let flags: Vec<bool> = (0..n).map(joined).collect();
        if flags.iter().all(|&f| f) {
            return Vec::new();
        }
        // Start scanning right after a break so runs do not wrap.
        let start = (0..n).find(|&k| !flags[k]).unwrap() + 1;
        let mut spots = Vec::new();
        let mut k = 0;
        while k < n {
            let i = (start + k) % n;
            if flags[i] {
                let first = i;
                let mut len = 0;
                while k < n && flags[(start + k) % n] {
                    k += 1;
                    len += 1;
                }
                let a = pts[first];
                let b = pts[(first + len + 1) % n];
                spots.push(FlatSpot {
                    segment: Segment::new(a, b),
                    maximal: true,
                    exact: false,
                });
            } else {
                k += 1;
            }
        }
        spots
    }

    /// Tangent direction of the circle at radial angle `theta`.
    fn tangent(&self, theta: f64) -> Point {
        let g = self.spline.eval(theta);
        let dg = self.spline.derivative(theta);
        let e = Point::polar(theta);
        e.perp() / g - e * (dg / (g * g))
    }
}

impl NormSpec {
    pub fn euclidean() -> Self {
        NormSpec::Euclidean
    }

    pub fn lp(p: f64) -> Result<Self> {
        Ok(NormSpec::Lp(LpNorm::new(p)?))
    }

    /// Polygon from a full symmetric vertex cycle, or from one half of it
    /// (no vertex has its antipode listed), which is then mirrored.
    pub fn polygon(vertices: &[Point]) -> Result<Self> {
        Ok(NormSpec::Polygon(io::polygon_from_list(vertices)?))
    }

    /// The max-coordinate ball with vertices `(±1, ±1)`.
    pub fn square() -> Self {
        Self::polygon(&[Point::new(1.0, 1.0), Point::new(-1.0, 1.0)]).expect("square")
    }

    /// Regular `k`-gon (`k` even) with circumradius one and a vertex at
    /// angle `phase`.
    pub fn regular_polygon(k: usize, phase: f64) -> Result<Self> {
        if k < 4 || k % 2 == 1 {
            return Err(Error::InvalidArgument(format!(
                "regular polygon needs an even vertex count >= 4, got {k}"
            )));
        }
        let half: Vec<Point> = (0..k / 2)
            .map(|j| Point::polar(phase + TAU * j as f64 / k as f64))
            .collect();
        Self::polygon(&half)
    }

    pub fn hexagon() -> Self {
        Self::regular_polygon(6, 0.0).expect("hexagon")
    }

    /// Sampled gauge of the ellipse `A·(unit disc)` with semi-axes `a`, `b`
    /// rotated by `rotation`, on `n` equally spaced angles.
    pub fn sampled_ellipse(a: f64, b: f64, rotation: f64, n: usize) -> Result<Self> {
        let pairs: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let theta = TAU * k as f64 / n as f64;
                let local = Point::polar(theta - rotation);
                let g = ((local.u / a).powi(2) + (local.v / b).powi(2)).sqrt();
                (theta, 1.0 / g)
            })
            .collect();
        Ok(NormSpec::Sampled(SampledGauge::new(&pairs, 1e-9)?))
    }

    pub fn sampled(pairs: &[(f64, f64)]) -> Result<Self> {
        Ok(NormSpec::Sampled(SampledGauge::new(pairs, 1e-9)?))
    }

    /// Image of a polygonal ball under the linear map `m` (row-major).
    pub fn linear_image(&self, m: [[f64; 2]; 2]) -> Result<Self> {
        let apply =
            |p: Point| Point::new(m[0][0] * p.u + m[0][1] * p.v, m[1][0] * p.u + m[1][1] * p.v);
        match self {
            NormSpec::Polygon(poly) => {
                let n = poly.vertices().len();
                let half: Vec<Point> = poly.vertices()[..n / 2].iter().map(|&p| apply(p)).collect();
                Self::polygon(&half)
            }
            _ => Err(Error::InvalidArgument(
                "linear images are only built for polygonal balls".into(),
            )),
        }
    }

    /// Polygon structure, if the ball is a polygon (including `L_1`).
    pub fn as_polygon(&self) -> Option<&PolygonNorm> {
        match self {
            NormSpec::Polygon(p) => Some(p),
            NormSpec::Lp(lp) => lp.diamond.as_ref(),
            _ => None,
        }
    }

    pub fn is_sampled(&self) -> bool {
        matches!(self, NormSpec::Sampled(_))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            NormSpec::Polygon(_) => "polygon",
            NormSpec::Lp(_) => "lp",
            NormSpec::Euclidean => "euclidean",
            NormSpec::Sampled(_) => "sampled",
        }
    }

    /// The Minkowski functional `inf{λ > 0 : p ∈ λB}`.
    pub fn gauge(&self, p: Point) -> f64 {
        match self {
            NormSpec::Polygon(poly) => poly.gauge(p),
            NormSpec::Lp(lp) => lp.gauge(p),
            NormSpec::Euclidean => p.u.hypot(p.v),
            NormSpec::Sampled(s) => s.gauge(p),
        }
    }

    /// Rescales a nonzero vector to unit gauge.
    pub fn normalize(&self, p: Point) -> Point {
        p / self.gauge(p)
    }

    /// The point of `S` on the ray at angle `theta`.
    pub fn circle_point(&self, theta: f64) -> CirclePoint {
        // Vertices come back exactly, not through the radial division.
        if let Some(v) = self.as_polygon().and_then(|p| p.vertex_at(theta)) {
            return CirclePoint { theta, point: v };
        }
        let e = Point::polar(theta);
        CirclePoint {
            theta,
            point: e / self.gauge(e),
        }
    }

    /// Wraps a unit vector as a circle point.
    pub fn on_circle(&self, p: Point) -> CirclePoint {
        let point = self.normalize(p);
        CirclePoint {
            theta: point.angle().rem_euclid(TAU),
            point,
        }
    }

    /// The nondegenerate segments of `S`.
    pub fn flat_spots(&self) -> Vec<FlatSpot> {
        match self {
            NormSpec::Euclidean => Vec::new(),
            NormSpec::Lp(_) | NormSpec::Polygon(_) => match self.as_polygon() {
                Some(poly) => poly
                    .polygon()
                    .edges()
                    .map(|segment| FlatSpot {
                        segment,
                        maximal: true,
                        exact: true,
                    })
                    .collect(),
                None => Vec::new(),
            },
            NormSpec::Sampled(s) => s.flat_spots(),
        }
    }

    /// Supporting directions at a unit vector `x`.
    pub fn supporting_directions(&self, x: Point) -> SupportSet {
        if let Some(poly) = self.as_polygon() {
            return poly.support_set(x);
        }
        let tangent = match self {
            NormSpec::Euclidean => x.perp(),
            NormSpec::Lp(lp) => lp.gradient(x).perp(),
            NormSpec::Sampled(s) => s.tangent(x.angle()),
            NormSpec::Polygon(_) => unreachable!(),
        };
        let d = if x.cross(tangent) < 0.0 {
            -tangent
        } else {
            tangent
        };
        SupportSet::Unique(self.normalize(d))
    }

    /// Unit vector `n` with `n ⊣_B d` lying to the left of `d`: the point of
    /// `S` maximizing `d × n` (an edge midpoint when that maximum is a
    /// segment of a polygonal circle).
    pub fn left_support(&self, d: Point) -> Point {
        if let Some(poly) = self.as_polygon() {
            return poly.left_support(d);
        }
        let ell = d.perp();
        match self {
            NormSpec::Euclidean => ell / ell.euclid(),
            NormSpec::Lp(lp) => lp.support_point(ell),
            NormSpec::Sampled(_) => {
                let center = ell.angle();
                let m = golden_section(
                    |t| -ell.dot(self.circle_point(t).point),
                    center - 0.5 * PI,
                    center + 0.5 * PI,
                    1e-14,
                );
                self.circle_point(m.arg).point
            }
            NormSpec::Polygon(_) => unreachable!(),
        }
    }

    /// Segment of `S` parallel to `d`, oriented so that `b - a` points along
    /// `d`, if any.
    pub fn parallel_flat_spot(&self, d: Point) -> Option<FlatSpot> {
        if let Some(poly) = self.as_polygon() {
            return poly.polygon().edges().find_map(|e| {
                let same_line =
                    exact::direction_cross_sign(Point::ORIGIN, d, e.a, e.b) == Ordering::Equal;
                let forward =
                    exact::direction_dot_sign(Point::ORIGIN, d, e.a, e.b) == Ordering::Greater;
                (same_line && forward).then_some(FlatSpot {
                    segment: e,
                    maximal: true,
                    exact: true,
                })
            });
        }
        let tol_dir = match self {
            NormSpec::Sampled(s) => s.tol_dir,
            _ => return None,
        };
        self.flat_spots().into_iter().find_map(|f| {
            let e = f.segment.direction();
            if !directions_parallel(d, e, tol_dir) {
                return None;
            }
            Some(if e.dot(d) > 0.0 {
                f
            } else {
                FlatSpot {
                    segment: Segment::new(-f.segment.a, -f.segment.b),
                    ..f
                }
            })
        })
    }

    /// Angles (in `[0, π)`) of polygon vertices and edge midpoints; empty
    /// for non-polygonal balls.
    pub fn feature_angles(&self) -> Vec<f64> {
        let Some(poly) = self.as_polygon() else {
            return Vec::new();
        };
        let mut out: Vec<f64> = poly
            .polygon()
            .edges()
            .flat_map(|e| [e.a.angle(), e.midpoint().angle()])
            .map(|t| t.rem_euclid(PI))
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Canonical file representation (full vertex list / sample list).
    pub fn to_file(&self) -> NormFile {
        match self {
            NormSpec::Polygon(poly) => NormFile::Polygon {
                vertices: poly.vertices().iter().map(|&p| p.into()).collect(),
            },
            NormSpec::Lp(lp) => NormFile::Lp { p: lp.p },
            NormSpec::Euclidean => NormFile::Euclidean,
            NormSpec::Sampled(s) => NormFile::Sampled {
                pairs: s.pairs.iter().map(|&(t, r)| [t, r]).collect(),
            },
        }
    }

    pub fn from_file(file: &NormFile) -> Result<Self> {
        io::from_file(file)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: NormFile = serde_json::from_str(text)
            .map_err(|e| Error::invalid_norm(format!("malformed norm file: {e}")))?;
        Self::from_file(&file)
    }
}

/// Uniform radial grid of `n` angles over `[0, π)`, merged with the
/// polygon's vertex and edge-midpoint angles.
pub fn half_circle_grid(norm: &NormSpec, n: usize) -> Vec<f64> {
    let mut angles: Vec<f64> = (0..n).map(|k| PI * k as f64 / n as f64).collect();
    angles.extend(norm.feature_angles());
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    angles
}
