//! Bisectors `bis(x, y) = {z : ‖z − x‖ = ‖z − y‖}`: pair classification,
//! per-line intersection, curve tracing and the inner bisector of `(−x, x)`.

use serde::Serialize;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::minimize::bisect_predicate;
use crate::norm::{CirclePoint, FlatSpot, NormSpec};
use crate::ortho::roberts_test;
use crate::tolerances::Tolerances;

/// Offset of the first inner-bisector sample, taken close to the origin so
/// that the limiting direction there is represented.
const ORIGIN_PROBE: f64 = 1e-7;
/// Bracket doublings before giving up on a sign change.
const MAX_EXPANSIONS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairKind {
    Strict,
    NonStrict,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairClass {
    pub kind: PairKind,
    /// Unit-circle segment parallel to `y − x`, oriented along it.
    pub witness: Option<FlatSpot>,
    /// Centers `x − λa` and `x + λb` of the two circles having `[xy]` as a
    /// maximal chord.
    pub apices: Option<(Point, Point)>,
}

/// Intersection of the bisector with one line parallel to `⟨xy⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum LineHit {
    Point(Point),
    /// Leftmost and rightmost zero, in the direction `y − x`.
    Segment(Point, Point),
}

impl LineHit {
    pub fn lo(&self) -> Point {
        match *self {
            LineHit::Point(p) | LineHit::Segment(p, _) => p,
        }
    }

    pub fn hi(&self) -> Option<Point> {
        match *self {
            LineHit::Point(_) => None,
            LineHit::Segment(_, q) => Some(q),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceSample {
    pub offset: f64,
    pub point: Point,
    pub segment_hi: Option<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "stop", rename_all = "snake_case")]
pub enum Truncation {
    /// The offset grid was exhausted.
    OffsetRange { offset_max: f64 },
    /// The curve left the unit ball; the last sample is the refined exit.
    ExitedBall,
    /// Non-strict pair whose apex lies inside the ball; stopped at the apex.
    /// Flagged for review.
    ApexInsideBall { apex: Point },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BisectorTrace {
    pub x: Point,
    pub y: Point,
    pub samples: Vec<TraceSample>,
    pub truncation: Truncation,
}

impl BisectorTrace {
    /// Rows `offset,u,v,u_hi,v_hi`; the last two are empty for single points.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("offset,u,v,u_hi,v_hi\n");
        for s in &self.samples {
            let _ = write!(out, "{},{},{}", s.offset, s.point.u, s.point.v);
            match s.segment_hi {
                Some(q) => {
                    let _ = writeln!(out, ",{},{}", q.u, q.v);
                }
                None => out.push_str(",,\n"),
            }
        }
        out
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.samples
            .iter()
            .flat_map(|s| std::iter::once(s.point).chain(s.segment_hi))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnerProjectionSet {
    pub direction_samples: Vec<CirclePoint>,
    pub degenerate: bool,
}

pub fn classify_pair(norm: &NormSpec, x: Point, y: Point) -> Result<PairClass> {
    let d = y - x;
    if d.is_zero() {
        return Err(Error::DegeneratePair);
    }
    Ok(match norm.parallel_flat_spot(d) {
        None => PairClass {
            kind: PairKind::Strict,
            witness: None,
            apices: None,
        },
        Some(spot) => {
            let (a, b) = (spot.segment.a, spot.segment.b);
            let lambda = norm.gauge(d) / norm.gauge(b - a);
            PairClass {
                kind: PairKind::NonStrict,
                witness: Some(spot),
                apices: Some((x - a * lambda, x + b * lambda)),
            }
        }
    })
}

/// Coordinates `p(o, s) = m + o·n + s·d` adapted to a pair, with
/// `d = y − x`, `m` the midpoint and `n` a unit vector, `n ⊣_B d`, on the
/// left of `d`. The offset `o` is then the distance from `⟨xy⟩`.
#[derive(Clone, Copy, Debug)]
struct Frame {
    x: Point,
    y: Point,
    m: Point,
    n: Point,
    d: Point,
    class: PairClass,
    /// Offsets of the apices (positive, negative) for non-strict pairs.
    apex_offsets: Option<(f64, f64)>,
}

impl Frame {
    fn new(norm: &NormSpec, x: Point, y: Point) -> Result<Self> {
        let class = classify_pair(norm, x, y)?;
        let d = y - x;
        let m = x.midpoint(y);
        let n = norm.left_support(d);
        let apex_offsets = class.apices.map(|(p, q)| {
            let op = d.cross(p - m) / d.cross(n);
            let oq = d.cross(q - m) / d.cross(n);
            (op.max(oq), op.min(oq))
        });
        Ok(Self {
            x,
            y,
            m,
            n,
            d,
            class,
            apex_offsets,
        })
    }

    fn at(&self, o: f64, s: f64) -> Point {
        self.m + self.n * o + self.d * s
    }

    fn f(&self, norm: &NormSpec, o: f64, s: f64) -> f64 {
        let p = self.at(o, s);
        norm.gauge(p - self.x) - norm.gauge(p - self.y)
    }

    /// True when the line at offset `o` lies beyond an apex, where the
    /// intersection with the bisector is two-dimensional.
    fn beyond_apex(&self, o: f64) -> bool {
        match self.apex_offsets {
            Some((hi, lo)) => {
                let eps = 1e-12 * hi.abs().max(1.0);
                o > hi + eps || o < lo - eps
            }
            None => false,
        }
    }

    fn hit(&self, norm: &NormSpec, o: f64, tol: &Tolerances) -> Result<LineHit> {
        let tau = tol.tol_bis;
        let f = |s: f64| self.f(norm, o, s);
        // f is nondecreasing in s: it is a forward difference of a convex function.
        let mut reach = 1.0;
        let mut expansions = 0;
        while !(f(-reach) < -tau && f(reach) > tau) {
            expansions += 1;
            if expansions > MAX_EXPANSIONS || !reach.is_finite() {
                return Err(Error::NonConvergence(format!(
                    "no sign change of the bisector equation at offset {o:e}"
                )));
            }
            reach *= 2.0;
        }
        // Resolve s well below the size of the point, also near the origin.
        let eps = 1e-16 * reach * o.abs().clamp(1e-3, 1.0);
        if self.beyond_apex(o) {
            let (_, left) = bisect_predicate(|s| f(s) < -tau, -reach, reach, eps);
            let (right, _) = bisect_predicate(|s| f(s) <= tau, -reach, reach, eps);
            if right > left {
                return Ok(LineHit::Segment(self.at(o, left), self.at(o, right)));
            }
        }
        let (lo, hi) = bisect_predicate(|s| f(s) < 0.0, -reach, reach, eps);
        let s = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
        Ok(LineHit::Point(self.at(o, s)))
    }
}

/// Intersection of `bis(x, y)` with the line at signed distance `offset`
/// from `⟨xy⟩` (positive on the left of `y − x`).
pub fn bisector_on_line(
    norm: &NormSpec,
    x: Point,
    y: Point,
    offset: f64,
    tol: &Tolerances,
) -> Result<LineHit> {
    Frame::new(norm, x, y)?.hit(norm, offset, tol)
}

/// Samples the bisector on `n_steps` equally spaced offsets in
/// `[−offset_max, offset_max]`.
pub fn trace_bisector(
    norm: &NormSpec,
    x: Point,
    y: Point,
    offset_max: f64,
    n_steps: usize,
    tol: &Tolerances,
) -> Result<BisectorTrace> {
    if n_steps < 2 || offset_max <= 0.0 || !offset_max.is_finite() {
        return Err(Error::InvalidArgument(
            "trace needs n_steps >= 2 and a positive offset range".into(),
        ));
    }
    let frame = Frame::new(norm, x, y)?;
    let samples = (0..n_steps)
        .map(|k| {
            let offset = offset_max * (2.0 * k as f64 / (n_steps - 1) as f64 - 1.0);
            let hit = frame.hit(norm, offset, tol)?;
            Ok(TraceSample {
                offset,
                point: hit.lo(),
                segment_hi: hit.hi(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BisectorTrace {
        x,
        y,
        samples,
        truncation: Truncation::OffsetRange { offset_max },
    })
}

/// The curve `bis(−x, x)` with its pair frame built once.
pub(crate) struct InnerCurve<'a> {
    norm: &'a NormSpec,
    tol: &'a Tolerances,
    frame: Frame,
}

impl<'a> InnerCurve<'a> {
    pub(crate) fn new(norm: &'a NormSpec, x: Point, tol: &'a Tolerances) -> Result<Self> {
        Ok(Self {
            norm,
            tol,
            frame: Frame::new(norm, -x, x)?,
        })
    }

    /// Bisector point on the line at distance `o` from `⟨ox⟩`.
    pub(crate) fn point(&self, o: f64) -> Result<Point> {
        self.frame.hit(self.norm, o, self.tol).map(|hit| hit.lo())
    }

    /// Samples with positive offset, origin excluded; the other half is
    /// their negation.
    pub(crate) fn half(&self, n_steps: usize) -> Result<(Vec<TraceSample>, Truncation)> {
        let (norm, tol, frame) = (self.norm, self.tol, &self.frame);
        let n_steps = n_steps.max(2);
        let h = 1.0 / n_steps as f64;
        let apex_stop = match (frame.class.kind, frame.class.apices, frame.apex_offsets) {
            // The apices of (−x, x) are antipodal; keep the one on the left.
            (PairKind::NonStrict, Some((p, q)), Some((hi, _))) => {
                let apex = if frame.d.cross(p) > 0.0 { p } else { q };
                (norm.gauge(apex) < 1.0 - tol.tol_norm).then_some((hi, apex))
            }
            _ => None,
        };

        let mut samples = Vec::with_capacity(n_steps + 2);
        let mut offsets = vec![ORIGIN_PROBE];
        offsets.extend((1..=2 * n_steps).map(|k| k as f64 * h));
        for o in offsets {
            if let Some((o_apex, apex)) = apex_stop {
                if o >= o_apex {
                    samples.push(TraceSample {
                        offset: o_apex,
                        point: apex,
                        segment_hi: None,
                    });
                    return Ok((samples, Truncation::ApexInsideBall { apex }));
                }
            }
            let p = self.point(o)?;
            if norm.gauge(p) > 1.0 {
                let inside = samples.last().map_or(0.0, |s: &TraceSample| s.offset);
                let (lo, _) = bisect_predicate(
                    |t| self.point(t).map(|q| norm.gauge(q) <= 1.0).unwrap_or(false),
                    inside,
                    o,
                    tol.tol_bis,
                );
                let exit = self.point(lo)?;
                if samples.last().is_some_and(|s| lo - s.offset <= 1e-15) {
                    samples.pop();
                }
                if lo > 0.0 {
                    samples.push(TraceSample {
                        offset: lo,
                        point: exit,
                        segment_hi: None,
                    });
                }
                return Ok((samples, Truncation::ExitedBall));
            }
            samples.push(TraceSample {
                offset: o,
                point: p,
                segment_hi: None,
            });
        }
        Err(Error::NonConvergence(
            "inner bisector did not leave the unit ball".into(),
        ))
    }
}

/// `bis(−x, x) ∩ B`, traced outward from the origin in both half-planes.
pub fn inner_bisector(
    norm: &NormSpec,
    x: CirclePoint,
    n_steps: usize,
    tol: &Tolerances,
) -> Result<BisectorTrace> {
    let (half, truncation) = InnerCurve::new(norm, x.point, tol)?.half(n_steps)?;
    let mut samples: Vec<TraceSample> = half
        .iter()
        .rev()
        .map(|s| TraceSample {
            offset: -s.offset,
            point: -s.point,
            segment_hi: None,
        })
        .collect();
    samples.push(TraceSample {
        offset: 0.0,
        point: Point::ORIGIN,
        segment_hi: None,
    });
    samples.extend(half);
    Ok(BisectorTrace {
        x: -x.point,
        y: x.point,
        samples,
        truncation,
    })
}

/// `P_I(x)`: radial projections of the nonzero inner-bisector points.
pub fn inner_projection(
    norm: &NormSpec,
    x: CirclePoint,
    n_steps: usize,
    tol: &Tolerances,
) -> Result<InnerProjectionSet> {
    let trace = inner_bisector(norm, x, n_steps, tol)?;
    let direction_samples: Vec<CirclePoint> = trace
        .samples
        .iter()
        .filter(|s| !s.point.is_zero())
        .map(|s| norm.on_circle(s.point))
        .collect();
    let first = direction_samples.first().map(|c| c.point);
    let degenerate = first.is_some_and(|f| {
        direction_samples.iter().all(|c| {
            let (a, b) = (f / f.euclid(), c.point / c.point.euclid());
            a.cross(b).abs() <= tol.tol_dir
        })
    });
    Ok(InnerProjectionSet {
        direction_samples,
        degenerate,
    })
}

/// Whether `bis(x, y)` contains a line, decided through invariance of `S`
/// under a reflection whose fixed axis is `y − x`.
///
/// The line direction is the bisector point at unit offset for strict pairs
/// and `a + b` for a non-strict pair with parallel flat `[ab]` (the line
/// through the two apices, the only candidate).
pub fn bisector_contains_line(
    norm: &NormSpec,
    x: Point,
    y: Point,
    tol: &Tolerances,
) -> Result<bool> {
    let class = classify_pair(norm, x, y)?;
    let h = (y - x) * 0.5;
    let w = match class.witness {
        Some(spot) => spot.segment.a + spot.segment.b,
        None => bisector_on_line(norm, -h, h, 1.0, tol)?.lo(),
    };
    roberts_test(norm, h, w, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(u: f64, v: f64) -> Point {
        Point::new(u, v)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn near(a: Point, b: Point, eps: f64) -> bool {
        (a - b).euclid() <= eps
    }

    #[test]
    fn classify_examples() {
        let sq = NormSpec::square();
        let c = classify_pair(&sq, p(-1.0, 0.0), p(1.0, 0.0)).unwrap();
        assert_eq!(c.kind, PairKind::NonStrict);
        let (a, b) = c.apices.unwrap();
        let mut both = [a, b];
        both.sort_by(|s, t| s.v.total_cmp(&t.v));
        assert_eq!(both, [p(0.0, -1.0), p(0.0, 1.0)]);
        assert_eq!(
            classify_pair(&sq, p(0.0, 0.0), p(1.0, 1.0)).unwrap().kind,
            PairKind::Strict
        );
        assert_eq!(
            classify_pair(&NormSpec::Euclidean, p(0.3, 0.1), p(-2.0, 1.0))
                .unwrap()
                .kind,
            PairKind::Strict
        );
        assert_eq!(
            classify_pair(&sq, p(1.0, 1.0), p(1.0, 1.0)),
            Err(Error::DegeneratePair)
        );
    }

    #[test]
    fn line_examples() {
        let sq = NormSpec::square();
        let t = tol();
        let (x, y) = (p(-1.0, 0.0), p(1.0, 0.0));
        match bisector_on_line(&sq, x, y, 0.5, &t).unwrap() {
            LineHit::Point(q) => assert!(near(q, p(0.0, 0.5), 1e-12), "{q:?}"),
            other => panic!("{other:?}"),
        }
        match bisector_on_line(&sq, x, y, 2.0, &t).unwrap() {
            LineHit::Segment(a, b) => {
                assert!(
                    near(a, p(-1.0, 2.0), 1e-9) && near(b, p(1.0, 2.0), 1e-9),
                    "{a:?} {b:?}"
                );
            }
            other => panic!("{other:?}"),
        }
        for norm in [
            NormSpec::Euclidean,
            NormSpec::hexagon(),
            NormSpec::lp(3.0).unwrap(),
        ] {
            let (x, y) = (p(0.2, -0.7), p(1.4, 0.9));
            let q = bisector_on_line(&norm, x, y, 0.0, &t).unwrap().lo();
            assert!(near(q, x.midpoint(y), 1e-9), "{}", norm.kind());
        }
    }

    #[test]
    fn square_trace_matches_closed_form() {
        let sq = NormSpec::square();
        let t = tol();
        let trace = trace_bisector(&sq, p(-1.0, 0.0), p(1.0, 0.0), 3.0, 25, &t).unwrap();
        for s in &trace.samples {
            let w = (s.offset.abs() - 1.0).max(0.0);
            if w > 1e-9 {
                let hi = s.segment_hi.expect("segment beyond the apex");
                assert!(near(s.point, p(-w, s.offset), 1e-9) && near(hi, p(w, s.offset), 1e-9));
            } else {
                assert!(near(s.point, p(0.0, s.offset), 1e-9));
            }
        }
        let e =
            trace_bisector(&NormSpec::Euclidean, p(-1.0, 0.0), p(1.0, 0.0), 2.0, 9, &t).unwrap();
        assert!(e
            .samples
            .iter()
            .all(|s| s.point.u.abs() < 1e-12 && s.segment_hi.is_none()));
    }

    #[test]
    fn inner_bisector_examples() {
        let t = tol();
        for norm in [NormSpec::Euclidean, NormSpec::square()] {
            let x = norm.circle_point(0.0);
            let trace = inner_bisector(&norm, x, 32, &t).unwrap();
            assert_eq!(trace.truncation, Truncation::ExitedBall);
            assert!(trace.points().all(|q| q.u.abs() < 1e-9));
            let last = trace.samples.last().unwrap().point;
            assert!(near(last, p(0.0, 1.0), 1e-9), "{last:?}");
            assert!(near(trace.samples[0].point, p(0.0, -1.0), 1e-9));
            let proj = inner_projection(&norm, x, 32, &t).unwrap();
            assert!(proj.degenerate);
            assert!(proj
                .direction_samples
                .iter()
                .all(|c| near(c.point, p(0.0, 1.0), 1e-9) || near(c.point, p(0.0, -1.0), 1e-9)));
        }
    }

    #[test]
    fn rectilinear_inner_bisector_at_vertex() {
        // Adjacent vertices p = (1,-1), q = (1,1): bis_I(-p, p) = [(-q) q].
        let sq = NormSpec::square();
        let t = tol();
        let x = sq.on_circle(p(1.0, -1.0));
        let trace = inner_bisector(&sq, x, 40, &t).unwrap();
        for q in trace.points() {
            assert!((q.u - q.v).abs() < 1e-9, "{q:?}");
        }
        assert!(near(trace.samples.last().unwrap().point, p(1.0, 1.0), 1e-9));
    }

    #[test]
    fn contains_line_examples() {
        let t = tol();
        let e = NormSpec::Euclidean;
        for k in 0..8 {
            let x = Point::polar(0.4 * k as f64);
            let y = Point::polar(1.3 + 0.7 * k as f64);
            assert!(bisector_contains_line(&e, x, y, &t).unwrap());
        }
        assert!(
            bisector_contains_line(&NormSpec::square(), p(-1.0, 0.0), p(1.0, 0.0), &t).unwrap()
        );
        let hex = NormSpec::hexagon();
        let v = hex.as_polygon().unwrap().vertices().to_vec();
        assert!(!bisector_contains_line(&hex, v[0], v[1].midpoint(v[2]), &t).unwrap());
    }

    #[test]
    fn csv_rows() {
        let trace = trace_bisector(
            &NormSpec::square(),
            p(-1.0, 0.0),
            p(1.0, 0.0),
            2.0,
            3,
            &tol(),
        )
        .unwrap();
        let csv = trace.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "offset,u,v,u_hi,v_hi");
        assert_eq!(lines.len(), 4);
        assert!(lines[2].ends_with(",,"));
        assert_eq!(lines[3].split(',').count(), 5);
    }
}
