//! Brute-force references and random inputs for cross-validation.
//!
//! Nothing here calls the orthogonality or bisector code, nor the
//! one-dimensional minimizers they use.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::geometry::exact::RationalPoint;
use crate::geometry::{convex_hull, ConvexPolygon, Point};
use crate::norm::{NormSpec, PolygonNorm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub t_grid_size: usize,
    pub circle_grid_size: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            t_grid_size: 100_000,
            circle_grid_size: 512,
            seed: 0,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.t_grid_size < 64 || self.circle_grid_size < 64 {
            return Err(Error::InvalidArgument(
                "oracle grids need at least 64 points".into(),
            ));
        }
        Ok(())
    }
}

fn nonzero(p: Point) -> Result<Point> {
    if p.is_zero() || !p.is_finite() {
        Err(Error::ZeroVector)
    } else {
        Ok(p)
    }
}

/// Grid minimum of `t ↦ ‖x̂ + t·ŷ‖` over `[−2, 2]`, refined once on a grid
/// of the same size around the best node.
pub fn brute_sine(norm: &NormSpec, x: Point, y: Point, cfg: &OracleConfig) -> Result<f64> {
    cfg.validate()?;
    let x = nonzero(x)? / norm.gauge(x);
    let y = nonzero(y)? / norm.gauge(y);
    let n = cfg.t_grid_size;
    let scan = |lo: f64, hi: f64| {
        let h = (hi - lo) / (n - 1) as f64;
        (0..n)
            .map(|k| {
                let t = lo + h * k as f64;
                (t, norm.gauge(x + y * t))
            })
            .fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
    };
    let (t0, v0) = scan(-2.0, 2.0);
    let h = 4.0 / (n - 1) as f64;
    let (_, v1) = scan(t0 - h, t0 + h);
    Ok(v0.min(v1))
}

/// Cells of a square grid around the pair on which the bisector equation
/// changes sign or nearly vanishes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BisectorScan {
    pub center: Point,
    pub window: f64,
    pub cells_per_side: usize,
    /// Row-major flags, `true` for cells meeting the bisector.
    pub hit: Vec<bool>,
}

impl BisectorScan {
    pub fn cell_size(&self) -> f64 {
        2.0 * self.window / self.cells_per_side as f64
    }

    fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let h = self.cell_size();
        let i = ((p.u - self.center.u + self.window) / h).floor();
        let j = ((p.v - self.center.v + self.window) / h).floor();
        let n = self.cells_per_side as f64;
        (i >= 0.0 && j >= 0.0 && i < n && j < n).then_some((i as usize, j as usize))
    }

    pub fn is_hit(&self, i: usize, j: usize) -> bool {
        self.hit[j * self.cells_per_side + i]
    }

    /// Whether `p` lies within one cell of a marked cell.
    pub fn near_bisector(&self, p: Point) -> bool {
        let Some((i, j)) = self.cell_of(p) else {
            return false;
        };
        let n = self.cells_per_side as isize;
        (-1..=1).any(|di| {
            (-1..=1).any(|dj| {
                let (a, b) = (i as isize + di, j as isize + dj);
                a >= 0 && b >= 0 && a < n && b < n && self.is_hit(a as usize, b as usize)
            })
        })
    }

    pub fn hit_count(&self) -> usize {
        self.hit.iter().filter(|&&h| h).count()
    }
}

/// Marks the cells of `[m − window, m + window]²` (`m` the midpoint) whose
/// corner values of `‖p − x‖ − ‖p − y‖` straddle zero.
pub fn brute_bisector_scan(
    norm: &NormSpec,
    x: Point,
    y: Point,
    window: f64,
    cfg: &OracleConfig,
) -> Result<BisectorScan> {
    cfg.validate()?;
    if x == y {
        return Err(Error::DegeneratePair);
    }
    let n = cfg.circle_grid_size;
    let center = x.midpoint(y);
    let h = 2.0 * window / n as f64;
    let f = |i: usize, j: usize| {
        let p = center + Point::new(-window + h * i as f64, -window + h * j as f64);
        norm.gauge(p - x) - norm.gauge(p - y)
    };
    let nodes: Vec<f64> = (0..=n)
        .flat_map(|j| (0..=n).map(move |i| (i, j)))
        .map(|(i, j)| f(i, j))
        .collect();
    let node = |i: usize, j: usize| nodes[j * (n + 1) + i];
    let slack = 1e-12;
    let hit = (0..n)
        .flat_map(|j| (0..n).map(move |i| (i, j)))
        .map(|(i, j)| {
            let c = [
                node(i, j),
                node(i + 1, j),
                node(i, j + 1),
                node(i + 1, j + 1),
            ];
            let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            lo <= slack && hi >= -slack
        })
        .collect();
    Ok(BisectorScan {
        center,
        window,
        cells_per_side: n,
        hit,
    })
}

const GRID: f64 = (1u64 << 20) as f64;

/// Convex hull of `n_half` random points (random direction, radius in
/// `[0.5, 1.5]`) and their negatives. Coordinates are snapped to multiples
/// of 2⁻²⁰, so edge vectors and their small dyadic multiples are exact.
pub fn random_symmetric_polygon(n_half: usize, seed: u64) -> Result<ConvexPolygon> {
    if n_half < 2 {
        return Err(Error::InvalidArgument(
            "need at least two generating points".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let snap = |t: f64| (t * GRID).round() / GRID;
        let half: Vec<Point> = (0..n_half)
            .map(|_| Point::polar(rng.gen_range(0.0..PI)) * rng.gen_range(0.5..1.5))
            .map(|p| Point::new(snap(p.u), snap(p.v)))
            .collect();
        let all: Vec<Point> = half.iter().flat_map(|&p| [p, -p]).collect();
        let hull = convex_hull(&all);
        if hull.len() >= 4 {
            if let Ok(poly) = ConvexPolygon::from_cycle(&hull) {
                return Ok(poly);
            }
        }
    }
}

pub fn random_polygon_norm(n_half: usize, seed: u64) -> Result<NormSpec> {
    Ok(NormSpec::Polygon(PolygonNorm::new(
        random_symmetric_polygon(n_half, seed)?,
    )?))
}

/// Random invertible linear map with condition number below about 10.
pub fn random_linear_map(rng: &mut impl Rng) -> [[f64; 2]; 2] {
    loop {
        let m = [
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let frob2: f64 = m.iter().flatten().map(|a| a * a).sum();
        if det.abs() > 0.2 * frob2 {
            return m;
        }
    }
}

/// A polygonal norm together with a Roberts-orthogonal pair: a ball
/// symmetric in both axes, carried by a random linear map `A`, with
/// `x ∥ A·e₁`, `y ∥ A·e₂`.
pub fn random_roberts_pair(seed: u64) -> Result<(NormSpec, Point, Point)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(1..=4);
    let quarter: Vec<Point> = (0..k)
        .map(|_| Point::polar(rng.gen_range(0.05..FRAC_PI_2 - 0.05)) * rng.gen_range(0.5..1.5))
        .collect();
    let mut all = Vec::new();
    for p in &quarter {
        all.extend([*p, Point::new(p.u, -p.v), Point::new(-p.u, p.v), -*p]);
    }
    if rng.gen_bool(0.5) {
        let r = rng.gen_range(0.8..1.6);
        all.extend([Point::new(r, 0.0), Point::new(-r, 0.0)]);
    }
    let base = NormSpec::Polygon(PolygonNorm::new(ConvexPolygon::from_cycle(&convex_hull(
        &all,
    ))?)?);
    let m = random_linear_map(&mut rng);
    let norm = base.linear_image(m)?;
    let (sx, sy) = (rng.gen_range(0.2..3.0), rng.gen_range(0.2..3.0));
    let x = Point::new(m[0][0], m[1][0]) * sx;
    let y = Point::new(m[0][1], m[1][1]) * sy;
    Ok((norm, x, y))
}

/// Rational vertices and facet covectors `h` (with `h·a = h·b = 1` on each
/// edge `[a b]`) of a polygonal ball.
fn rational_polygon(
    norm: &NormSpec,
    what: &str,
) -> Result<(Vec<RationalPoint>, Vec<RationalPoint>)> {
    let poly = norm
        .as_polygon()
        .ok_or_else(|| Error::InvalidArgument(format!("{what} needs a polygonal norm")))?;
    let verts: Vec<RationalPoint> = poly
        .vertices()
        .iter()
        .map(|&v| RationalPoint::from_point(v))
        .collect();
    let n = verts.len();
    let facets = (0..n)
        .map(|i| {
            let (a, b) = (&verts[i], &verts[(i + 1) % n]);
            let c = a.cross(b);
            RationalPoint {
                u: (&b.v - &a.v) / &c,
                v: (&a.u - &b.u) / &c,
            }
        })
        .collect();
    Ok((verts, facets))
}

fn rational_gauge(facets: &[RationalPoint], p: &RationalPoint) -> BigRational {
    facets
        .iter()
        .map(|h| h.dot(p))
        .max()
        .expect("nonempty polygon")
}

/// Exact rational minimum of `t ↦ ‖x̂ + t·ŷ‖` for a polygonal norm, with
/// facets and breakpoints computed over the rationals.
pub fn exact_polygon_sine(norm: &NormSpec, x: Point, y: Point) -> Result<BigRational> {
    let (verts, facets) = rational_polygon(norm, "exact sine")?;
    nonzero(x)?;
    nonzero(y)?;
    let gauge = |p: &RationalPoint| rational_gauge(&facets, p);
    let scale = |p: &RationalPoint, s: &BigRational| RationalPoint {
        u: &p.u * s,
        v: &p.v * s,
    };
    let add = |p: &RationalPoint, q: &RationalPoint| RationalPoint {
        u: &p.u + &q.u,
        v: &p.v + &q.v,
    };

    let (xr, yr) = (RationalPoint::from_point(x), RationalPoint::from_point(y));
    let xh = scale(&xr, &(BigRational::from_integer(1.into()) / gauge(&xr)));
    let yh = scale(&yr, &(BigRational::from_integer(1.into()) / gauge(&yr)));

    let mut best = gauge(&xh);
    for v in &verts {
        let den = v.cross(&yh);
        if den.is_zero() {
            continue;
        }
        let t = -v.cross(&xh) / den;
        let value = gauge(&add(&xh, &scale(&yh, &t)));
        if value < best {
            best = value;
        }
    }
    Ok(best)
}

/// Exact `max_{z ∈ S} ‖T z‖` for the linear map with `T x = x`, `T y = −y`,
/// solved over the rationals and evaluated at the vertices of `S`.
pub fn exact_reflection_sup(norm: &NormSpec, x: Point, y: Point) -> Result<BigRational> {
    let (verts, facets) = rational_polygon(norm, "exact reflection")?;
    let (xr, yr) = (
        RationalPoint::from_point(nonzero(x)?),
        RationalPoint::from_point(nonzero(y)?),
    );
    let det = xr.cross(&yr);
    if det.is_zero() {
        return Err(Error::CollinearAxes);
    }
    // T = [x, −y]·[x, y]⁻¹, applied through the coordinates of z in the basis (x, y).
    let image = |z: &RationalPoint| {
        let a = z.cross(&yr) / &det;
        let b = xr.cross(z) / &det;
        RationalPoint {
            u: &xr.u * &a - &yr.u * &b,
            v: &xr.v * &a - &yr.v * &b,
        }
    };
    Ok(verts
        .iter()
        .map(|v| rational_gauge(&facets, &image(v)))
        .max()
        .expect("nonempty polygon"))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(u: f64, v: f64) -> Point {
        Point::new(u, v)
    }

    #[test]
    fn brute_sine_examples() {
        let cfg = OracleConfig::default();
        assert!(
            (brute_sine(&NormSpec::Euclidean, p(0.0, 1.0), p(1.0, 0.0), &cfg).unwrap() - 1.0).abs()
                < 1e-6
        );
        assert!(
            (brute_sine(&NormSpec::square(), p(1.0, 1.0), p(0.0, 1.0), &cfg).unwrap() - 1.0).abs()
                < 1e-6
        );
        assert_eq!(
            brute_sine(&NormSpec::square(), p(0.0, 0.0), p(0.0, 1.0), &cfg),
            Err(Error::ZeroVector)
        );
        let small = OracleConfig {
            t_grid_size: 10,
            ..cfg
        };
        assert!(brute_sine(&NormSpec::square(), p(1.0, 0.0), p(0.0, 1.0), &small).is_err());
    }

    #[test]
    fn exact_sine_examples() {
        let sq = NormSpec::square();
        let one = BigRational::from_integer(1.into());
        assert_eq!(
            exact_polygon_sine(&sq, p(0.0, 1.0), p(1.0, 0.0)).unwrap(),
            one
        );
        // Rectilinear family: s((q−p)/2, x) = 1/(2 − ‖x − p‖), here with
        // x = (1, −1/2): ‖x − p‖ = 1/2 and the value is 2/3.
        let v = exact_polygon_sine(&sq, p(0.0, 1.0), p(1.0, -0.5)).unwrap();
        assert_eq!(v, BigRational::new(2.into(), 3.into()));
    }

    #[test]
    fn exact_reflection_examples() {
        let sq = NormSpec::square();
        let three = BigRational::from_integer(3.into());
        assert_eq!(
            exact_reflection_sup(&sq, p(1.0, 1.0), p(-1.0, 0.0)).unwrap(),
            three
        );
        let one = BigRational::from_integer(1.into());
        assert_eq!(
            exact_reflection_sup(&sq, p(1.0, 0.0), p(0.0, 1.0)).unwrap(),
            one
        );
        assert_eq!(
            exact_reflection_sup(&sq, p(1.0, 1.0), p(2.0, 2.0)),
            Err(Error::CollinearAxes)
        );
    }

    #[test]
    fn random_polygons_are_valid_and_reproducible() {
        let par = random_symmetric_polygon(2, 7).unwrap();
        assert_eq!(par.len(), 4);
        for seed in 0..20 {
            let a = random_symmetric_polygon(5, seed).unwrap();
            assert_eq!(a, random_symmetric_polygon(5, seed).unwrap());
            let listed: Vec<[f64; 2]> = a.vertices().iter().map(|&v| v.into()).collect();
            let json = serde_json::json!({"type": "polygon", "vertices": listed}).to_string();
            NormSpec::from_json(&json).unwrap();
        }
    }

    #[test]
    fn square_scan_has_axis_and_cones() {
        let cfg = OracleConfig {
            circle_grid_size: 120,
            ..OracleConfig::default()
        };
        let scan =
            brute_bisector_scan(&NormSpec::square(), p(-1.0, 0.0), p(1.0, 0.0), 3.0, &cfg).unwrap();
        assert!(scan.near_bisector(p(0.0, 0.5)));
        assert!(scan.near_bisector(p(1.5, 2.9)));
        assert!(!scan.near_bisector(p(0.8, 0.5)));
        assert!(!scan.near_bisector(p(2.5, 2.9)));
        let e = brute_bisector_scan(&NormSpec::Euclidean, p(-1.0, 0.0), p(1.0, 0.0), 2.0, &cfg)
            .unwrap();
        assert!(e.near_bisector(p(0.0, 1.7)) && !e.near_bisector(p(0.3, 1.7)));
    }

    #[test]
    fn roberts_pairs_have_equal_symmetric_norms() {
        for seed in 0..20 {
            let (norm, x, y) = random_roberts_pair(seed).unwrap();
            for k in -20..=20 {
                let t = k as f64 / 5.0;
                let (a, b) = (norm.gauge(x + y * t), norm.gauge(x - y * t));
                assert!((a - b).abs() <= 1e-12 * a.max(1.0), "seed {seed}, t {t}");
            }
        }
    }
}
