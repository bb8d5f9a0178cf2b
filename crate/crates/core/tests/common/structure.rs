//! Structural checks on bisectors, shared with the acceptance runner. Each
//! returns the number of individual checks made.

use minkconst::bisector::{classify_pair, inner_bisector, trace_bisector, PairKind, TraceSample};
use minkconst::geometry::exact::{rational, RationalPoint};
use minkconst::{NormSpec, Point, Tolerances};
use rand::Rng;

use super::{random_circle_point, random_point};

pub type Checked = Result<usize, String>;

fn scale(p: Point) -> f64 {
    p.euclid().max(1.0)
}

/// Random pairs whose difference avoids every flat direction of the norm.
pub fn strict_pairs(norm: &NormSpec, r: &mut impl Rng, count: usize) -> Vec<(Point, Point)> {
    let mut out = Vec::new();
    while out.len() < count {
        let (x, y) = (random_point(r, 2.0), random_point(r, 2.0));
        if (y - x).euclid() > 0.1 && classify_pair(norm, x, y).unwrap().kind == PairKind::Strict {
            out.push((x, y));
        }
    }
    out
}

/// Each of `lines` parallels to `⟨xy⟩` carries exactly one sign change of
/// `‖p − x‖ − ‖p − y‖`, found by a dense scan.
pub fn unique_crossings(
    name: &str,
    norm: &NormSpec,
    r: &mut impl Rng,
    pairs: usize,
    lines: usize,
) -> Checked {
    let mut n = 0;
    for (x, y) in strict_pairs(norm, r, pairs) {
        let d = y - x;
        let m = x.midpoint(y);
        let e = d.perp() / d.euclid();
        for k in 0..lines {
            let o = -4.0 + 8.0 * k as f64 / (lines - 1) as f64;
            let f = |s: f64| {
                let q = m + e * o + d * s;
                norm.gauge(q - x) - norm.gauge(q - y)
            };
            let mut reach = 1.0;
            while !(f(-reach) < 0.0 && f(reach) > 0.0) {
                reach *= 2.0;
                if reach > 1e6 {
                    return Err(format!("{name}: no sign change on line {o}"));
                }
            }
            let samples = 4000;
            let signs: Vec<f64> = (0..=samples)
                .map(|j| f(-reach + 2.0 * reach * j as f64 / samples as f64))
                .filter(|v| v.abs() > 1e-13)
                .map(f64::signum)
                .collect();
            let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
            if changes != 1 {
                return Err(format!(
                    "{name}: {changes} sign changes for {x:?} {y:?} on line {o}"
                ));
            }
            n += 1;
        }
    }
    Ok(n)
}

/// Non-strict pairs `(x, x + μ(b − a))` along an edge `[ab]`, with the two
/// apices `x − μa` and `x + μb`. Only pairs whose difference is exactly
/// parallel to the edge are kept; the centered pair `(−h, h)` always is
/// when `b − a` is representable.
pub fn non_strict_pairs(
    norm: &NormSpec,
    r: &mut impl Rng,
    count: usize,
) -> Vec<(Point, Point, [Point; 2])> {
    let verts = norm.as_polygon().unwrap().vertices().to_vec();
    let exact_parallel = |d: Point, a: Point, b: Point| {
        let (d, a, b) = (
            RationalPoint::from_point(d),
            RationalPoint::from_point(a),
            RationalPoint::from_point(b),
        );
        b.sub(&a).cross(&d) == rational(0.0)
    };
    let mut out = Vec::new();
    while out.len() < count {
        let i = r.gen_range(0..verts.len());
        let (a, b) = (verts[i], verts[(i + 1) % verts.len()]);
        let mu = [0.25, 0.5, 1.0, 2.0][r.gen_range(0..4)];
        let h = (b - a) * (0.5 * mu);
        if !exact_parallel(h, a, b) {
            continue;
        }
        let c = Point::new(
            r.gen_range(-64..=64) as f64 / 32.0,
            r.gen_range(-64..=64) as f64 / 32.0,
        );
        let (x, y) = if exact_parallel((c + h) - (c - h), a, b) {
            (c - h, c + h)
        } else {
            (-h, h)
        };
        // Apices from the exact difference: y − x = μ'(b − a).
        let mu = (y - x).euclid() / (b - a).euclid();
        out.push((x, y, [x - a * mu, x + b * mu]));
    }
    out
}

fn ray_hit(from: Point, through: Point, base: Point, d: Point) -> Point {
    // from + t(through − from) on the line base + s·d
    let e = through - from;
    let t = (base - from).cross(d) / e.cross(d);
    from + e * t
}

/// Beyond an apex `p` the bisector meets each parallel line in the segment
/// cut out by the rays `[p, 2p − x⟩` and `[p, 2p − y⟩`; before it, in a point.
pub fn apex_ray_segments(
    name: &str,
    norm: &NormSpec,
    r: &mut impl Rng,
    pairs: usize,
    tol: &Tolerances,
) -> Checked {
    let mut n = 0;
    for (x, y, apices) in non_strict_pairs(norm, r, pairs) {
        if classify_pair(norm, x, y).unwrap().kind != PairKind::NonStrict {
            return Err(format!("{name}: {x:?} {y:?} not classified non-strict"));
        }
        let d = y - x;
        let m = x.midpoint(y);
        let level = |q: Point| d.cross(q - m);
        let reach = apices.iter().map(|&a| level(a).abs()).fold(0.0, f64::max) / d.euclid();
        let trace = trace_bisector(norm, x, y, 3.0 * reach + 1.0, 61, tol)
            .map_err(|e| format!("{name}: {e}"))?;
        let mut segments = 0;
        for TraceSample {
            point, segment_hi, ..
        } in &trace.samples
        {
            let l = level(*point);
            let apex = apices
                .iter()
                .copied()
                .find(|&a| level(a).signum() == l.signum());
            let beyond = apex.is_some_and(|a| l.abs() > level(a).abs() * (1.0 + 1e-6));
            match segment_hi {
                Some(hi) => {
                    if !beyond {
                        return Err(format!("{name}: segment below the apex at level {l}"));
                    }
                    let p = apex.unwrap();
                    let (ex, ey) = (ray_hit(x, p, *point, d), ray_hit(y, p, *point, d));
                    let (lo, hi) = (*point, *hi);
                    let ok = |u: Point, v: Point| {
                        (u - lo).euclid() <= 1e-8 * scale(lo)
                            && (v - hi).euclid() <= 1e-8 * scale(hi)
                    };
                    if !(ok(ex, ey) || ok(ey, ex)) {
                        return Err(format!("{name}: [{lo:?}, {hi:?}] vs rays [{ex:?}, {ey:?}]"));
                    }
                    segments += 1;
                    n += 1;
                }
                None if beyond => {
                    return Err(format!("{name}: point sample beyond the apex at level {l}"))
                }
                None => {}
            }
        }
        if segments < 2 {
            return Err(format!("{name}: no segment samples for {x:?} {y:?}"));
        }
    }
    Ok(n)
}

fn in_triangle(p: Point, a: Point, b: Point, c: Point, slack: f64) -> bool {
    let area = (b - a).cross(c - a);
    let s = area.signum();
    let w = [
        (b - a).cross(p - a),
        (c - b).cross(p - b),
        (a - c).cross(p - c),
    ];
    w.iter().all(|&t| s * t >= -slack * area.abs())
}

/// Left-hand unit vectors `y` with `y ⊣_B x`.
fn birkhoff_partners(norm: &NormSpec, x: Point) -> Vec<Point> {
    match norm.parallel_flat_spot(x) {
        Some(spot) => {
            let (a, b) = (spot.segment.a, spot.segment.b);
            let (a, b) = if x.cross(a) > 0.0 { (a, b) } else { (-a, -b) };
            vec![a, a.midpoint(b), b]
        }
        None => vec![norm.left_support(x)],
    }
}

/// `bis(−x, x) ∩ B` on the side of `y` lies in `conv{o, y + 2x, y − 2x}`
/// whenever `y ⊣_B x`; random `x` plus polygon vertices and edge midpoints.
pub fn inner_triangle(
    name: &str,
    norm: &NormSpec,
    r: &mut impl Rng,
    count: usize,
    tol: &Tolerances,
) -> Checked {
    let mut n = 0;
    let mut xs: Vec<Point> = (0..count).map(|_| random_circle_point(norm, r)).collect();
    if let Some(poly) = norm.as_polygon() {
        xs.extend(poly.vertices().iter().copied());
        xs.extend(poly.polygon().edges().map(|e| norm.normalize(e.midpoint())));
    }
    for x in xs {
        let trace =
            inner_bisector(norm, norm.on_circle(x), 64, tol).map_err(|e| format!("{name}: {e}"))?;
        for y in birkhoff_partners(norm, x) {
            for s in &trace.samples {
                let q = s.point;
                let side = if x.cross(q) >= 0.0 { y } else { -y };
                if !in_triangle(q, Point::ORIGIN, side + x * 2.0, side - x * 2.0, 1e-9) {
                    return Err(format!(
                        "{name}: x {x:?}, y {y:?}: {q:?} outside the triangle"
                    ));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}

/// For a strict pair and `z ∈ bis(x, y) \ [xy]`, every bisector point lies in
/// the cone at `z` spanned by `x − z` and `y − z`, or in its reflection.
pub fn double_cone(
    name: &str,
    norm: &NormSpec,
    r: &mut impl Rng,
    pairs: usize,
    tol: &Tolerances,
) -> Checked {
    let mut n = 0;
    for (x, y) in strict_pairs(norm, r, pairs) {
        let trace = trace_bisector(norm, x, y, 3.0, 31, tol).map_err(|e| format!("{name}: {e}"))?;
        let pts: Vec<Point> = trace.points().collect();
        for s in trace.samples.iter().filter(|s| s.offset.abs() > 0.05) {
            let z = s.point;
            let (ex, ey) = (x - z, y - z);
            let det = ex.cross(ey);
            for &w in &pts {
                let v = w - z;
                let alpha = v.cross(ey) / det;
                let beta = ex.cross(v) / det;
                let eps = 1e-7 * (1.0 + alpha.abs() + beta.abs());
                if !((alpha >= -eps && beta >= -eps) || (alpha <= eps && beta <= eps)) {
                    return Err(format!(
                        "{name}: z {z:?}, w {w:?}: coefficients ({alpha}, {beta})"
                    ));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}
