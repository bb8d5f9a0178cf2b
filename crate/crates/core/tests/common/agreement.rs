//! Main paths against the oracles, shared with the acceptance runner.

use minkconst::bisector::trace_bisector;
use minkconst::oracle::{
    brute_bisector_scan, brute_sine, exact_polygon_sine, to_f64, OracleConfig,
};
use minkconst::ortho::sine;
use minkconst::{NormSpec, Point, Tolerances};
use rand::Rng;

use super::{p, random_point};

/// Random point with coordinates in multiples of 1/64.
pub fn rational_point(r: &mut impl Rng) -> Point {
    loop {
        let q = p(
            r.gen_range(-128..=128) as f64 / 64.0,
            r.gen_range(-128..=128) as f64 / 64.0,
        );
        if !q.is_zero() {
            return q;
        }
    }
}

/// `sine`, `brute_sine` and, on polygons, `exact_polygon_sine` within `1e−6`,
/// over `count` inputs spread across `norms`.
pub fn sines_agree(
    norms: &[(String, NormSpec)],
    r: &mut impl Rng,
    count: usize,
) -> Result<usize, String> {
    let cfg = OracleConfig::default();
    for k in 0..count {
        let (name, norm) = &norms[k % norms.len()];
        let fail = |e: minkconst::Error| format!("{name}: {e}");
        if norm.as_polygon().is_some() {
            let (x, y) = (rational_point(r), rational_point(r));
            let fast = sine(norm, x, y).map_err(fail)?.value;
            let brute = brute_sine(norm, x, y, &cfg).map_err(fail)?;
            let exact = to_f64(&exact_polygon_sine(norm, x, y).map_err(fail)?);
            if (fast - exact).abs() > 1e-6 || (brute - exact).abs() > 1e-6 {
                return Err(format!(
                    "{name}: {x:?} {y:?}: sine {fast}, brute {brute}, exact {exact}"
                ));
            }
        } else {
            let (x, y) = (random_point(r, 2.0), random_point(r, 2.0));
            let fast = sine(norm, x, y).map_err(fail)?.value;
            let brute = brute_sine(norm, x, y, &cfg).map_err(fail)?;
            if (fast - brute).abs() > 1e-6 {
                return Err(format!("{name}: {x:?} {y:?}: sine {fast}, brute {brute}"));
            }
        }
    }
    Ok(count)
}

/// Trace points fall within one cell of the brute-force scan.
pub fn trace_in_scan(
    name: &str,
    norm: &NormSpec,
    r: &mut impl Rng,
    pairs: usize,
    tol: &Tolerances,
) -> Result<usize, String> {
    let cfg = OracleConfig {
        circle_grid_size: 400,
        ..OracleConfig::default()
    };
    let window = 3.0;
    let mut n = 0;
    for _ in 0..pairs {
        let (x, y) = (random_point(r, 1.5), random_point(r, 1.5));
        let scan =
            brute_bisector_scan(norm, x, y, window, &cfg).map_err(|e| format!("{name}: {e}"))?;
        let trace = trace_bisector(norm, x, y, 2.0, 41, tol).map_err(|e| format!("{name}: {e}"))?;
        let m = x.midpoint(y);
        let inner = window - scan.cell_size();
        for q in trace.points() {
            let d = q - m;
            if d.u.abs() < inner && d.v.abs() < inner {
                if !scan.near_bisector(q) {
                    return Err(format!(
                        "{name}: {q:?} outside the scanned bisector of {x:?} {y:?}"
                    ));
                }
                n += 1;
            }
        }
    }
    Ok(n)
}
