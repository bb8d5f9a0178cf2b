mod common;

use common::structure::{apex_ray_segments, double_cone, inner_triangle, unique_crossings};
use common::{full_battery, random_circle_point, random_point, rng};
use minkconst::bisector::{bisector_contains_line, trace_bisector};
use minkconst::oracle::random_roberts_pair;
use minkconst::{NormSpec, Point, Tolerances};
use rand::Rng;

fn scale(p: Point) -> f64 {
    p.euclid().max(1.0)
}

#[test]
fn every_sample_is_equidistant() {
    let tol = Tolerances::default();
    let mut r = rng(21);
    for (name, norm) in full_battery() {
        for _ in 0..5 {
            let (x, y) = (random_point(&mut r, 2.0), random_point(&mut r, 2.0));
            let trace = trace_bisector(&norm, x, y, 3.0, 41, &tol).unwrap();
            for q in trace.points() {
                let f = norm.gauge(q - x) - norm.gauge(q - y);
                assert!(f.abs() <= 1e-9 * scale(q), "{name}: {q:?} gives {f}");
            }
        }
    }
}

#[test]
fn strict_pairs_meet_each_parallel_line_once() {
    let mut r = rng(22);
    for (name, norm) in full_battery() {
        unique_crossings(&name, &norm, &mut r, 3, 50).unwrap();
    }
}

#[test]
fn non_strict_segments_end_on_apex_rays() {
    let tol = Tolerances::default();
    let mut r = rng(23);
    for (name, norm) in full_battery()
        .into_iter()
        .filter(|(_, n)| n.as_polygon().is_some())
    {
        assert!(apex_ray_segments(&name, &norm, &mut r, 4, &tol).unwrap() >= 8);
    }
}

#[test]
fn inner_bisectors_stay_in_the_triangle() {
    let tol = Tolerances::default();
    let mut r = rng(24);
    for (name, norm) in full_battery() {
        inner_triangle(&name, &norm, &mut r, 12, &tol).unwrap();
    }
}

#[test]
fn strict_bisectors_stay_in_the_double_cone() {
    let tol = Tolerances::default();
    let mut r = rng(25);
    for (name, norm) in full_battery() {
        double_cone(&name, &norm, &mut r, 3, &tol).unwrap();
    }
}

#[test]
fn bisector_lines_and_the_swapped_pair() {
    let tol = Tolerances::default();
    // A ball symmetric under T_xy has ⟨o x⟩ inside bis(−y, y); the line then
    // carries a symmetric pair whose bisector contains ⟨o y⟩.
    for seed in 0..60 {
        let (norm, x, y) = random_roberts_pair(seed).unwrap();
        let (x, y) = (norm.normalize(x), norm.normalize(y));
        assert!(
            bisector_contains_line(&norm, -y, y, &tol).unwrap(),
            "seed {seed}"
        );
        for s in [0.3, 1.0, 2.5] {
            let (z, w) = (x * s, -x * s);
            for t in [-2.0, -0.4, 0.0, 0.7, 3.0] {
                let q = y * t;
                let diff = norm.gauge(z - q) - norm.gauge(w - q);
                assert!(
                    diff.abs() <= 1e-12 * (s + t.abs()).max(1.0),
                    "seed {seed}: {diff}"
                );
            }
        }
    }
    let mut r = rng(26);
    for _ in 0..50 {
        let (x, y) = (random_point(&mut r, 2.0), random_point(&mut r, 2.0));
        assert!(bisector_contains_line(&NormSpec::Euclidean, x, y, &tol).unwrap());
    }
    let hex = NormSpec::hexagon();
    let mut falses = 0;
    for _ in 0..50 {
        let (x, y) = (
            random_circle_point(&hex, &mut r),
            random_circle_point(&hex, &mut r),
        );
        if (x - y).euclid() > 0.1 && !bisector_contains_line(&hex, x, y, &tol).unwrap() {
            falses += 1;
        }
    }
    assert!(falses > 40, "{falses}");
}

#[test]
fn traces_follow_translations_and_homotheties() {
    let tol = Tolerances::default();
    let mut r = rng(27);
    for (name, norm) in full_battery() {
        let (x, y) = (random_point(&mut r, 2.0), random_point(&mut r, 2.0));
        let c = random_point(&mut r, 3.0);
        let lam = r.gen_range(0.3..4.0);
        let base = trace_bisector(&norm, x, y, 2.0, 21, &tol).unwrap();
        let moved = trace_bisector(&norm, x + c, y + c, 2.0, 21, &tol).unwrap();
        let scaled = trace_bisector(&norm, x * lam, y * lam, 2.0 * lam, 21, &tol).unwrap();
        for ((a, b), s) in base.samples.iter().zip(&moved.samples).zip(&scaled.samples) {
            assert!(
                (a.point + c - b.point).euclid() <= 1e-8 * scale(b.point),
                "{name}: {a:?} {b:?}"
            );
            assert!(
                (a.point * lam - s.point).euclid() <= 1e-8 * scale(s.point),
                "{name}: {a:?} {s:?}"
            );
            assert_eq!(a.segment_hi.is_some(), b.segment_hi.is_some());
        }
    }
}
