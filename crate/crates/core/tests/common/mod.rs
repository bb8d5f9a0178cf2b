#![allow(dead_code)]

pub mod agreement;
pub mod structure;

use minkconst::oracle::random_polygon_norm;
use minkconst::{NormSpec, Point};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn p(u: f64, v: f64) -> Point {
    Point::new(u, v)
}

/// Named norms; `∞` is covered by the square.
pub fn battery() -> Vec<(String, NormSpec)> {
    let mut out = vec![
        ("square".to_string(), NormSpec::square()),
        ("hexagon".to_string(), NormSpec::hexagon()),
        (
            "octagon".to_string(),
            NormSpec::regular_polygon(8, 0.0).unwrap(),
        ),
        (
            "12-gon".to_string(),
            NormSpec::regular_polygon(12, 0.0).unwrap(),
        ),
        ("euclidean".to_string(), NormSpec::Euclidean),
        (
            "ellipse".to_string(),
            NormSpec::sampled_ellipse(1.5, 0.7, 0.4, 2048).unwrap(),
        ),
    ];
    for q in [1.0, 1.5, 2.0, 3.0, 4.0] {
        out.push((format!("l{q}"), NormSpec::lp(q).unwrap()));
    }
    out
}

pub fn random_polygons() -> Vec<(String, NormSpec)> {
    (0..10u64)
        .map(|k| {
            (
                format!("random#{k}"),
                random_polygon_norm(2 + (k as usize % 5), 1000 + k).unwrap(),
            )
        })
        .collect()
}

pub fn full_battery() -> Vec<(String, NormSpec)> {
    let mut all = battery();
    all.extend(random_polygons());
    all
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut impl Rng, r: f64) -> Point {
    loop {
        let q = p(rng.gen_range(-r..r), rng.gen_range(-r..r));
        if q.euclid() > 1e-3 * r {
            return q;
        }
    }
}

pub fn random_circle_point(norm: &NormSpec, rng: &mut impl Rng) -> Point {
    norm.circle_point(rng.gen_range(0.0..std::f64::consts::TAU))
        .point
}
