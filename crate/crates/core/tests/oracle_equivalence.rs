mod common;

use common::agreement::{sines_agree, trace_in_scan};
use common::{full_battery, p, rng};
use minkconst::oracle::{brute_bisector_scan, exact_polygon_sine, OracleConfig};
use minkconst::{NormSpec, Tolerances};
use num_rational::BigRational;

#[test]
fn three_sines_agree_on_polygons() {
    let polygons: Vec<_> = full_battery()
        .into_iter()
        .filter(|(_, n)| n.as_polygon().is_some())
        .collect();
    sines_agree(&polygons, &mut rng(31), 200).unwrap();
}

#[test]
fn sine_matches_brute_force_on_smooth_norms() {
    let smooth: Vec<_> = full_battery()
        .into_iter()
        .filter(|(_, n)| n.as_polygon().is_none())
        .collect();
    sines_agree(&smooth, &mut rng(32), 200).unwrap();
}

#[test]
fn exact_sine_of_the_rectilinear_family() {
    let sq = NormSpec::square();
    for k in 1..16 {
        // x = (1, −1 + k/32) on the right edge, w = (0, 1).
        let x = p(1.0, -1.0 + k as f64 / 32.0);
        let dist = BigRational::new(k.into(), 32.into());
        let expected =
            BigRational::from_integer(1.into()) / (BigRational::from_integer(2.into()) - dist);
        assert_eq!(
            exact_polygon_sine(&sq, p(0.0, 1.0), x).unwrap(),
            expected,
            "k={k}"
        );
    }
}

#[test]
fn traces_lie_in_scanned_cells() {
    let tol = Tolerances::default();
    let mut r = rng(33);
    for (name, norm) in full_battery() {
        trace_in_scan(&name, &norm, &mut r, 2, &tol).unwrap();
    }
}

#[test]
fn square_scan_matches_closed_form() {
    // bis((−1,0), (1,0)) for the max-norm: u = 0 for |v| ≤ 1, |u| ≤ |v| − 1 beyond.
    let sq = NormSpec::square();
    let cfg = OracleConfig {
        circle_grid_size: 128,
        ..OracleConfig::default()
    };
    let scan = brute_bisector_scan(&sq, p(-1.0, 0.0), p(1.0, 0.0), 3.0, &cfg).unwrap();
    let h = scan.cell_size();
    for j in 0..128 {
        for i in 0..128 {
            let c = p(-3.0 + h * (i as f64 + 0.5), -3.0 + h * (j as f64 + 0.5));
            let dist = if c.v.abs() <= 1.0 {
                c.u.abs()
            } else {
                (c.u.abs() - (c.v.abs() - 1.0)).max(0.0)
            };
            if scan.is_hit(i, j) {
                assert!(dist <= h, "cell {c:?}");
            } else {
                assert!(dist > 0.0, "cell {c:?} missed");
            }
        }
    }
}
