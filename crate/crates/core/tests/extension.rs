use std::f64::consts::PI;

use pluri_core::arcs::UnitCircleSet;
use pluri_core::cross::two_constant_bound;
use pluri_core::extension::*;
use pluri_core::{Complex64, Point};

fn three_quarter() -> UnitCircleSet {
    UnitCircleSet::arc(0.0, 1.5 * PI).unwrap()
}

fn points() -> Vec<(Point, Point)> {
    vec![
        (Point::new(0.05, 0.02), Point::new(-0.03, 0.04)),
        (Point::new(0.3, 0.2), Point::new(-0.1, 0.25)),
        (Point::new(-0.2, 0.4), Point::new(0.5, 0.1)),
        (Point::new(0.1, -0.15), Point::new(-0.35, -0.2)),
    ]
}

#[test]
fn carleman_limit_recovers_every_test_function() {
    let g = build_g(&three_quarter(), &three_quarter()).unwrap();
    let opts = CarlemanOptions::default();
    for f in TestFunction::ALL {
        for (z, w) in points() {
            let r = carleman_limit(&f, &g, z, w, &opts).unwrap();
            let exact = f.eval(z, w);
            assert!((r.value - exact).norm() <= 1e-4 * exact.norm(), "{} at {z},{w}: {}", f.name(), r.value);
            assert!(r.gaps.windows(2).all(|p| p[1] < p[0]), "{:?}", r.gaps);
            assert!(r.omega_total <= 0.7);
        }
    }
}

#[test]
fn extension_obeys_the_two_constant_bound() {
    let a = three_quarter();
    let g = build_g(&a, &a).unwrap();
    let f = TestFunction::ExpZPlusW;
    // |e^{z+w}| = e^{Re z + Re w}: the suprema are attained on the closures.
    let sup_arc = (0..4096)
        .map(|k| (1.5 * PI * (k as f64 + 0.5) / 4096.0).cos())
        .fold(f64::MIN, f64::max);
    let m = (2.0 * sup_arc).exp();
    let big_m = 2f64.exp();
    for (z, w) in points() {
        let r = carleman_limit(&f, &g, z, w, &CarlemanOptions::default()).unwrap();
        let bound = two_constant_bound(r.omega_total, m, big_m).unwrap();
        assert!(r.value.norm() <= bound + 1e-6);
    }
}

#[test]
fn schedule_stops_at_the_first_small_gap() {
    let g = build_g(&three_quarter(), &three_quarter()).unwrap();
    let r = carleman_limit(&TestFunction::Zw, &g, Point::new(0.2, 0.1), Point::new(0.1, -0.2), &CarlemanOptions::default()).unwrap();
    assert_eq!(r.gaps.len(), r.gaps.iter().position(|&x| x < 1e-6).unwrap() + 1);
    assert!(r.cauchy_gap < 1e-6);
}

#[test]
fn points_near_the_envelope_edge_are_refused() {
    let q = UnitCircleSet::arc(0.0, 0.5 * PI).unwrap();
    let g = build_g(&q, &q).unwrap();
    let err = carleman_limit(&TestFunction::Const1, &g, Point::new(-0.3, 0.0), Point::new(-0.3, 0.0), &CarlemanOptions::default());
    assert!(matches!(err, Err(pluri_core::Error::Domain(_))));
}

#[test]
fn threefold_product_is_reconstructed() {
    let a = three_quarter();
    let g = build_g(&a, &a).unwrap();
    let f = |a: Point, l: Point, b: Point| a * l * b;
    let (z, t, w) = (Point::new(0.1, 0.2), Point::new(-0.5, 0.4), Point::new(0.2, -0.1));
    let v = reconstruct_threefold(&f, &g, z, t, w, 64, &CarlemanOptions::default()).unwrap();
    let exact = z * t * w;
    assert!((v - exact).norm() <= 1e-3 * exact.norm());
}

#[test]
fn hartogs_figure_determines_the_bidisc() {
    let fs: [fn(Point, Point) -> Complex64; 2] = [|a, b| (a * b).exp(), |a, b| 1.0 / ((2.0 - a) * (2.0 - b))];
    for f in fs {
        for (z1, z2) in [(Point::new(0.9, 0.0), Point::new(0.0, 0.8)), (Point::new(-0.5, 0.6), Point::new(0.3, -0.4))] {
            let r = 0.3;
            let guarded = |a: Point, b: Point| {
                assert!(a.norm() < r || b.norm() > 1.0 - r);
                f(a, b)
            };
            let v = hartogs_extend(guarded, r, z1, z2, HARTOGS_NODES).unwrap();
            assert!((v - f(z1, z2)).norm() < 1e-10);
        }
    }
}
