use std::f64::consts::{FRAC_PI_4, PI};

use pluri_core::arcs::UnitCircleSet;
use pluri_core::conformal::*;
use pluri_core::grid::{level_set, solve_extremal, AnnulusShape, DiscShape, GridDomain, HalfDiscShape};
use pluri_core::{Complex64, Error, Point};

const H: f64 = 1.0 / 64.0;

fn lattice(inside: impl Fn(Point) -> bool) -> Vec<Point> {
    (-20..=20)
        .flat_map(|i| (-20..=20).map(move |j| Point::new(i as f64 / 20.0, j as f64 / 20.0)))
        .filter(|&z| inside(z))
        .collect()
}

fn max_dev(m: &DiscreteConformalMap, pts: &[Point], oracle: impl Fn(Point) -> Point) -> f64 {
    pts.iter()
        .filter(|&&z| oracle(z).norm() <= 0.9)
        .map(|&z| (m.eval(z).unwrap() - oracle(z)).norm())
        .fold(0.0, f64::max)
}

/// Half-disc onto the upper half plane, then onto the disc with the same
/// normalization as the map under test.
fn half_disc_oracle(center: Point) -> impl Fn(Point) -> Point {
    let one = Complex64::new(1.0, 0.0);
    let g = move |z: Point| ((one + z) / (one - z)).powi(2);
    let dg = move |z: Point| (one + z) / (one - z) * 4.0 / ((one - z) * (one - z));
    let p = g(center);
    let d = dg(center) / Complex64::new(0.0, 2.0 * p.im);
    let rot = Complex64::from_polar(1.0, -d.arg());
    move |z| rot * (g(z) - p) / (g(z) - p.conj())
}

#[test]
fn disc_component_maps_affinely() {
    let c = Point::new(0.1, -0.05);
    let d = GridDomain::from_shape(&DiscShape::new(c, 0.7, UnitCircleSet::empty()).unwrap(), H).unwrap();
    let m = riemann_map(&d, c).unwrap();
    let pts = lattice(|z| (z - c).norm() < 0.7);
    assert!(max_dev(&m, &pts, |z| (z - c) / 0.7) < 1e-3);
    let zeta = c + Complex64::from_polar(0.7, 2.0);
    let l = endpoint_limit(&m, zeta, FRAC_PI_4).unwrap();
    assert!((l - Complex64::from_polar(1.0, 2.0)).norm() < 1e-3);
}

#[test]
fn unit_disc_off_center_is_a_moebius_map() {
    let d = GridDomain::from_shape(&DiscShape::unit(UnitCircleSet::empty()), H).unwrap();
    let a = Point::new(0.3, 0.2);
    let m = riemann_map(&d, a).unwrap();
    let pts = lattice(|z| z.norm() < 1.0);
    assert!(max_dev(&m, &pts, |z| (z - a) / (1.0 - a.conj() * z)) < 1e-3);
    let id = riemann_map(&d, Point::new(0.0, 0.0)).unwrap();
    let l = endpoint_limit(&id, Point::new(1.0, 0.0), FRAC_PI_4).unwrap();
    assert!((l - 1.0).norm() < 1e-4);
}

#[test]
fn half_disc_matches_closed_chain() {
    let d = GridDomain::from_shape(&HalfDiscShape, H).unwrap();
    let center = Point::new(0.0, 0.5);
    let m = riemann_map(&d, center).unwrap();
    let oracle = half_disc_oracle(center);
    let pts = lattice(|z| z.im > 0.0 && z.norm() < 1.0);
    assert!(max_dev(&m, &pts, &oracle) < 1e-3);
    let zeta = Complex64::from_polar(1.0, FRAC_PI_4);
    assert!((endpoint_limit(&m, zeta, FRAC_PI_4).unwrap() - oracle(zeta)).norm() < 1e-3);
}

#[test]
fn map_invariants_on_a_level_component() {
    let b = UnitCircleSet::arc(0.0, 1.5 * PI).unwrap();
    let d = GridDomain::from_shape(&DiscShape::unit(b), H).unwrap();
    let omega = level_set(&solve_extremal(&d).unwrap(), 0.25).unwrap();
    let center = Point::new(0.2, 0.2);
    let m = riemann_map(&omega, center).unwrap();
    assert!(m.eval(center).unwrap().norm() < 1e-12);
    let (_, d0) = m.eval_with_derivative(center).unwrap();
    assert!(d0.re > 0.0 && d0.im.abs() < 1e-9 * d0.re);
    // Round trip on |w| ≤ 0.95.
    for k in 0..64 {
        let w = Complex64::from_polar(0.95 * (k % 8) as f64 / 7.0, k as f64);
        assert!((m.eval(m.inverse(w).unwrap()).unwrap() - w).norm() < TOL_ROUND_TRIP);
    }
    // Boundary modulus at chord midpoints; the zipper's edges are arcs
    // through the vertices, so a chord midpoint may sit a hair outside.
    let v = &m.boundary().vertices;
    for k in (0..v.len()).step_by(7) {
        let mid = (v[k] + v[(k + 1) % v.len()]) * 0.5;
        if m.boundary().contains(mid) {
            let r = m.eval(mid).unwrap().norm();
            assert!((r - 1.0).abs() <= TOL_BOUNDARY, "{r}");
        }
    }
    // Conformality: centred differences satisfy Cauchy-Riemann.
    let z = Point::new(-0.1, 0.3);
    let e = 1e-4;
    let fx = (m.eval(z + e).unwrap() - m.eval(z - e).unwrap()) / (2.0 * e);
    let fy = (m.eval(z + Complex64::i() * e).unwrap() - m.eval(z - Complex64::i() * e).unwrap()) / (2.0 * e);
    assert!((fy - Complex64::i() * fx).norm() < 1e-6 * fx.norm());
}

#[test]
fn annulus_is_refused() {
    let d = GridDomain::from_shape(&AnnulusShape::concentric(0.3, 1.0).unwrap(), H).unwrap();
    assert!(matches!(riemann_map(&d, Point::new(0.6, 0.0)), Err(Error::Topology(_))));
    let disc = GridDomain::from_shape(&DiscShape::unit(UnitCircleSet::empty()), H).unwrap();
    assert!(matches!(riemann_map(&disc, Point::new(1.5, 0.0)), Err(Error::Domain(_))));
}

#[test]
fn whole_disc_has_every_density_point_as_end_point() {
    let b = UnitCircleSet::full();
    let d = GridDomain::from_shape(&DiscShape::unit(b.clone()), H).unwrap();
    let opts = EndPointOptions { samples: 512, ..Default::default() };
    assert_eq!(end_points_with(&d, &b, &opts).len(), 512);
}

#[test]
fn end_points_of_a_thin_component_lie_in_the_arc() {
    let b = UnitCircleSet::arc(1.0, 2.5).unwrap();
    let d = GridDomain::from_shape(&DiscShape::unit(b.clone()), H).unwrap();
    let omega = level_set(&solve_extremal(&d).unwrap(), 0.9).unwrap();
    let ends = end_points(&omega, &b);
    assert!(!ends.is_empty());
    for z in ends {
        let t = z.arg();
        assert!(t > 1.0 && t < 2.5);
    }
}

#[test]
fn end_points_partition_among_components() {
    let b = UnitCircleSet::from_intervals(&[(-PI / 6.0, PI / 6.0), (5.0 * PI / 6.0, 7.0 * PI / 6.0)]).unwrap();
    let d = GridDomain::from_shape(&DiscShape::unit(b.clone()), H).unwrap();
    let level = level_set(&solve_extremal(&d).unwrap(), 0.5).unwrap();
    let opts = EndPointOptions { samples: 1024, ..Default::default() };
    let per: Vec<Vec<Point>> = level.components().iter().map(|c| end_points_with(c, &b, &opts)).collect();
    assert_eq!(per.len(), 2);
    let total: usize = per.iter().map(Vec::len).sum();
    // Every end-point belongs to one component only.
    let mut all: Vec<f64> = per.iter().flatten().map(|z| z.arg()).collect();
    all.sort_by(f64::total_cmp);
    all.dedup();
    assert_eq!(all.len(), total);
    // Away from the arc ends, every sampled density point is an end-point.
    let dense = (0..1024)
        .map(|k| 2.0 * PI * (k as f64 + 0.5) / 1024.0)
        .filter(|&t| b.contains(t) && b.distance_to_endpoints(t) > 0.1)
        .count();
    assert!(total >= dense);
    for side in &per {
        let right = side[0].re > 0.0;
        assert!(side.iter().all(|z| (z.re > 0.0) == right));
    }
}

#[test]
fn transfer_identity() {
    let samples: Vec<Point> = (0..10)
        .map(|k| Complex64::from_polar(0.2 + 0.07 * k as f64, 0.3 + 0.25 * k as f64))
        .collect();
    let opts = TransferOptions { h: H, ..Default::default() };
    let r = verify_transfer_identity_with(&UnitCircleSet::arc(0.0, PI).unwrap(), 0.5, &samples, &opts).unwrap();
    assert!(r.max_deviation < 5e-2, "{}", r.max_deviation);
    assert!(r.end_points > 0);
    // δ = 0 keeps the disc and maps it by (nearly) the identity.
    let b = UnitCircleSet::arc(0.5, 2.5).unwrap();
    let r = verify_transfer_identity_with(&b, 0.0, &samples, &opts).unwrap();
    assert!(r.max_deviation < 1e-3, "{}", r.max_deviation);
    assert!((r.image.measure() - b.measure()).abs() < 1e-2);
}
