use std::f64::consts::PI;

use pluri_core::arcs::UnitCircleSet;
use pluri_core::grid::*;
use pluri_core::potential::omega_disc;
use pluri_core::{Complex64, Point};

/// Harmonic measure of the outer circle in `r1 < |z| < r2`.
fn annulus_exact(z: Point, r1: f64, r2: f64) -> f64 {
    (z.norm() / r1).ln() / (r2 / r1).ln()
}

fn max_error(field: &ScalarField, exact: impl Fn(Point) -> f64) -> f64 {
    let d = field.domain();
    let (nx, ny) = d.dims();
    let mut e = 0.0f64;
    for j in 0..ny {
        for i in 0..nx {
            if d.class(i, j) == CellClass::Interior {
                e = e.max((field.value(i, j) - exact(d.point(i, j))).abs());
            }
        }
    }
    e
}

#[test]
fn annulus_converges_at_second_order() {
    let shape = AnnulusShape::concentric(0.25, 1.0).unwrap();
    let errs: Vec<f64> = [1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0]
        .iter()
        .map(|&h| {
            let f = solve_extremal(&GridDomain::from_shape(&shape, h).unwrap()).unwrap();
            max_error(&f, |z| annulus_exact(z, 0.25, 1.0))
        })
        .collect();
    for w in errs.windows(2) {
        let r = w[0] / w[1];
        assert!((3.0..=5.0).contains(&r), "{errs:?}");
    }
}

#[test]
fn eccentric_annulus_matches_moebius_oracle() {
    // A = closed disc |z − 0.3| ≤ 0.2; a disc automorphism makes the annulus
    // concentric.
    let (c, rho) = (0.3f64, 0.2f64);
    let s = (1.0 + c * c - rho * rho) / c;
    let p = (s - (s * s - 4.0).sqrt()) / 2.0;
    let m = |z: Point| (z - p) / (Complex64::new(1.0, 0.0) - z * p);
    let r0 = m(Point::new(c + rho, 0.0)).norm();
    let exact = |z: Point| (m(z).norm() / r0).ln() / (1.0 / r0).ln();
    let shape = AnnulusShape::new(Point::new(0.0, 0.0), 1.0, Point::new(c, 0.0), rho).unwrap();
    let f = solve_extremal(&GridDomain::from_shape(&shape, 1.0 / 64.0).unwrap()).unwrap();
    assert!(max_error(&f, exact) < 2e-3);
    assert!((f.sample(Point::new(-0.41, 0.13)).unwrap() - exact(Point::new(-0.41, 0.13))).abs() < 2e-3);
}

#[test]
fn disc_with_boundary_arc_matches_closed_form() {
    let b = UnitCircleSet::from_intervals(&[(0.3, 1.9), (3.5, 5.0)]).unwrap();
    let f = solve_extremal(&GridDomain::from_shape(&DiscShape::unit(b.clone()), 1.0 / 64.0).unwrap()).unwrap();
    let e = max_error(&f, |z| omega_disc(z, &b).unwrap());
    assert!(e < 1e-3, "{e}");
}

#[test]
fn ellipse_with_full_target_is_zero_and_empty_is_one() {
    let full = solve_extremal(&GridDomain::from_shape(&EllipseShape::new(1.0, 0.6, UnitCircleSet::full()).unwrap(), 1.0 / 32.0).unwrap()).unwrap();
    assert!(max_error(&full, |_| 0.0) < 1e-9);
    let empty = solve_extremal(&GridDomain::from_shape(&EllipseShape::new(1.0, 0.6, UnitCircleSet::empty()).unwrap(), 1.0 / 32.0).unwrap()).unwrap();
    assert!(max_error(&empty, |_| 1.0) < 1e-9);
}

#[test]
fn level_identity_on_disc_with_arc() {
    let d = GridDomain::from_shape(&DiscShape::unit(UnitCircleSet::arc(0.0, 1.5 * PI).unwrap()), 1.0 / 64.0).unwrap();
    let r = verify_level_identity_with(&d, 0.5, 4, &SolveOptions::default()).unwrap();
    assert!(r.compared > 100);
    assert!(r.max_deviation < 1e-4, "{}", r.max_deviation);
}

#[test]
fn opposite_arcs_split_the_level_set() {
    // Short arcs, so that ω(0) = 2/3 keeps the components apart.
    let b = UnitCircleSet::from_intervals(&[(-PI / 6.0, PI / 6.0), (5.0 * PI / 6.0, 7.0 * PI / 6.0)]).unwrap();
    let d = GridDomain::from_shape(&DiscShape::unit(b), 1.0 / 64.0).unwrap();
    let f = solve_extremal(&d).unwrap();
    let level = level_set(&f, 0.5).unwrap();
    let comps = level.components();
    assert_eq!(comps.len(), 2);
    for c in &comps {
        assert!(c.is_simply_connected());
        assert_eq!(c.boundary_loops().len(), 1);
    }
    let right = level.component_containing(Point::new(0.9, 0.0)).unwrap();
    assert!(right.outer_boundary().unwrap().contains(Point::new(0.8, 0.1)));
    assert!(!right.outer_boundary().unwrap().contains(Point::new(-0.8, 0.0)));
}

#[test]
fn level_curve_of_half_circle_is_the_diameter() {
    let d = GridDomain::from_shape(&DiscShape::unit(UnitCircleSet::arc(0.0, PI).unwrap()), 1.0 / 32.0).unwrap();
    let level = level_set(&solve_extremal(&d).unwrap(), 0.5).unwrap();
    let outer = level.outer_boundary().unwrap();
    // Upper half-disc, up to the chords of the traced polygon.
    assert!((outer.signed_area() - PI / 2.0).abs() < 5e-3, "{}", outer.signed_area());
    for v in &outer.vertices {
        assert!(v.im > -1e-6 && v.norm() < 1.0 + 1e-9);
    }
}
